#include "sal/decoder.hpp"

#include "core/errors.hpp"

namespace wsod::sal {

namespace {

bool power_of_two_ratio(int big, int small) {
    if (big < small || small <= 0) return false;
    int r = big / small;
    if (r * small != big && (big % small) != 0) return false;
    return (r & (r - 1)) == 0;
}

}  // namespace

SaliencyDecoder::SaliencyDecoder(int c3, int c4, int c5, const DecoderConfig& cfg) : cfg_(cfg) {
    require_config(cfg.mid_channels >= 1, "decoder: mid_channels must be >= 1");
    const int m = cfg.mid_channels;
    conv3a_ = nn::Conv3x3(c3, m);
    conv3b_ = nn::Conv3x3(m, m);
    conv4a_ = nn::Conv3x3(c4, m);
    conv4b_ = nn::Conv3x3(m, m);
    conv5a_ = nn::Conv3x3(c5, m);
    conv5b_ = nn::Conv3x3(m, m);
    fuse_ = nn::Conv3x3(3 * m, 1);
}

void SaliencyDecoder::init(Rng& rng) {
    conv3a_.init_he(rng);
    conv3b_.init_he(rng);
    conv4a_.init_he(rng);
    conv4b_.init_he(rng);
    conv5a_.init_he(rng);
    conv5b_.init_he(rng);
    // wider fuse init so fresh models emit spatially structured logits
    // instead of a near-constant 0.5 map; the negative bias encodes the
    // salient-objects-are-minority prior
    fuse_.init_he(rng, 1.5);
    fuse_.b[0] = -0.4;
}

std::vector<nn::ParamRef> SaliencyDecoder::params() {
    std::vector<nn::ParamRef> out;
    conv3a_.collect_params("decoder.conv3a", out);
    conv3b_.collect_params("decoder.conv3b", out);
    conv4a_.collect_params("decoder.conv4a", out);
    conv4b_.collect_params("decoder.conv4b", out);
    conv5a_.collect_params("decoder.conv5a", out);
    conv5b_.collect_params("decoder.conv5b", out);
    fuse_.collect_params("decoder.fuse", out);
    return out;
}

SaliencyDecoder::Acts SaliencyDecoder::forward(const Tensor3& f3, const Tensor3& f4,
                                               const Tensor3& f5) const {
    require_runtime(power_of_two_ratio(f3.h, f4.h) && power_of_two_ratio(f4.h, f5.h) &&
                        power_of_two_ratio(f3.w, f4.w) && power_of_two_ratio(f4.w, f5.w),
                    "decoder: feature sizes must be power-of-two related with f3 >= f4 >= f5");

    Acts a;
    a.a3a = nn::relu(conv3a_.forward(f3));
    a.a3b = nn::relu(conv3b_.forward(a.a3a));
    a.a4a = nn::relu(conv4a_.forward(f4));
    a.a4b = nn::relu(conv4b_.forward(a.a4a));
    a.a5a = nn::relu(conv5a_.forward(f5));
    a.a5b = nn::relu(conv5b_.forward(a.a5a));

    a.up4 = nn::upsample_bilinear(a.a4b, f3.h, f3.w);
    a.up5 = nn::upsample_bilinear(a.a5b, f3.h, f3.w);
    a.cat = nn::concat_channels({&a.up5, &a.up4, &a.a3b});

    Tensor3 logit = fuse_.forward(a.cat);
    Map2D logit_map(logit.h, logit.w);
    std::copy(logit.v.begin(), logit.v.end(), logit_map.v.begin());
    a.prob = nn::sigmoid(logit_map);
    return a;
}

void SaliencyDecoder::backward(const Acts& a, const Tensor3& f3, const Tensor3& f4,
                               const Tensor3& f5, const Map2D& gprob, Tensor3& g3, Tensor3& g4,
                               Tensor3& g5, nn::GradStore& grads) const {
    Map2D glogit_map = nn::sigmoid_backward(a.prob, gprob);
    Tensor3 glogit(1, glogit_map.h, glogit_map.w);
    std::copy(glogit_map.v.begin(), glogit_map.v.end(), glogit.v.begin());

    Tensor3 gcat = fuse_.backward(a.cat, glogit, grads["decoder.fuse.w"], grads["decoder.fuse.b"]);
    auto parts = nn::split_channels(gcat, {a.up5.c, a.up4.c, a.a3b.c});

    Tensor3 g5b = nn::upsample_bilinear_backward(parts[0], a.a5b.h, a.a5b.w);
    Tensor3 g4b = nn::upsample_bilinear_backward(parts[1], a.a4b.h, a.a4b.w);
    const Tensor3& g3b = parts[2];

    Tensor3 t = conv3b_.backward(a.a3a, nn::relu_backward(a.a3b, g3b), grads["decoder.conv3b.w"],
                                 grads["decoder.conv3b.b"]);
    g3 = conv3a_.backward(f3, nn::relu_backward(a.a3a, t), grads["decoder.conv3a.w"],
                          grads["decoder.conv3a.b"]);

    t = conv4b_.backward(a.a4a, nn::relu_backward(a.a4b, g4b), grads["decoder.conv4b.w"],
                         grads["decoder.conv4b.b"]);
    g4 = conv4a_.backward(f4, nn::relu_backward(a.a4a, t), grads["decoder.conv4a.w"],
                          grads["decoder.conv4a.b"]);

    t = conv5b_.backward(a.a5a, nn::relu_backward(a.a5b, g5b), grads["decoder.conv5b.w"],
                         grads["decoder.conv5b.b"]);
    g5 = conv5a_.backward(f5, nn::relu_backward(a.a5a, t), grads["decoder.conv5a.w"],
                          grads["decoder.conv5a.b"]);
}

Map2D decode(const SaliencyDecoder& dec, const Tensor3& f3, const Tensor3& f4, const Tensor3& f5,
             int out_h, int out_w) {
    SaliencyDecoder::Acts a = dec.forward(f3, f4, f5);
    return resize_bilinear(a.prob, out_h, out_w);
}

}  // namespace wsod::sal
