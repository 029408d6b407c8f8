#pragma once

#include "nn/layers.hpp"

namespace wsod::sal {

struct DecoderConfig {
    int mid_channels = 64;
};

// Bottom-up fusion decoder: each of F3/F4/F5 passes two 3x3 conv+relu layers
// to mid_channels; F5' and F4' are upsampled to F3' size, concatenated with
// F3', fused by one 3x3 conv to a single logit map, and squashed by sigmoid.
// The caller upsamples the result to the network input resolution.
class SaliencyDecoder {
public:
    SaliencyDecoder() = default;
    SaliencyDecoder(int c3, int c4, int c5, const DecoderConfig& cfg);

    void init(Rng& rng);
    std::vector<nn::ParamRef> params();

    struct Acts {
        Tensor3 a3a, a3b, a4a, a4b, a5a, a5b;  // post-relu level features
        Tensor3 up4, up5, cat;
        Map2D prob;  // sigmoid output at F3 resolution
    };

    Acts forward(const Tensor3& f3, const Tensor3& f4, const Tensor3& f5) const;

    // gprob: gradient at the sigmoid output. Returns gradients for f3/f4/f5.
    void backward(const Acts& acts, const Tensor3& f3, const Tensor3& f4, const Tensor3& f5,
                  const Map2D& gprob, Tensor3& g3, Tensor3& g4, Tensor3& g5,
                  nn::GradStore& grads) const;

    int mid_channels() const { return cfg_.mid_channels; }

private:
    DecoderConfig cfg_;
    nn::Conv3x3 conv3a_, conv3b_, conv4a_, conv4b_, conv5a_, conv5b_;
    nn::Conv3x3 fuse_;
};

// Standalone Eq.-4 style decode for a frozen decoder: prediction upsampled to
// out_h x out_w in [0,1].
Map2D decode(const SaliencyDecoder& dec, const Tensor3& f3, const Tensor3& f4, const Tensor3& f5,
             int out_h, int out_w);

}  // namespace wsod::sal
