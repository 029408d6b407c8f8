#include "sal/model.hpp"

#include <filesystem>

#include "core/errors.hpp"
#include "core/fsutil.hpp"
#include "core/parallel.hpp"
#include "data/image_io.hpp"

namespace wsod::sal {

SaliencyModel SaliencyModel::create(const DecoderConfig& cfg, Rng& rng,
                                    const std::optional<nn::Checkpoint>& encoder_init) {
    SaliencyModel model;
    model.backbone_.init(rng);
    model.decoder_ = SaliencyDecoder(model.backbone_.out_channels(3), model.backbone_.out_channels(4),
                                     model.backbone_.out_channels(5), cfg);
    model.decoder_.init(rng);

    if (encoder_init) {
        bool compatible = encoder_init->backbone == nn::TinyBackbone::kName;
        if (compatible) {
            for (const auto& p : model.backbone_.params()) {
                auto it = encoder_init->tensors.find(p.name);
                if (it == encoder_init->tensors.end() || it->second.size() != p.value->size()) {
                    compatible = false;
                    break;
                }
            }
        }
        // shapes must match to transfer; otherwise keep the scratch init
        if (compatible)
            for (const auto& p : model.backbone_.params())
                *p.value = encoder_init->tensors.at(p.name);
    }
    return model;
}

std::vector<nn::ParamRef> SaliencyModel::params() {
    auto out = backbone_.params();
    auto dp = decoder_.params();
    out.insert(out.end(), dp.begin(), dp.end());
    return out;
}

SaliencyModel::ForwardState SaliencyModel::forward_full(const Tensor3& image) const {
    ForwardState s;
    s.acts = backbone_.forward(image);
    s.dec = decoder_.forward(s.acts.f3, s.acts.f4, s.acts.f5);
    s.prediction = resize_bilinear(s.dec.prob, image.h, image.w);
    return s;
}

void SaliencyModel::backward(const ForwardState& s, const Map2D& gpred,
                             nn::GradStore& grads) const {
    // undo the final upsample
    Tensor3 gp(1, gpred.h, gpred.w);
    std::copy(gpred.v.begin(), gpred.v.end(), gp.v.begin());
    Tensor3 gsmall = nn::upsample_bilinear_backward(gp, s.dec.prob.h, s.dec.prob.w);
    Map2D gprob(s.dec.prob.h, s.dec.prob.w);
    std::copy(gsmall.v.begin(), gsmall.v.end(), gprob.v.begin());

    Tensor3 g3, g4, g5;
    decoder_.backward(s.dec, s.acts.f3, s.acts.f4, s.acts.f5, gprob, g3, g4, g5, grads);
    backbone_.backward(s.acts, &g3, &g4, &g5, grads);
}

nn::Checkpoint SaliencyModel::to_checkpoint() const {
    nn::Checkpoint ckpt;
    SaliencyModel* self = const_cast<SaliencyModel*>(this);
    for (const auto& p : self->params()) ckpt.tensors[p.name] = *p.value;
    ckpt.backbone = nn::TinyBackbone::kName;
    ckpt.role = "saliency";
    return ckpt;
}

SaliencyModel SaliencyModel::from_checkpoint(const nn::Checkpoint& ckpt) {
    require_runtime(ckpt.role == "saliency", "checkpoint role is not 'saliency'");
    require_runtime(ckpt.backbone == nn::TinyBackbone::kName,
                    "checkpoint backbone '" + ckpt.backbone + "' does not match this build");
    SaliencyModel model;
    model.decoder_ = SaliencyDecoder(model.backbone_.out_channels(3), model.backbone_.out_channels(4),
                                     model.backbone_.out_channels(5), DecoderConfig{});
    for (const auto& p : model.params()) {
        auto it = ckpt.tensors.find(p.name);
        require_runtime(it != ckpt.tensors.end(), "checkpoint is missing tensor " + p.name);
        require_runtime(it->second.size() == p.value->size(),
                        "checkpoint tensor shape mismatch for " + p.name);
        *p.value = it->second;
    }
    return model;
}

void infer(const data::DatasetManifest& manifest, const SaliencyModel& model, int input_size,
           const std::string& out_dir) {
    make_dirs(out_dir);
    const int n = static_cast<int>(manifest.entries.size());
    parallel_chunks(n, n, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const auto& entry = manifest.entries[i];
            Tensor3 img = data::load_image(manifest.resolve(entry.image_path), input_size);
            Map2D pred = model.forward(img);
            std::string stem = std::filesystem::path(entry.image_path).stem().string();
            data::save_map(pred, join_path(out_dir, stem + ".png"));
        }
    });
}

}  // namespace wsod::sal
