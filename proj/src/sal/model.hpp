#pragma once

#include <optional>
#include <string>

#include "data/manifest.hpp"
#include "nn/backbone.hpp"
#include "nn/checkpoint.hpp"
#include "sal/decoder.hpp"

namespace wsod::sal {

// Stage-2 encoder-decoder network. Inference is end-to-end: no refinement or
// CRF ever touches test-time predictions.
class SaliencyModel {
public:
    SaliencyModel() = default;

    // encoder_init: stage-1 classifier checkpoint to copy backbone weights
    // from (shapes must match); nullopt initializes from scratch.
    static SaliencyModel create(const DecoderConfig& cfg, Rng& rng,
                                const std::optional<nn::Checkpoint>& encoder_init);

    std::vector<nn::ParamRef> params();

    struct ForwardState {
        nn::BackboneActs acts;
        SaliencyDecoder::Acts dec;
        Map2D prediction;  // input resolution
    };

    ForwardState forward_full(const Tensor3& image) const;
    Map2D forward(const Tensor3& image) const { return forward_full(image).prediction; }

    // gpred: gradient at the full-resolution prediction.
    void backward(const ForwardState& state, const Map2D& gpred, nn::GradStore& grads) const;

    nn::Checkpoint to_checkpoint() const;
    static SaliencyModel from_checkpoint(const nn::Checkpoint& ckpt);

    const SaliencyDecoder& decoder() const { return decoder_; }
    const nn::TinyBackbone& backbone() const { return backbone_; }

private:
    nn::TinyBackbone backbone_;
    SaliencyDecoder decoder_;
};

// Writes one 8-bit grayscale prediction PNG per manifest entry into out_dir.
void infer(const data::DatasetManifest& manifest, const SaliencyModel& model, int input_size,
           const std::string& out_dir);

}  // namespace wsod::sal
