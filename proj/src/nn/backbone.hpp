#pragma once

#include <memory>
#include <string>

#include "nn/layers.hpp"

namespace wsod::nn {

// Activations kept from a forward pass; f3/f4/f5 feed the CAM head and the
// saliency decoder (strides 8/16/32 relative to the input).
struct BackboneActs {
    Tensor3 input;
    Tensor3 f1, f2, f3, f4, f5;
};

// Five stride-2 conv+relu blocks, 3->16->32->48->64->96 channels (~102k
// parameters). The desk-scale "tiny" preset.
class TinyBackbone {
public:
    TinyBackbone();

    void init(Rng& rng);
    BackboneActs forward(const Tensor3& image) const;

    // External gradients for f3/f4/f5 may be null when unused (the classifier
    // only backpropagates from f5).
    void backward(const BackboneActs& acts, const Tensor3* g3, const Tensor3* g4, const Tensor3* g5,
                  GradStore& grads) const;

    std::vector<ParamRef> params();
    int out_channels(int level) const;  // level 3, 4 or 5

    static constexpr const char* kName = "tiny";

private:
    Conv3x3 blocks_[5];
};

// Recognized backbone names: "tiny" (buildable) and "densenet169" (the
// full-scale preset; resolves in configs but has no runtime in this build).
bool backbone_is_known(const std::string& name);
void require_buildable_backbone(const std::string& name);

}  // namespace wsod::nn
