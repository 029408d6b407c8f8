#include "nn/backbone.hpp"

#include <cstdio>

#include "core/errors.hpp"

namespace wsod::nn {

namespace {
constexpr int kChannels[6] = {3, 16, 32, 48, 64, 96};
}

TinyBackbone::TinyBackbone() {
    for (int i = 0; i < 5; ++i) blocks_[i] = Conv3x3(kChannels[i], kChannels[i + 1], 2);
}

void TinyBackbone::init(Rng& rng) {
    for (auto& b : blocks_) b.init_he(rng);
}

BackboneActs TinyBackbone::forward(const Tensor3& image) const {
    BackboneActs a;
    a.input = image;
    a.f1 = relu(blocks_[0].forward(a.input));
    a.f2 = relu(blocks_[1].forward(a.f1));
    a.f3 = relu(blocks_[2].forward(a.f2));
    a.f4 = relu(blocks_[3].forward(a.f3));
    a.f5 = relu(blocks_[4].forward(a.f4));
    return a;
}

void TinyBackbone::backward(const BackboneActs& acts, const Tensor3* g3, const Tensor3* g4,
                            const Tensor3* g5, GradStore& grads) const {
    const Tensor3* outs[5] = {&acts.f1, &acts.f2, &acts.f3, &acts.f4, &acts.f5};
    const Tensor3* ins[5] = {&acts.input, &acts.f1, &acts.f2, &acts.f3, &acts.f4};
    const Tensor3* ext[5] = {nullptr, nullptr, g3, g4, g5};

    Tensor3 g;  // gradient flowing down, empty until the first external grad
    for (int i = 4; i >= 0; --i) {
        if (ext[i]) {
            if (g.v.empty())
                g = *ext[i];
            else
                for (size_t k = 0; k < g.v.size(); ++k) g.v[k] += ext[i]->v[k];
        }
        if (g.v.empty()) continue;
        Tensor3 glin = relu_backward(*outs[i], g);
        char name[16];
        std::snprintf(name, sizeof(name), "block%d", i + 1);
        g = blocks_[i].backward(*ins[i], glin, grads[std::string("backbone.") + name + ".w"],
                                grads[std::string("backbone.") + name + ".b"]);
    }
}

std::vector<ParamRef> TinyBackbone::params() {
    std::vector<ParamRef> out;
    for (int i = 0; i < 5; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "backbone.block%d", i + 1);
        blocks_[i].collect_params(name, out);
    }
    return out;
}

int TinyBackbone::out_channels(int level) const {
    require_runtime(level >= 1 && level <= 5, "backbone level out of range");
    return kChannels[level];
}

bool backbone_is_known(const std::string& name) { return name == "tiny" || name == "densenet169"; }

void require_buildable_backbone(const std::string& name) {
    if (name == "tiny") return;
    if (name == "densenet169")
        fail_runtime(
            "backbone 'densenet169' is the full-scale preset and is not runnable in this build; "
            "use --preset tiny (backbone 'tiny') for desk-scale runs");
    fail_config("unknown backbone: " + name);
}

}  // namespace wsod::nn
