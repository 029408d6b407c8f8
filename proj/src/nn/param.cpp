#include "nn/param.hpp"

#include <cassert>

namespace wsod::nn {

GradStore make_grads(const std::vector<ParamRef>& params) {
    GradStore g;
    for (const auto& p : params) g[p.name] = std::vector<double>(p.value->size(), 0.0);
    return g;
}

void accumulate(GradStore& dst, const GradStore& src) {
    for (const auto& [name, grad] : src) {
        auto it = dst.find(name);
        assert(it != dst.end() && it->second.size() == grad.size());
        for (size_t i = 0; i < grad.size(); ++i) it->second[i] += grad[i];
    }
}

void scale(GradStore& grads, double factor) {
    for (auto& [name, grad] : grads)
        for (double& g : grad) g *= factor;
}

}  // namespace wsod::nn
