#pragma once

#include <map>
#include <string>
#include <vector>

namespace wsod::nn {

// Named view over a model parameter vector. Models expose their parameters
// through this so the optimizer and checkpoint code stay model-agnostic.
struct ParamRef {
    std::string name;
    std::vector<double>* value;
};

// name -> gradient buffer, shaped like the parameter. std::map keeps the
// reduction order fixed.
using GradStore = std::map<std::string, std::vector<double>>;

GradStore make_grads(const std::vector<ParamRef>& params);
void accumulate(GradStore& dst, const GradStore& src);
void scale(GradStore& grads, double factor);

}  // namespace wsod::nn
