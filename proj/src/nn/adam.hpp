#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nn/param.hpp"

namespace wsod::nn {

// Adam with bias correction (beta1 0.9, beta2 0.999, eps 1e-8). Moment
// buffers are keyed by parameter name so they serialize with checkpoints.
class Adam {
public:
    explicit Adam(double lr = 1e-3) : lr_(lr) {}

    void set_lr(double lr) { lr_ = lr; }
    double lr() const { return lr_; }

    void step(const std::vector<ParamRef>& params, const GradStore& grads);

    uint64_t t() const { return t_; }
    std::map<std::string, std::vector<double>> export_state() const;
    void import_state(const std::map<std::string, std::vector<double>>& state, uint64_t t);

private:
    double lr_;
    uint64_t t_ = 0;
    std::map<std::string, std::vector<double>> m_, v_;
};

}  // namespace wsod::nn
