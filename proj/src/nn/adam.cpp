#include "nn/adam.hpp"

#include <cassert>
#include <cmath>

namespace wsod::nn {

void Adam::step(const std::vector<ParamRef>& params, const GradStore& grads) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t_));
    for (const auto& p : params) {
        auto git = grads.find(p.name);
        assert(git != grads.end());
        const std::vector<double>& g = git->second;
        std::vector<double>& m = m_[p.name];
        std::vector<double>& v = v_[p.name];
        if (m.empty()) m.assign(p.value->size(), 0.0);
        if (v.empty()) v.assign(p.value->size(), 0.0);
        assert(g.size() == p.value->size());
        for (size_t i = 0; i < g.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            (*p.value)[i] -= lr_ * mhat / (std::sqrt(vhat) + eps);
        }
    }
}

std::map<std::string, std::vector<double>> Adam::export_state() const {
    std::map<std::string, std::vector<double>> state;
    for (const auto& [name, m] : m_) state["adam.m." + name] = m;
    for (const auto& [name, v] : v_) state["adam.v." + name] = v;
    return state;
}

void Adam::import_state(const std::map<std::string, std::vector<double>>& state, uint64_t t) {
    m_.clear();
    v_.clear();
    t_ = t;
    for (const auto& [key, buf] : state) {
        if (key.rfind("adam.m.", 0) == 0)
            m_[key.substr(7)] = buf;
        else if (key.rfind("adam.v.", 0) == 0)
            v_[key.substr(7)] = buf;
    }
}

}  // namespace wsod::nn
