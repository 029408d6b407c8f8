#include "cam/head.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "nn/layers.hpp"

namespace wsod::cam {

ClassifierHead::ClassifierHead(int k, int c)
    : num_categories(k), in_channels(c), weights(static_cast<size_t>(k) * c, 0.0), bias(k, 0.0) {}

void ClassifierHead::init(Rng& rng) {
    double std_dev = std::sqrt(1.0 / in_channels);
    for (double& w : weights) w = std_dev * rng.normal();
    for (double& b : bias) b = 0.0;
}

std::vector<nn::ParamRef> ClassifierHead::params() {
    return {{"head.w", &weights}, {"head.b", &bias}};
}

ClassScores classification_scores(const Tensor3& f5, const ClassifierHead& head) {
    require_runtime(f5.c == head.in_channels,
                    "classification_scores: channel mismatch between f5 and head");
    std::vector<double> pooled = nn::global_avg_pool(f5);
    ClassScores out;
    out.scores.resize(head.num_categories);
    for (int k = 0; k < head.num_categories; ++k) {
        double s = head.bias[k];
        const double* wk = &head.weights[static_cast<size_t>(k) * head.in_channels];
        for (int c = 0; c < head.in_channels; ++c) s += wk[c] * pooled[c];
        out.scores[k] = s;
    }
    return out;
}

CamStack class_activation_map(const Tensor3& f5, const ClassifierHead& head,
                              const ClassScores& scores) {
    require_runtime(f5.c == head.in_channels,
                    "class_activation_map: channel mismatch between f5 and head");
    require_runtime(static_cast<int>(scores.scores.size()) == head.num_categories,
                    "class_activation_map: scores/head size mismatch");

    CamStack out;
    out.maps.reserve(head.num_categories);
    out.fused = Map2D(f5.h, f5.w, 0.0);
    const size_t area = static_cast<size_t>(f5.h) * f5.w;

    for (int k = 0; k < head.num_categories; ++k) {
        Map2D m(f5.h, f5.w, 0.0);
        const double* wk = &head.weights[static_cast<size_t>(k) * head.in_channels];
        for (int c = 0; c < head.in_channels; ++c) {
            const double* plane = f5.plane(c);
            const double w = wk[c];
            for (size_t i = 0; i < area; ++i) m.v[i] += w * plane[i];
        }
        double peak = 0.0;
        for (size_t i = 0; i < area; ++i) {
            m.v[i] += head.bias[k];
            if (m.v[i] < 0.0) m.v[i] = 0.0;
            peak = std::max(peak, m.v[i]);
        }
        if (peak > 0.0)
            for (double& v : m.v) v /= peak;

        // negative-score classes contribute nothing to the fused map
        const double weight = std::max(scores.scores[k], 0.0);
        if (weight > 0.0)
            for (size_t i = 0; i < area; ++i) out.fused.v[i] += weight * m.v[i];
        out.maps.push_back(std::move(m));
    }
    return out;
}

}  // namespace wsod::cam
