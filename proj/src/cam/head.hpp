#pragma once

#include <vector>

#include "core/rng.hpp"
#include "core/tensor.hpp"
#include "nn/param.hpp"

namespace wsod::cam {

// GAP classification head: scores = W * GAP(f5) + b. The same W/b act as a
// 1x1 convolution over f5 when computing activation maps.
struct ClassifierHead {
    int num_categories = 0;
    int in_channels = 0;
    std::vector<double> weights;  // [K][C]
    std::vector<double> bias;     // [K]

    ClassifierHead() = default;
    ClassifierHead(int k, int c);
    void init(Rng& rng);
    std::vector<nn::ParamRef> params();
};

struct ClassScores {
    std::vector<double> scores;  // [K]
};

struct CamStack {
    std::vector<Map2D> maps;  // per-class, max-normalized into [0,1]
    Map2D fused;              // sum_k max(score_k, 0) * maps[k]
};

// scores_k = sum_c W[k,c] * GAP(f5)[c] + b[k]
ClassScores classification_scores(const Tensor3& f5, const ClassifierHead& head);

// Per class: ReLU(W_k * f5 + b_k), divided by its max (all-zero maps stay
// zero); fused map weights each normalized map by its clamped score.
CamStack class_activation_map(const Tensor3& f5, const ClassifierHead& head,
                              const ClassScores& scores);

}  // namespace wsod::cam
