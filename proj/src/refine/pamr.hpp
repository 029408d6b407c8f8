#pragma once

#include <vector>

#include "core/tensor.hpp"

namespace wsod::refine {

struct AffinityConfig {
    int iterations = 10;
    std::vector<int> dilations = {1, 2, 4, 8, 12, 24};
};

void validate(const AffinityConfig& cfg);

// Row-stochastic color affinity operator: each pixel's neighborhood is itself
// plus the 8-neighbors of a 3x3 window at every dilation (in-bounds only).
// Weights are exp(-L1 color distance / sigma_i), normalized per pixel, where
// sigma_i is the std of that pixel's neighborhood distances (floored at 1e-3).
struct AffinityMatrix {
    int h = 0, w = 0;
    std::vector<int> row_ptr;       // size h*w + 1
    std::vector<int> col_idx;       // flattened neighbor indices
    std::vector<double> weight;     // normalized weights

    Map2D apply(const Map2D& mask) const;
};

AffinityMatrix build_affinity(const Tensor3& image, const AffinityConfig& cfg);

// iterations applications of the affinity operator. Affinities depend only on
// the image, so the refinement is linear in the mask and its output stays
// within [min(mask), max(mask)].
Map2D pamr_refine(const Map2D& mask, const Tensor3& image, const AffinityConfig& cfg);

struct BinaryMask {
    Map2D values;  // strictly 0/1
};

// Strict inequality: value > threshold -> 1, else 0.
BinaryMask binarize(const Map2D& mask, double threshold = 0.4);

}  // namespace wsod::refine
