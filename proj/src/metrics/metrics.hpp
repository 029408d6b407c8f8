#pragma once

#include "core/tensor.hpp"

namespace wsod::metrics {

enum class FProtocol { max_over_thresholds, adaptive };

// Mean absolute error; shapes must match.
double mae(const Map2D& pred, const Map2D& gt);

// F-measure with beta^2 = 0.3. Predictions are quantized to the 8-bit grid
// first (maps live in PNG files). max_over_thresholds sweeps the 255 grid
// thresholds; adaptive binarizes at 2*mean(pred), clamped to [1/255, 1].
// An all-background ground truth is degenerate and scores 0.
double f_measure(const Map2D& pred, const Map2D& gt, double beta2 = 0.3,
                 FProtocol protocol = FProtocol::max_over_thresholds,
                 bool* degenerate = nullptr);

// Structure measure: alpha * S_object + (1-alpha) * S_region, with the
// published special cases for degenerate ground truths (all-background ->
// 1 - mean(pred), all-foreground -> mean(pred)). Clamped to [0,1].
double s_measure(const Map2D& pred, const Map2D& gt, double alpha = 0.5);

// Enhanced-alignment measure of the adaptively binarized prediction
// (threshold 2*mean, clamped to 1) against the binary ground truth, reported
// as the mean of the enhanced alignment matrix.
double e_measure(const Map2D& pred, const Map2D& gt);

}  // namespace wsod::metrics
