#pragma once

#include "core/tensor.hpp"
#include "refine/pamr.hpp"

namespace wsod::selfcal {

// Y_{n+1} = Y_1 * (1-lambda) + P' * lambda, pixelwise. lambda 0 and 1
// reproduce the inputs bit-exactly.
Map2D update_labels(const Map2D& y1, const Map2D& p_refined, double lam);
Map2D update_labels(const Map2D& y1, const refine::BinaryMask& p_refined, double lam);

// Blended-target binary cross-entropy: with t = (1-lambda)*y1 + lambda*p',
// sum_i -[t_i log p_i + (1-t_i) log(1-p_i)]. Predictions are clamped to
// [1e-7, 1-1e-7] inside the logs.
double sc_loss_sum(const Map2D& p, const Map2D& y1, const Map2D& p_prime, double lam);

// Mean over pixels; the training loss, so learning rates transfer across
// resolutions.
double sc_loss_mean(const Map2D& p, const Map2D& y1, const Map2D& p_prime, double lam);

// d(sc_loss_sum)/d(logit_i) = p_i - t_i for p = sigmoid(logit).
Map2D sc_loss_logit_grad(const Map2D& p, const Map2D& y1, const Map2D& p_prime, double lam);

// d(sc_loss_sum)/d(p_i) = -t_i/p_i + (1-t_i)/(1-p_i), with p clamped as in
// the loss. Used when the loss is attached after sigmoid + upsampling.
Map2D sc_loss_pred_grad(const Map2D& p, const Map2D& y1, const Map2D& p_prime, double lam);

}  // namespace wsod::selfcal
