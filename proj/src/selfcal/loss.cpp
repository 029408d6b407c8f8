#include "selfcal/loss.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace wsod::selfcal {

Map2D update_labels(const Map2D& y1, const Map2D& p_refined, double lam) {
    require_runtime(y1.same_shape(p_refined), "update_labels: shape mismatch");
    require_config(lam >= 0.0 && lam <= 1.0, "update_labels: lambda must be in [0,1]");
    Map2D out(y1.h, y1.w);
    const double keep = 1.0 - lam;
    for (size_t i = 0; i < out.size(); ++i) out.v[i] = keep * y1.v[i] + lam * p_refined.v[i];
    return out;
}

Map2D update_labels(const Map2D& y1, const refine::BinaryMask& p_refined, double lam) {
    return update_labels(y1, p_refined.values, lam);
}

namespace {

constexpr double kEps = 1e-7;

double clamp_p(double p) {
    if (p < kEps) return kEps;
    if (p > 1.0 - kEps) return 1.0 - kEps;
    return p;
}

void check_inputs(const Map2D& p, const Map2D& y1, const Map2D& p_prime) {
    require_runtime(p.same_shape(y1) && p.same_shape(p_prime), "sc_loss: shape mismatch");
    for (double v : p.v) require_runtime(std::isfinite(v), "sc_loss: non-finite prediction");
    for (double v : y1.v) require_runtime(std::isfinite(v), "sc_loss: non-finite label");
    for (double v : p_prime.v) require_runtime(std::isfinite(v), "sc_loss: non-finite refined map");
}

}  // namespace

double sc_loss_sum(const Map2D& p, const Map2D& y1, const Map2D& p_prime, double lam) {
    check_inputs(p, y1, p_prime);
    require_config(lam >= 0.0 && lam <= 1.0, "sc_loss: lambda must be in [0,1]");
    double loss = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        const double t = (1.0 - lam) * y1.v[i] + lam * p_prime.v[i];
        const double pi = clamp_p(p.v[i]);
        loss -= t * std::log(pi) + (1.0 - t) * std::log(1.0 - pi);
    }
    return loss;
}

double sc_loss_mean(const Map2D& p, const Map2D& y1, const Map2D& p_prime, double lam) {
    return sc_loss_sum(p, y1, p_prime, lam) / static_cast<double>(p.size());
}

Map2D sc_loss_logit_grad(const Map2D& p, const Map2D& y1, const Map2D& p_prime, double lam) {
    check_inputs(p, y1, p_prime);
    Map2D grad(p.h, p.w);
    for (size_t i = 0; i < p.size(); ++i) {
        const double t = (1.0 - lam) * y1.v[i] + lam * p_prime.v[i];
        grad.v[i] = p.v[i] - t;
    }
    return grad;
}

Map2D sc_loss_pred_grad(const Map2D& p, const Map2D& y1, const Map2D& p_prime, double lam) {
    check_inputs(p, y1, p_prime);
    Map2D grad(p.h, p.w);
    for (size_t i = 0; i < p.size(); ++i) {
        const double t = (1.0 - lam) * y1.v[i] + lam * p_prime.v[i];
        const double pi = clamp_p(p.v[i]);
        grad.v[i] = -t / pi + (1.0 - t) / (1.0 - pi);
    }
    return grad;
}

}  // namespace wsod::selfcal
