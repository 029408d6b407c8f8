#include "metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <vector>

#include "core/errors.hpp"

namespace wsod::metrics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_shapes(const Map2D& pred, const Map2D& gt, const char* what) {
    require_runtime(pred.same_shape(gt), std::string(what) + ": shape mismatch");
    require_runtime(pred.h > 0 && pred.w > 0, std::string(what) + ": empty maps");
}

inline bool gt_fg(double g) { return g > 0.5; }

double quantize8(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return std::nearbyint(v * 255.0) / 255.0;
}

}  // namespace

double mae(const Map2D& pred, const Map2D& gt) {
    check_shapes(pred, gt, "mae");
    double s = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) s += std::abs(pred.v[i] - gt.v[i]);
    return s / static_cast<double>(pred.size());
}

double f_measure(const Map2D& pred, const Map2D& gt, double beta2, FProtocol protocol,
                 bool* degenerate) {
    check_shapes(pred, gt, "f_measure");
    if (degenerate) *degenerate = false;

    const size_t n = pred.size();
    size_t gt_total = 0;
    // per-8-bit-level histograms of prediction values, split by gt
    size_t hist_all[256] = {0};
    size_t hist_fg[256] = {0};
    for (size_t i = 0; i < n; ++i) {
        int level = static_cast<int>(std::nearbyint(std::clamp(pred.v[i], 0.0, 1.0) * 255.0));
        ++hist_all[level];
        if (gt_fg(gt.v[i])) {
            ++hist_fg[level];
            ++gt_total;
        }
    }
    if (gt_total == 0) {
        if (degenerate) *degenerate = true;
        std::cerr << "warning: f_measure on all-background ground truth; defined as 0\n";
        return 0.0;
    }

    auto f_at_level = [&](int level) {  // predicted foreground: quantized pred >= level/255
        size_t tp = 0, pp = 0;
        for (int l = level; l <= 255; ++l) {
            tp += hist_fg[l];
            pp += hist_all[l];
        }
        double prec = pp == 0 ? 0.0 : static_cast<double>(tp) / pp;
        double rec = static_cast<double>(tp) / gt_total;
        double denom = beta2 * prec + rec;
        return denom <= 0.0 ? 0.0 : (1.0 + beta2) * prec * rec / denom;
    };

    if (protocol == FProtocol::max_over_thresholds) {
        double best = 0.0;
        for (int level = 1; level <= 255; ++level) best = std::max(best, f_at_level(level));
        return best;
    }

    double mean_pred = 0.0;
    for (size_t i = 0; i < n; ++i) mean_pred += quantize8(pred.v[i]);
    mean_pred /= static_cast<double>(n);
    double thr = std::clamp(2.0 * mean_pred, 1.0 / 255.0, 1.0);
    int level = static_cast<int>(std::ceil(thr * 255.0 - 1e-9));
    return f_at_level(level);
}

namespace {

// S_object term of the structure measure.
double object_score(const Map2D& values, const Map2D& gt, bool over_fg) {
    double sum = 0.0, count = 0.0;
    for (size_t i = 0; i < values.size(); ++i)
        if (gt_fg(gt.v[i]) == over_fg) {
            sum += values.v[i];
            count += 1.0;
        }
    if (count == 0.0) return 0.0;
    double mean = sum / count;
    double var = 0.0;
    for (size_t i = 0; i < values.size(); ++i)
        if (gt_fg(gt.v[i]) == over_fg) var += (values.v[i] - mean) * (values.v[i] - mean);
    double sd = count > 1.0 ? std::sqrt(var / (count - 1.0)) : 0.0;
    return 2.0 * mean / (mean * mean + 1.0 + sd + kEps);
}

double s_object(const Map2D& pred, const Map2D& gt) {
    double u = 0.0;
    for (size_t i = 0; i < gt.size(); ++i) u += gt_fg(gt.v[i]) ? 1.0 : 0.0;
    u /= static_cast<double>(gt.size());

    double o_fg = object_score(pred, gt, true);
    Map2D inverted(pred.h, pred.w);
    for (size_t i = 0; i < pred.size(); ++i) inverted.v[i] = 1.0 - pred.v[i];
    double o_bg = object_score(inverted, gt, false);
    return u * o_fg + (1.0 - u) * o_bg;
}

// region-level SSIM variant used by the structure measure
double region_ssim(const Map2D& pred, const Map2D& gt, int y0, int y1, int x0, int x1) {
    const double count = static_cast<double>(y1 - y0) * (x1 - x0);
    if (count <= 0.0) return 0.0;  // empty quadrant carries zero weight
    double mx = 0.0, my = 0.0;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
            mx += pred.at(y, x);
            my += gt_fg(gt.at(y, x)) ? 1.0 : 0.0;
        }
    mx /= count;
    my /= count;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
            double dx = pred.at(y, x) - mx;
            double dy = (gt_fg(gt.at(y, x)) ? 1.0 : 0.0) - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
    double norm = count - 1.0 + kEps;
    sxx /= norm;
    syy /= norm;
    sxy /= norm;

    double alpha = 4.0 * mx * my * sxy;
    double beta = (mx * mx + my * my) * (sxx + syy);
    if (alpha != 0.0) return alpha / (beta + kEps);
    if (beta == 0.0) return 1.0;
    return 0.0;
}

double s_region(const Map2D& pred, const Map2D& gt) {
    // Quadrants split at the exact foreground centroid: a pixel belongs to
    // the left/top half when its center lies below the centroid coordinate.
    // (The reference implementation rounds to integer indices, which makes
    // the measure flip-variant by one row/column; the exact split keeps the
    // published definition and the flip symmetry.)
    double total = 0.0, sum_x = 0.0, sum_y = 0.0;
    for (int y = 0; y < gt.h; ++y)
        for (int x = 0; x < gt.w; ++x)
            if (gt_fg(gt.at(y, x))) {
                total += 1.0;
                sum_x += x + 0.5;
                sum_y += y + 0.5;
            }
    const double cx_f = sum_x / total;
    const double cy_f = sum_y / total;
    int cx = 0, cy = 0;
    while (cx < gt.w && cx + 0.5 < cx_f) ++cx;
    while (cy < gt.h && cy + 0.5 < cy_f) ++cy;

    const double area = static_cast<double>(gt.h) * gt.w;
    double w1 = (static_cast<double>(cx) * cy) / area;
    double w2 = (static_cast<double>(gt.w - cx) * cy) / area;
    double w3 = (static_cast<double>(cx) * (gt.h - cy)) / area;
    double w4 = 1.0 - w1 - w2 - w3;

    double q1 = region_ssim(pred, gt, 0, cy, 0, cx);
    double q2 = region_ssim(pred, gt, 0, cy, cx, gt.w);
    double q3 = region_ssim(pred, gt, cy, gt.h, 0, cx);
    double q4 = region_ssim(pred, gt, cy, gt.h, cx, gt.w);
    return w1 * q1 + w2 * q2 + w3 * q3 + w4 * q4;
}

}  // namespace

double s_measure(const Map2D& pred, const Map2D& gt, double alpha) {
    check_shapes(pred, gt, "s_measure");
    double gt_mean = 0.0;
    for (double g : gt.v) gt_mean += gt_fg(g) ? 1.0 : 0.0;
    gt_mean /= static_cast<double>(gt.size());

    double pred_mean = 0.0;
    for (double p : pred.v) pred_mean += p;
    pred_mean /= static_cast<double>(pred.size());

    double q;
    if (gt_mean == 0.0)
        q = 1.0 - pred_mean;
    else if (gt_mean == 1.0)
        q = pred_mean;
    else
        q = alpha * s_object(pred, gt) + (1.0 - alpha) * s_region(pred, gt);
    return std::clamp(q, 0.0, 1.0);
}

double e_measure(const Map2D& pred, const Map2D& gt) {
    check_shapes(pred, gt, "e_measure");
    const size_t n = pred.size();

    // adaptive binarization of the prediction (2 * mean rule)
    double mean_pred = 0.0;
    for (double p : pred.v) mean_pred += p;
    mean_pred /= static_cast<double>(n);
    double thr = std::min(2.0 * mean_pred, 1.0);
    std::vector<double> fm(n);
    for (size_t i = 0; i < n; ++i) fm[i] = pred.v[i] >= thr ? 1.0 : 0.0;
    if (mean_pred == 0.0) std::fill(fm.begin(), fm.end(), 0.0);

    size_t gt_count = 0;
    for (double g : gt.v)
        if (gt_fg(g)) ++gt_count;

    double sum = 0.0;
    if (gt_count == 0) {
        for (size_t i = 0; i < n; ++i) sum += 1.0 - fm[i];
    } else if (gt_count == n) {
        for (size_t i = 0; i < n; ++i) sum += fm[i];
    } else {
        double mu_fm = 0.0;
        for (double v : fm) mu_fm += v;
        mu_fm /= static_cast<double>(n);
        const double mu_gt = static_cast<double>(gt_count) / n;
        for (size_t i = 0; i < n; ++i) {
            double xi_fm = fm[i] - mu_fm;
            double xi_gt = (gt_fg(gt.v[i]) ? 1.0 : 0.0) - mu_gt;
            double align = 2.0 * xi_gt * xi_fm / (xi_gt * xi_gt + xi_fm * xi_fm + kEps);
            sum += (align + 1.0) * (align + 1.0) / 4.0;
        }
    }
    return sum / static_cast<double>(n);
}

}  // namespace wsod::metrics
