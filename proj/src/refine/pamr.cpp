#include "refine/pamr.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace wsod::refine {

void validate(const AffinityConfig& cfg) {
    require_config(cfg.iterations >= 1, "affinity: iterations must be >= 1");
    require_config(!cfg.dilations.empty(), "affinity: dilations must be non-empty");
    int prev = 0;
    for (int d : cfg.dilations) {
        require_config(d >= 1, "affinity: dilations must be >= 1");
        require_config(d > prev, "affinity: dilations must be strictly increasing");
        prev = d;
    }
}

AffinityMatrix build_affinity(const Tensor3& image, const AffinityConfig& cfg) {
    validate(cfg);
    require_runtime(image.c == 3, "affinity: expected a 3-channel image");
    const int h = image.h, w = image.w;
    const int n = h * w;
    const int max_neighbors = 1 + 8 * static_cast<int>(cfg.dilations.size());

    AffinityMatrix aff;
    aff.h = h;
    aff.w = w;
    aff.row_ptr.assign(n + 1, 0);
    aff.col_idx.assign(static_cast<size_t>(n) * max_neighbors, 0);
    aff.weight.assign(static_cast<size_t>(n) * max_neighbors, 0.0);

    const double* red = image.plane(0);
    const double* green = image.plane(1);
    const double* blue = image.plane(2);

    // fixed over-allocation per row keeps the layout independent of the
    // thread count; rows are compacted below
    std::vector<int> row_count(n, 0);
    parallel_chunks(h, 16, [&](int y_begin, int y_end) {
        std::vector<int> cols(max_neighbors);
        std::vector<double> dist(max_neighbors);
        for (int y = y_begin; y < y_end; ++y) {
            for (int x = 0; x < w; ++x) {
                const int i = y * w + x;
                int cnt = 0;
                cols[cnt] = i;
                dist[cnt] = 0.0;
                ++cnt;
                for (int d : cfg.dilations) {
                    for (int dy = -1; dy <= 1; ++dy) {
                        for (int dx = -1; dx <= 1; ++dx) {
                            if (dy == 0 && dx == 0) continue;
                            const int ny = y + dy * d, nx = x + dx * d;
                            if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
                            const int j = ny * w + nx;
                            cols[cnt] = j;
                            dist[cnt] = std::abs(red[i] - red[j]) + std::abs(green[i] - green[j]) +
                                        std::abs(blue[i] - blue[j]);
                            ++cnt;
                        }
                    }
                }
                // sigma_i: std of the neighborhood distances, floored
                double mean = 0.0;
                for (int k = 0; k < cnt; ++k) mean += dist[k];
                mean /= cnt;
                double var = 0.0;
                for (int k = 0; k < cnt; ++k) var += (dist[k] - mean) * (dist[k] - mean);
                double sigma = std::sqrt(var / cnt);
                if (sigma < 1e-3) sigma = 1e-3;

                double sum = 0.0;
                double* wrow = &aff.weight[static_cast<size_t>(i) * max_neighbors];
                int* crow = &aff.col_idx[static_cast<size_t>(i) * max_neighbors];
                for (int k = 0; k < cnt; ++k) {
                    double a = std::exp(-dist[k] / sigma);
                    wrow[k] = a;
                    crow[k] = cols[k];
                    sum += a;
                }
                for (int k = 0; k < cnt; ++k) wrow[k] /= sum;
                row_count[i] = cnt;
            }
        }
    });

    // compact into CSR
    aff.row_ptr[0] = 0;
    for (int i = 0; i < n; ++i) aff.row_ptr[i + 1] = aff.row_ptr[i] + row_count[i];
    std::vector<int> cols_out(aff.row_ptr[n]);
    std::vector<double> w_out(aff.row_ptr[n]);
    for (int i = 0; i < n; ++i) {
        const size_t src = static_cast<size_t>(i) * max_neighbors;
        std::copy(aff.col_idx.begin() + src, aff.col_idx.begin() + src + row_count[i],
                  cols_out.begin() + aff.row_ptr[i]);
        std::copy(aff.weight.begin() + src, aff.weight.begin() + src + row_count[i],
                  w_out.begin() + aff.row_ptr[i]);
    }
    aff.col_idx = std::move(cols_out);
    aff.weight = std::move(w_out);
    return aff;
}

Map2D AffinityMatrix::apply(const Map2D& mask) const {
    require_runtime(mask.h == h && mask.w == w, "affinity apply: size mismatch");
    Map2D out(h, w);
    const int n = h * w;
    parallel_chunks(n, 16, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            double acc = 0.0;
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += weight[k] * mask.v[col_idx[k]];
            out.v[i] = acc;
        }
    });
    return out;
}

Map2D pamr_refine(const Map2D& mask, const Tensor3& image, const AffinityConfig& cfg) {
    require_runtime(mask.h == image.h && mask.w == image.w,
                    "pamr_refine: mask and image sizes differ");
    AffinityMatrix aff = build_affinity(image, cfg);
    Map2D cur = mask;
    for (int it = 0; it < cfg.iterations; ++it) cur = aff.apply(cur);
    return cur;
}

BinaryMask binarize(const Map2D& mask, double threshold) {
    require_config(threshold > 0.0 && threshold < 1.0, "binarize: threshold must be in (0,1)");
    BinaryMask out;
    out.values = Map2D(mask.h, mask.w);
    for (size_t i = 0; i < mask.size(); ++i) out.values.v[i] = mask.v[i] > threshold ? 1.0 : 0.0;
    return out;
}

}  // namespace wsod::refine
