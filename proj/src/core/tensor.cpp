#include "core/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace wsod {

double min_value(const Map2D& m) {
    double r = m.v.empty() ? 0.0 : m.v[0];
    for (double x : m.v) r = std::min(r, x);
    return r;
}

double max_value(const Map2D& m) {
    double r = m.v.empty() ? 0.0 : m.v[0];
    for (double x : m.v) r = std::max(r, x);
    return r;
}

double mean_value(const Map2D& m) {
    if (m.v.empty()) return 0.0;
    double s = 0.0;
    for (double x : m.v) s += x;
    return s / static_cast<double>(m.v.size());
}

namespace {

struct Tap {
    int lo, hi;
    double w_hi;  // weight of hi sample; lo gets 1 - w_hi
};

// One axis of bilinear sampling: source position of output index i is
// (i + 0.5) * in/out - 0.5, clamped to the valid range.
std::vector<Tap> make_taps(int in_n, int out_n) {
    std::vector<Tap> taps(out_n);
    const double scale = static_cast<double>(in_n) / out_n;
    for (int i = 0; i < out_n; ++i) {
        double src = (i + 0.5) * scale - 0.5;
        if (src < 0.0) src = 0.0;
        if (src > in_n - 1) src = in_n - 1;
        int lo = static_cast<int>(std::floor(src));
        int hi = std::min(lo + 1, in_n - 1);
        taps[i] = {lo, hi, src - lo};
    }
    return taps;
}

void resize_plane(const double* in, int ih, int iw, double* out, const std::vector<Tap>& ty,
                  const std::vector<Tap>& tx) {
    const int oh = static_cast<int>(ty.size());
    const int ow = static_cast<int>(tx.size());
    for (int y = 0; y < oh; ++y) {
        const double* row_lo = in + static_cast<size_t>(ty[y].lo) * iw;
        const double* row_hi = in + static_cast<size_t>(ty[y].hi) * iw;
        const double fy = ty[y].w_hi;
        double* orow = out + static_cast<size_t>(y) * ow;
        for (int x = 0; x < ow; ++x) {
            const Tap& t = tx[x];
            double top = row_lo[t.lo] * (1.0 - t.w_hi) + row_lo[t.hi] * t.w_hi;
            double bot = row_hi[t.lo] * (1.0 - t.w_hi) + row_hi[t.hi] * t.w_hi;
            orow[x] = top * (1.0 - fy) + bot * fy;
        }
    }
    (void)ih;
}

}  // namespace

Map2D resize_bilinear(const Map2D& in, int oh, int ow) {
    assert(in.h > 0 && in.w > 0 && oh > 0 && ow > 0);
    if (oh == in.h && ow == in.w) return in;
    Map2D out(oh, ow);
    auto ty = make_taps(in.h, oh);
    auto tx = make_taps(in.w, ow);
    resize_plane(in.v.data(), in.h, in.w, out.v.data(), ty, tx);
    return out;
}

Tensor3 resize_bilinear(const Tensor3& in, int oh, int ow) {
    assert(in.c > 0 && in.h > 0 && in.w > 0 && oh > 0 && ow > 0);
    if (oh == in.h && ow == in.w) return in;
    Tensor3 out(in.c, oh, ow);
    auto ty = make_taps(in.h, oh);
    auto tx = make_taps(in.w, ow);
    for (int ch = 0; ch < in.c; ++ch)
        resize_plane(in.plane(ch), in.h, in.w, out.plane(ch), ty, tx);
    return out;
}

}  // namespace wsod
