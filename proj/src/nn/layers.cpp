#include "nn/layers.hpp"

#include <cassert>
#include <cmath>

namespace wsod::nn {

Conv3x3::Conv3x3(int in_channels, int out_channels, int stride_)
    : in_c(in_channels),
      out_c(out_channels),
      stride(stride_),
      w(static_cast<size_t>(out_channels) * in_channels * 9, 0.0),
      b(out_channels, 0.0) {
    assert(stride == 1 || stride == 2);
}

void Conv3x3::init_he(Rng& rng, double gain) {
    double std_dev = gain * std::sqrt(2.0 / (static_cast<double>(in_c) * 9.0));
    for (double& x : w) x = std_dev * rng.normal();
    for (double& x : b) x = 0.0;
}

Tensor3 Conv3x3::forward(const Tensor3& in) const {
    assert(in.c == in_c);
    const int oh = (in.h - 1) / stride + 1;
    const int ow = (in.w - 1) / stride + 1;
    Tensor3 out(out_c, oh, ow);
    for (int oc = 0; oc < out_c; ++oc) {
        double* op = out.plane(oc);
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) op[oy * ow + ox] = b[oc];
        for (int ic = 0; ic < in_c; ++ic) {
            const double* ip = in.plane(ic);
            const double* wp = &w[(static_cast<size_t>(oc) * in_c + ic) * 9];
            for (int oy = 0; oy < oh; ++oy) {
                const int iy0 = oy * stride - 1;
                for (int ox = 0; ox < ow; ++ox) {
                    const int ix0 = ox * stride - 1;
                    double acc = 0.0;
                    for (int ky = 0; ky < 3; ++ky) {
                        const int iy = iy0 + ky;
                        if (iy < 0 || iy >= in.h) continue;
                        const double* irow = ip + static_cast<size_t>(iy) * in.w;
                        for (int kx = 0; kx < 3; ++kx) {
                            const int ix = ix0 + kx;
                            if (ix < 0 || ix >= in.w) continue;
                            acc += wp[ky * 3 + kx] * irow[ix];
                        }
                    }
                    op[oy * ow + ox] += acc;
                }
            }
        }
    }
    return out;
}

Tensor3 Conv3x3::backward(const Tensor3& in, const Tensor3& gout, std::vector<double>& gw,
                          std::vector<double>& gb) const {
    assert(in.c == in_c && gout.c == out_c);
    assert(gw.size() == w.size() && gb.size() == b.size());
    Tensor3 gin(in.c, in.h, in.w, 0.0);
    const int oh = gout.h, ow = gout.w;
    for (int oc = 0; oc < out_c; ++oc) {
        const double* gp = gout.plane(oc);
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) gb[oc] += gp[oy * ow + ox];
        for (int ic = 0; ic < in_c; ++ic) {
            const double* ip = in.plane(ic);
            double* ginp = gin.plane(ic);
            const double* wp = &w[(static_cast<size_t>(oc) * in_c + ic) * 9];
            double* gwp = &gw[(static_cast<size_t>(oc) * in_c + ic) * 9];
            for (int oy = 0; oy < oh; ++oy) {
                const int iy0 = oy * stride - 1;
                for (int ox = 0; ox < ow; ++ox) {
                    const int ix0 = ox * stride - 1;
                    const double g = gp[oy * ow + ox];
                    if (g == 0.0) continue;
                    for (int ky = 0; ky < 3; ++ky) {
                        const int iy = iy0 + ky;
                        if (iy < 0 || iy >= in.h) continue;
                        for (int kx = 0; kx < 3; ++kx) {
                            const int ix = ix0 + kx;
                            if (ix < 0 || ix >= in.w) continue;
                            const size_t ii = static_cast<size_t>(iy) * in.w + ix;
                            gwp[ky * 3 + kx] += g * ip[ii];
                            ginp[ii] += g * wp[ky * 3 + kx];
                        }
                    }
                }
            }
        }
    }
    return gin;
}

void Conv3x3::collect_params(const std::string& prefix, std::vector<ParamRef>& out) {
    out.push_back({prefix + ".w", &w});
    out.push_back({prefix + ".b", &b});
}

Tensor3 relu(const Tensor3& x) {
    Tensor3 out = x;
    for (double& v : out.v)
        if (v < 0.0) v = 0.0;
    return out;
}

Tensor3 relu_backward(const Tensor3& out, const Tensor3& gout) {
    assert(out.same_shape(gout));
    Tensor3 gin = gout;
    for (size_t i = 0; i < gin.v.size(); ++i)
        if (out.v[i] <= 0.0) gin.v[i] = 0.0;
    return gin;
}

std::vector<double> global_avg_pool(const Tensor3& x) {
    std::vector<double> pooled(x.c, 0.0);
    const size_t area = static_cast<size_t>(x.h) * x.w;
    for (int c = 0; c < x.c; ++c) {
        const double* p = x.plane(c);
        double s = 0.0;
        for (size_t i = 0; i < area; ++i) s += p[i];
        pooled[c] = s / static_cast<double>(area);
    }
    return pooled;
}

Tensor3 global_avg_pool_backward(const std::vector<double>& gpooled, int c, int h, int w) {
    assert(static_cast<int>(gpooled.size()) == c);
    Tensor3 gin(c, h, w);
    const double inv_area = 1.0 / (static_cast<double>(h) * w);
    for (int ch = 0; ch < c; ++ch) {
        double* p = gin.plane(ch);
        const double g = gpooled[ch] * inv_area;
        const size_t area = static_cast<size_t>(h) * w;
        for (size_t i = 0; i < area; ++i) p[i] = g;
    }
    return gin;
}

Map2D sigmoid(const Map2D& logits) {
    Map2D out = logits;
    for (double& v : out.v) v = 1.0 / (1.0 + std::exp(-v));
    return out;
}

Map2D sigmoid_backward(const Map2D& out, const Map2D& gout) {
    assert(out.same_shape(gout));
    Map2D gin = gout;
    for (size_t i = 0; i < gin.v.size(); ++i) gin.v[i] *= out.v[i] * (1.0 - out.v[i]);
    return gin;
}

namespace {

struct Tap {
    int lo, hi;
    double w_hi;
};

std::vector<Tap> make_taps(int in_n, int out_n) {
    std::vector<Tap> taps(out_n);
    const double scale = static_cast<double>(in_n) / out_n;
    for (int i = 0; i < out_n; ++i) {
        double src = (i + 0.5) * scale - 0.5;
        if (src < 0.0) src = 0.0;
        if (src > in_n - 1) src = in_n - 1;
        int lo = static_cast<int>(std::floor(src));
        int hi = lo + 1 < in_n ? lo + 1 : in_n - 1;
        taps[i] = {lo, hi, src - lo};
    }
    return taps;
}

}  // namespace

Tensor3 upsample_bilinear(const Tensor3& in, int oh, int ow) { return resize_bilinear(in, oh, ow); }

Tensor3 upsample_bilinear_backward(const Tensor3& gout, int ih, int iw) {
    if (gout.h == ih && gout.w == iw) return gout;
    auto ty = make_taps(ih, gout.h);
    auto tx = make_taps(iw, gout.w);
    Tensor3 gin(gout.c, ih, iw, 0.0);
    for (int c = 0; c < gout.c; ++c) {
        const double* gp = gout.plane(c);
        double* ip = gin.plane(c);
        for (int y = 0; y < gout.h; ++y) {
            const double fy = ty[y].w_hi;
            for (int x = 0; x < gout.w; ++x) {
                const double g = gp[static_cast<size_t>(y) * gout.w + x];
                const double fx = tx[x].w_hi;
                ip[static_cast<size_t>(ty[y].lo) * iw + tx[x].lo] += g * (1 - fy) * (1 - fx);
                ip[static_cast<size_t>(ty[y].lo) * iw + tx[x].hi] += g * (1 - fy) * fx;
                ip[static_cast<size_t>(ty[y].hi) * iw + tx[x].lo] += g * fy * (1 - fx);
                ip[static_cast<size_t>(ty[y].hi) * iw + tx[x].hi] += g * fy * fx;
            }
        }
    }
    return gin;
}

Tensor3 concat_channels(const std::vector<const Tensor3*>& parts) {
    assert(!parts.empty());
    int total_c = 0;
    for (const Tensor3* p : parts) {
        assert(p->h == parts[0]->h && p->w == parts[0]->w);
        total_c += p->c;
    }
    Tensor3 out(total_c, parts[0]->h, parts[0]->w);
    size_t offset = 0;
    for (const Tensor3* p : parts) {
        std::copy(p->v.begin(), p->v.end(), out.v.begin() + offset);
        offset += p->v.size();
    }
    return out;
}

std::vector<Tensor3> split_channels(const Tensor3& g, const std::vector<int>& channel_counts) {
    std::vector<Tensor3> parts;
    size_t offset = 0;
    for (int c : channel_counts) {
        Tensor3 part(c, g.h, g.w);
        std::copy(g.v.begin() + offset, g.v.begin() + offset + part.v.size(), part.v.begin());
        offset += part.v.size();
        parts.push_back(std::move(part));
    }
    assert(offset == g.v.size());
    return parts;
}

}  // namespace wsod::nn
