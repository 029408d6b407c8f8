#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace wsod {

// Single-channel map, row-major.
struct Map2D {
    int h = 0, w = 0;
    std::vector<double> v;

    Map2D() = default;
    Map2D(int h_, int w_, double fill = 0.0) : h(h_), w(w_), v(static_cast<size_t>(h_) * w_, fill) {}

    double& at(int y, int x) { return v[static_cast<size_t>(y) * w + x]; }
    double at(int y, int x) const { return v[static_cast<size_t>(y) * w + x]; }
    size_t size() const { return v.size(); }
    bool same_shape(const Map2D& o) const { return h == o.h && w == o.w; }
};

// Planar CHW tensor. Images are stored as c=3 in [0,1].
struct Tensor3 {
    int c = 0, h = 0, w = 0;
    std::vector<double> v;

    Tensor3() = default;
    Tensor3(int c_, int h_, int w_, double fill = 0.0)
        : c(c_), h(h_), w(w_), v(static_cast<size_t>(c_) * h_ * w_, fill) {}

    double& at(int ch, int y, int x) { return v[(static_cast<size_t>(ch) * h + y) * w + x]; }
    double at(int ch, int y, int x) const { return v[(static_cast<size_t>(ch) * h + y) * w + x]; }
    double* plane(int ch) { return v.data() + static_cast<size_t>(ch) * h * w; }
    const double* plane(int ch) const { return v.data() + static_cast<size_t>(ch) * h * w; }
    size_t size() const { return v.size(); }
    bool same_shape(const Tensor3& o) const { return c == o.c && h == o.h && w == o.w; }
};

double min_value(const Map2D& m);
double max_value(const Map2D& m);
double mean_value(const Map2D& m);

// Bilinear resampling with the half-pixel-center convention. Resizing to the
// same shape is an exact copy.
Map2D resize_bilinear(const Map2D& in, int oh, int ow);
Tensor3 resize_bilinear(const Tensor3& in, int oh, int ow);

}  // namespace wsod
