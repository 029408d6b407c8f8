#pragma once

#include <filesystem>
#include <string>

#include "core/rng.hpp"
#include "core/tensor.hpp"

namespace testutil {

// fresh scratch directory under the test working dir
inline std::string scratch_dir(const std::string& name) {
    std::filesystem::path dir = std::filesystem::path("test_scratch") / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

inline wsod::Map2D random_map(wsod::Rng& rng, int h, int w) {
    wsod::Map2D m(h, w);
    for (double& v : m.v) v = rng.uniform();
    return m;
}

inline wsod::Map2D random_binary(wsod::Rng& rng, int h, int w, double p_fg = 0.5) {
    wsod::Map2D m(h, w);
    for (double& v : m.v) v = rng.uniform() < p_fg ? 1.0 : 0.0;
    return m;
}

inline wsod::Tensor3 random_tensor(wsod::Rng& rng, int c, int h, int w, double lo = 0.0,
                                   double hi = 1.0) {
    wsod::Tensor3 t(c, h, w);
    for (double& v : t.v) v = rng.uniform(lo, hi);
    return t;
}

// quantize to the 8-bit grid, like a map loaded from PNG
inline wsod::Map2D quantized(const wsod::Map2D& m) {
    wsod::Map2D q = m;
    for (double& v : q.v) v = std::nearbyint(v * 255.0) / 255.0;
    return q;
}

}  // namespace testutil
