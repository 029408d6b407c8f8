#pragma once

#include <functional>

#include "core/tensor.hpp"

namespace wsod::refine {

// Dense-CRF refinement is an optional plugin behind this adapter. The build
// ships no CRF inference of its own; when no plugin is installed the input
// passes through unchanged with refined=false. Plugin failures degrade to
// pass-through with a warning, never abort label generation.
struct CrfParams {
    int iterations = 10;
    double appearance_weight = 4.0;
    double appearance_sigma_xy = 30.0;
    double appearance_sigma_rgb = 10.0;
    double smoothness_weight = 3.0;
    double smoothness_sigma_xy = 3.0;
};

using CrfPluginFn =
    std::function<bool(const Map2D& mask, const Tensor3& image, const CrfParams& params, Map2D& out)>;

void set_crf_plugin(CrfPluginFn fn);  // empty fn uninstalls
bool crf_plugin_present();

struct CrfResult {
    Map2D map;      // clamped to [0,1]
    bool refined;   // false when the plugin is absent or failed
};

CrfResult crf_refine(const Map2D& mask, const Tensor3& image, const CrfParams& params);

}  // namespace wsod::refine
