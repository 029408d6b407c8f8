#include "refine/crf.hpp"

#include <algorithm>
#include <iostream>
#include <mutex>

#include "core/errors.hpp"

namespace wsod::refine {

namespace {
std::mutex g_plugin_mu;
CrfPluginFn g_plugin;
}  // namespace

void set_crf_plugin(CrfPluginFn fn) {
    std::lock_guard<std::mutex> lock(g_plugin_mu);
    g_plugin = std::move(fn);
}

bool crf_plugin_present() {
    std::lock_guard<std::mutex> lock(g_plugin_mu);
    return static_cast<bool>(g_plugin);
}

CrfResult crf_refine(const Map2D& mask, const Tensor3& image, const CrfParams& params) {
    require_runtime(mask.h == image.h && mask.w == image.w, "crf_refine: mask/image size mismatch");
    CrfPluginFn plugin;
    {
        std::lock_guard<std::mutex> lock(g_plugin_mu);
        plugin = g_plugin;
    }
    if (!plugin) return {mask, false};

    Map2D out(mask.h, mask.w);
    bool ok = false;
    try {
        ok = plugin(mask, image, params, out);
    } catch (const std::exception& e) {
        std::cerr << "warning: CRF plugin failed (" << e.what() << "); using unrefined mask\n";
        ok = false;
    }
    if (!ok || out.h != mask.h || out.w != mask.w) {
        if (ok) std::cerr << "warning: CRF plugin returned a wrong-sized map; ignored\n";
        return {mask, false};
    }
    for (double& v : out.v) v = std::clamp(v, 0.0, 1.0);
    return {std::move(out), true};
}

}  // namespace wsod::refine
