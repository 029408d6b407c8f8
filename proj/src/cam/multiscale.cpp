#include "cam/multiscale.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace wsod::cam {

Map2D multiscale_cam(const Tensor3& image, const ClassifierModel& model,
                     const std::vector<double>& scales) {
    require_config(!scales.empty(), "multiscale_cam: scales must be non-empty");
    require_runtime(model.head.num_categories > 0, "multiscale_cam: model not initialized");

    Map2D acc(image.h, image.w, 0.0);
    for (double s : scales) {
        require_config(s > 0.0, "multiscale_cam: scales must be positive");
        int sh = std::max(1, static_cast<int>(std::lround(image.h * s)));
        int sw = std::max(1, static_cast<int>(std::lround(image.w * s)));
        Tensor3 scaled = resize_bilinear(image, sh, sw);
        nn::BackboneActs acts = model.backbone.forward(scaled);
        ClassScores cls = classification_scores(acts.f5, model.head);
        CamStack cam = class_activation_map(acts.f5, model.head, cls);
        Map2D up = resize_bilinear(cam.fused, image.h, image.w);
        for (size_t i = 0; i < acc.size(); ++i) acc.v[i] += up.v[i];
    }
    const double inv = 1.0 / static_cast<double>(scales.size());
    for (double& v : acc.v) v *= inv;

    double lo = min_value(acc), hi = max_value(acc);
    if (hi <= 0.0) return Map2D(image.h, image.w, 0.0);
    if (hi - lo < 1e-12) return Map2D(image.h, image.w, 1.0);
    const double span = hi - lo;
    for (double& v : acc.v) v = (v - lo) / span;
    return acc;
}

}  // namespace wsod::cam
