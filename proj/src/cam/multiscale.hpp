#pragma once

#include <vector>

#include "cam/classifier.hpp"
#include "core/tensor.hpp"

namespace wsod::cam {

// Multi-scale CAM inference: for each scale the image is resized, the fused
// CAM computed and upsampled back to the image resolution; the per-scale maps
// are averaged and then min-max rescaled to [0,1]. A flat result maps to
// all-zeros (zero mean) or all-ones (positive mean).
Map2D multiscale_cam(const Tensor3& image, const ClassifierModel& model,
                     const std::vector<double>& scales);

}  // namespace wsod::cam
