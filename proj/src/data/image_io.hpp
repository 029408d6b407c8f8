#pragma once

#include <string>

#include "core/tensor.hpp"

namespace wsod::data {

// Decodes a PNG into a 3-channel tensor in [0,1], bilinearly resized to
// target_size x target_size. Grayscale inputs are replicated across channels;
// alpha is dropped. target_size 0 keeps the native resolution.
Tensor3 load_image(const std::string& path, int target_size);

// Single-channel map in [0,1] (pixel / 255). target_size 0 keeps native size.
Map2D load_map(const std::string& path, int target_size = 0);

// Quantizes values (clamped to [0,1]) to 8-bit and writes a grayscale PNG.
void save_map(const Map2D& map, const std::string& path);

void save_image(const Tensor3& image, const std::string& path);

}  // namespace wsod::data
