#pragma once

#include <cstdint>
#include <string>

#include "data/manifest.hpp"

namespace wsod::data {

// Desk-scale stand-in dataset: one salient geometric shape per image whose
// category always matches the class label, plus the exact binary mask.
struct SyntheticConfig {
    int num_images = 200;
    int image_size = 64;
    int num_categories = 4;  // shape/color family per category: disk, square, triangle, ring
    enum class Background { plain, textured } background = Background::textured;
    uint64_t seed = 7;
};

// Writes images/ and masks/ under out_dir plus <split_name>.csv, and returns
// the manifest. Deterministic: a fixed (config, split_name) pair reproduces
// byte-identical files.
DatasetManifest generate_synthetic(const SyntheticConfig& cfg, const std::string& out_dir,
                                   const std::string& split_name);

}  // namespace wsod::data
