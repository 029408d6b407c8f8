#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/rng.hpp"

namespace wsod::nn {

// Checkpoint container: model tensors plus optimizer/RNG state for exact
// resume. Binary file with a JSON sidecar at <path>.json describing backbone,
// num_categories, epoch, seed and role.
struct Checkpoint {
    std::map<std::string, std::vector<double>> tensors;
    std::map<std::string, std::vector<double>> opt_state;
    uint64_t adam_t = 0;
    Rng::State rng_state;
    int epoch = 0;

    // sidecar fields
    std::string backbone;
    std::string role;  // "classifier" | "saliency"
    int num_categories = 0;
    uint64_t seed = 0;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace wsod::nn
