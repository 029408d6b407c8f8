#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wsod::data {

struct ManifestEntry {
    std::string image_path;                 // relative to the manifest file
    std::optional<int> category_id;         // absent for saliency-only splits
    std::optional<std::string> label_path;  // ground-truth / pseudo-label mask
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    int num_categories = 1;
    std::string split_name;
    bool synthetic = false;   // set by the generator; blocks --preset paper
    std::string base_dir;     // directory of the manifest file, for resolving paths

    std::string resolve(const std::string& rel) const;
};

// CSV format: header `image_path,category_id,label_path`, empty cells mean
// "absent". Directive comment lines (`# key=value`) may carry num_categories,
// split and the synthetic marker.
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& m, const std::string& path);

}  // namespace wsod::data
