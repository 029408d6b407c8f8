#pragma once

#include <map>
#include <string>
#include <vector>

#include "cam/classifier.hpp"
#include "cam/multiscale.hpp"
#include "data/manifest.hpp"
#include "refine/crf.hpp"
#include "refine/pamr.hpp"

namespace wsod::refine {

struct PseudoGenConfig {
    std::vector<double> scales = {0.5, 1.0, 1.5, 2.0};
    AffinityConfig affinity;
    double threshold = 0.4;
    bool use_crf = true;  // only applies when a plugin is installed
    int input_size = 64;
    CrfParams crf_params;
    std::string cam_cache_dir;  // from SELFCAL_WSOD_CACHE; empty disables
};

struct PseudoGenResult {
    int written = 0;
    std::vector<std::string> skipped;  // image paths that failed, with reasons logged
    bool crf_refined = false;          // true when any map went through a live plugin
};

// Stage-1 label generation: multiscale_cam -> pamr_refine -> binarize ->
// optional crf_refine, stored as Y1/<stem>.png plus store.json.
PseudoGenResult generate_pseudo_labels(const data::DatasetManifest& manifest,
                                       const cam::ClassifierModel& model,
                                       const std::string& checkpoint_hash,
                                       const PseudoGenConfig& cfg, const std::string& store_dir);

// On-disk pseudo-label store. Y1/ holds the immutable stage-1 labels;
// current/ holds the evolving blend; Y_epoch<n>/ are per-epoch snapshots.
class LabelStore {
public:
    static LabelStore open(const std::string& dir);

    const std::vector<std::string>& stems() const { return stems_; }
    const std::string& dir() const { return dir_; }

    Map2D original(const std::string& stem) const;  // cached in memory
    Map2D current(const std::string& stem) const;   // falls back to Y1
    void set_current(const std::string& stem, const Map2D& map);
    void snapshot(int epoch) const;  // copies current/ into Y_epoch<n>/

    std::string original_dir() const;
    std::string current_dir() const;

private:
    std::string dir_;
    std::vector<std::string> stems_;
    mutable std::map<std::string, Map2D> y1_cache_;
};

}  // namespace wsod::refine
