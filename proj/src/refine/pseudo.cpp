#include "refine/pseudo.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/fsutil.hpp"
#include "core/parallel.hpp"
#include "data/image_io.hpp"

namespace fs = std::filesystem;

namespace wsod::refine {

namespace {

std::string stem_of(const std::string& rel_path) { return fs::path(rel_path).stem().string(); }

// CAM cache entry keyed by checkpoint hash, stem and size.
std::string cache_path(const PseudoGenConfig& cfg, const std::string& ckpt_hash,
                       const std::string& stem) {
    return join_path(join_path(cfg.cam_cache_dir, ckpt_hash),
                     stem + "_" + std::to_string(cfg.input_size) + ".cam");
}

bool load_cached_cam(const std::string& path, int size, Map2D& out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return false;
    out = Map2D(size, size);
    f.read(reinterpret_cast<char*>(out.v.data()),
           static_cast<std::streamsize>(out.v.size() * sizeof(double)));
    return static_cast<bool>(f);
}

void store_cached_cam(const std::string& path, const Map2D& cam) {
    make_dirs(fs::path(path).parent_path().string());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) return;  // cache is best-effort
    f.write(reinterpret_cast<const char*>(cam.v.data()),
            static_cast<std::streamsize>(cam.v.size() * sizeof(double)));
}

}  // namespace

PseudoGenResult generate_pseudo_labels(const data::DatasetManifest& manifest,
                                       const cam::ClassifierModel& model,
                                       const std::string& checkpoint_hash,
                                       const PseudoGenConfig& cfg, const std::string& store_dir) {
    validate(cfg.affinity);
    require_config(cfg.threshold > 0.0 && cfg.threshold < 1.0,
                   "pseudo labels: threshold must be in (0,1)");

    {
        std::set<std::string> stems;
        for (const auto& e : manifest.entries)
            require_config(stems.insert(stem_of(e.image_path)).second,
                           "pseudo labels: duplicate image stem " + stem_of(e.image_path));
    }

    std::string y1_dir = join_path(store_dir, "Y1");
    make_dirs(y1_dir);

    const int n = static_cast<int>(manifest.entries.size());
    std::vector<std::string> failures(n);
    std::vector<uint8_t> crf_used(n, 0);

    const bool crf_live = cfg.use_crf && crf_plugin_present();

    parallel_chunks(n, n, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const auto& entry = manifest.entries[i];
            try {
                Tensor3 img = data::load_image(manifest.resolve(entry.image_path), cfg.input_size);

                Map2D cam_map;
                bool cached = false;
                std::string cpath;
                if (!cfg.cam_cache_dir.empty()) {
                    cpath = cache_path(cfg, checkpoint_hash, stem_of(entry.image_path));
                    cached = load_cached_cam(cpath, cfg.input_size, cam_map);
                }
                if (!cached) {
                    cam_map = cam::multiscale_cam(img, model, cfg.scales);
                    if (!cpath.empty()) store_cached_cam(cpath, cam_map);
                }

                Map2D refined = pamr_refine(cam_map, img, cfg.affinity);
                BinaryMask bin = binarize(refined, cfg.threshold);
                Map2D label = bin.values;
                if (crf_live) {
                    CrfResult crf = crf_refine(label, img, cfg.crf_params);
                    label = std::move(crf.map);
                    crf_used[i] = crf.refined ? 1 : 0;
                }
                data::save_map(label, join_path(y1_dir, stem_of(entry.image_path) + ".png"));
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    });

    PseudoGenResult result;
    nlohmann::json skipped = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
        if (failures[i].empty()) {
            ++result.written;
            if (crf_used[i]) result.crf_refined = true;
        } else {
            std::cerr << "warning: skipping " << manifest.entries[i].image_path << ": "
                      << failures[i] << "\n";
            result.skipped.push_back(manifest.entries[i].image_path);
            skipped.push_back({{"image", manifest.entries[i].image_path}, {"reason", failures[i]}});
        }
    }
    require_runtime(result.written >= 1, "pseudo labels: no labels could be generated");

    nlohmann::json meta = {
        {"threshold", cfg.threshold},
        {"scales", cfg.scales},
        {"affinity", {{"iterations", cfg.affinity.iterations}, {"dilations", cfg.affinity.dilations}}},
        {"checkpoint_hash", checkpoint_hash},
        {"input_size", cfg.input_size},
        {"crf", {{"requested", cfg.use_crf}, {"plugin_present", crf_plugin_present()},
                 {"refined", result.crf_refined}}},
        {"pipeline", "multiscale_cam > pamr_refine > binarize > crf"},
        {"num_labels", result.written},
        {"skipped", skipped},
    };
    write_text_file(join_path(store_dir, "store.json"), meta.dump(2) + "\n");
    return result;
}

LabelStore LabelStore::open(const std::string& dir) {
    LabelStore store;
    store.dir_ = dir;
    std::string y1 = join_path(dir, "Y1");
    require_runtime(fs::exists(y1), "label store has no Y1 directory: " + dir);
    store.stems_ = list_png_stems(y1);
    require_runtime(!store.stems_.empty(), "label store is empty: " + dir);
    return store;
}

std::string LabelStore::original_dir() const { return join_path(dir_, "Y1"); }
std::string LabelStore::current_dir() const { return join_path(dir_, "current"); }

Map2D LabelStore::original(const std::string& stem) const {
    auto it = y1_cache_.find(stem);
    if (it != y1_cache_.end()) return it->second;
    Map2D m = data::load_map(join_path(original_dir(), stem + ".png"));
    y1_cache_[stem] = m;
    return m;
}

Map2D LabelStore::current(const std::string& stem) const {
    std::string path = join_path(current_dir(), stem + ".png");
    if (fs::exists(path)) return data::load_map(path);
    return original(stem);
}

void LabelStore::set_current(const std::string& stem, const Map2D& map) {
    make_dirs(current_dir());
    data::save_map(map, join_path(current_dir(), stem + ".png"));
}

void LabelStore::snapshot(int epoch) const {
    std::string dst = join_path(dir_, "Y_epoch" + std::to_string(epoch));
    make_dirs(dst);
    for (const auto& stem : stems_) {
        std::string src = join_path(current_dir(), stem + ".png");
        if (!fs::exists(src)) src = join_path(original_dir(), stem + ".png");
        fs::copy_file(src, join_path(dst, stem + ".png"), fs::copy_options::overwrite_existing);
    }
}

}  // namespace wsod::refine
