#pragma once

#include <set>
#include <string>
#include <vector>

#include "data/synthetic.hpp"
#include "metrics/evaluate.hpp"
#include "refine/pamr.hpp"
#include "selfcal/lambda.hpp"

namespace wsod::config {

struct StageConfig {
    double lr = 1e-3;
    int epochs = 12;
    int batch_size = 10;
};

// One resolved configuration drives every subcommand. The "paper" preset
// locks the full-scale hyperparameters (Adam, lr 1e-4/3e-6, epochs 20/25,
// batch 20, 256x256, densenet169 backbone, lambda fixed 0.6); "tiny" scales
// everything down for desk runs.
struct RunConfig {
    std::string preset = "tiny";
    uint64_t seed = 7;

    std::string data_root = "data";
    std::string train_manifest;  // defaults to <data_root>/train.csv
    std::string test_manifest;   // defaults to <data_root>/test.csv
    std::string store_dir = "store";
    std::string checkpoint_dir = "checkpoints";
    std::string report_dir = "reports";
    std::string pred_dir = "predictions";
    std::string export_dir = "exported_labels";
    std::string gt_dir;  // optional explicit ground-truth directory for eval

    std::string backbone = "tiny";
    int input_size = 64;
    std::string classifier_ckpt;  // defaults to <checkpoint_dir>/classifier.ckpt
    std::string saliency_ckpt;    // defaults to <checkpoint_dir>/saliency.ckpt
    StageConfig stage1{1e-3, 12, 10};
    StageConfig stage2{1e-3, 12, 10};
    selfcal::LambdaPolicy lambda;
    double binarize_threshold = 0.4;
    std::vector<double> scales = {0.5, 1.0, 1.5, 2.0};
    refine::AffinityConfig affinity;
    metrics::FProtocol protocol = metrics::FProtocol::max_over_thresholds;
    bool crf = true;
    bool resume = false;
    bool eval_during_training = true;  // log evaluation-only MAE when GT exists

    data::SyntheticConfig synthetic;
    int synthetic_test_images = 50;

    // report subcommand inputs
    std::vector<std::string> report_runs;
    std::string report_label_store;
    int report_strip_images = 4;

    std::set<std::string> touched;  // keys set explicitly by file or flag

    std::string classifier_ckpt_path() const;
    std::string saliency_ckpt_path() const;
    std::string resolved_train_manifest() const;
    std::string resolved_test_manifest() const;
};

// key=value override; keys use dotted paths ("stage2.lr", "lambda", ...).
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

void load_config_file(RunConfig& cfg, const std::string& path);

// Applies preset locks and validates. Config errors throw ErrorKind::config.
void finalize(RunConfig& cfg);

std::string to_json(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

}  // namespace wsod::config
