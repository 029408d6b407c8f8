#pragma once

#include <string>

#include "cam/head.hpp"
#include "data/manifest.hpp"
#include "nn/backbone.hpp"
#include "nn/checkpoint.hpp"

namespace wsod::cam {

struct ClassifierModel {
    nn::TinyBackbone backbone;
    ClassifierHead head;

    void init(int num_categories, Rng& rng);
    std::vector<nn::ParamRef> params();

    ClassScores score_image(const Tensor3& image) const;

    nn::Checkpoint to_checkpoint() const;
    static ClassifierModel from_checkpoint(const nn::Checkpoint& ckpt);
};

struct ClassifierTrainConfig {
    double lr = 1e-3;
    int epochs = 12;
    int batch_size = 10;
    int input_size = 64;
    uint64_t seed = 7;
    std::string backbone = "tiny";
};

struct ClassifierTrainResult {
    double final_loss = 0.0;
    double final_accuracy = 0.0;
};

// Softmax cross-entropy training of backbone + GAP head. Writes the
// checkpoint to ckpt_path (sidecar at ckpt_path.json) and a per-epoch
// `epoch,loss,accuracy` CSV to log_path.
ClassifierTrainResult train_classifier(const data::DatasetManifest& manifest,
                                       const ClassifierTrainConfig& cfg,
                                       const std::string& ckpt_path, const std::string& log_path);

}  // namespace wsod::cam
