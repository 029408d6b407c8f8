#pragma once

#include <string>
#include <vector>

#include "data/manifest.hpp"
#include "nn/adam.hpp"
#include "refine/pseudo.hpp"
#include "sal/model.hpp"
#include "selfcal/lambda.hpp"
#include "selfcal/loss.hpp"

namespace wsod::selfcal {

struct SaliencyTrainConfig {
    double lr = 1e-3;
    int epochs = 12;
    int batch_size = 10;
    int input_size = 64;
    LambdaPolicy lambda;
    double binarize_threshold = 0.4;
    refine::AffinityConfig affinity;  // shared with stage 1
    sal::DecoderConfig decoder;
    uint64_t seed = 7;
    std::string backbone = "tiny";
    std::string classifier_ckpt;  // optional: encoder warm start from stage 1
    bool resume = false;
    // evaluation-only MAE curve; never consulted by the trainer itself
    const data::DatasetManifest* eval_manifest = nullptr;
};

struct CalibrationBatch {
    std::vector<const Tensor3*> images;
    std::vector<std::string> stems;
};

// One Alg.-1 step on a batch: P = forward, P' = binarize(pamr(P, I)),
// lambda = lambda_at(n, N), loss = blended BCE, optimizer step, then the
// store's current labels are re-blended from the immutable Y1. Returns the
// mean loss over the batch.
double calibration_step(sal::SaliencyModel& model, nn::Adam& opt, refine::LabelStore& store,
                        const CalibrationBatch& batch, int epoch_n,
                        const SaliencyTrainConfig& cfg);

struct SaliencyTrainResult {
    double final_loss = 0.0;
    double final_val_mae = -1.0;  // -1 when no eval manifest was given
    std::string final_checkpoint;
};

// Full stage-2 loop: per-epoch label snapshots, per-epoch checkpoints for
// resume, and a `epoch,batch,lambda,loss[,val_mae]` CSV log.
SaliencyTrainResult train_saliency(const data::DatasetManifest& manifest, refine::LabelStore& store,
                                   const SaliencyTrainConfig& cfg, const std::string& ckpt_dir,
                                   const std::string& log_path);

}  // namespace wsod::selfcal
