#include "selfcal/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "core/errors.hpp"
#include "core/fsutil.hpp"
#include "core/parallel.hpp"
#include "data/image_io.hpp"
#include "metrics/metrics.hpp"

namespace fs = std::filesystem;

namespace wsod::selfcal {

namespace {

struct SampleOut {
    nn::GradStore grads;
    double loss_mean = 0.0;
    Map2D new_label;
    bool has_label = false;
};

std::string epoch_ckpt_path(const std::string& ckpt_dir, int epoch) {
    char name[48];
    std::snprintf(name, sizeof(name), "saliency_epoch%03d.ckpt", epoch);
    return join_path(ckpt_dir, name);
}

}  // namespace

double calibration_step(sal::SaliencyModel& model, nn::Adam& opt, refine::LabelStore& store,
                        const CalibrationBatch& batch, int epoch_n,
                        const SaliencyTrainConfig& cfg) {
    const int bs = static_cast<int>(batch.images.size());
    require_runtime(bs > 0, "calibration_step: empty batch");
    const double lam = lambda_at(epoch_n, cfg.epochs, cfg.lambda);

    auto params = model.params();
    std::vector<SampleOut> outs(bs);

    parallel_chunks(bs, bs, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            const Tensor3& img = *batch.images[i];
            Map2D y1 = store.original(batch.stems[i]);
            require_config(y1.h == img.h && y1.w == img.w,
                           "calibration_step: label size does not match input size for " +
                               batch.stems[i]);

            sal::SaliencyModel::ForwardState state = model.forward_full(img);
            const Map2D& p = state.prediction;

            // Alg. 1 lines 3-8; with lambda = 0 the refined prediction never
            // enters the target or the store, so skip the refinement work.
            Map2D p_prime(p.h, p.w, 0.0);
            if (lam > 0.0) {
                Map2D refined = refine::pamr_refine(p, img, cfg.affinity);
                p_prime = refine::binarize(refined, cfg.binarize_threshold).values;
            }

            SampleOut& out = outs[i];
            out.loss_mean = sc_loss_mean(p, y1, p_prime, lam);

            Map2D gpred = sc_loss_pred_grad(p, y1, p_prime, lam);
            const double scale = 1.0 / (static_cast<double>(p.size()) * bs);
            for (double& g : gpred.v) g *= scale;

            out.grads = nn::make_grads(params);
            model.backward(state, gpred, out.grads);

            if (lam > 0.0) {
                out.new_label = update_labels(y1, p_prime, lam);
                out.has_label = true;
            }
        }
    });

    nn::GradStore grads = nn::make_grads(params);
    double loss = 0.0;
    for (int i = 0; i < bs; ++i) {
        if (!std::isfinite(outs[i].loss_mean))
            fail_runtime("calibration_step: non-finite loss on image " + batch.stems[i]);
        loss += outs[i].loss_mean;
        nn::accumulate(grads, outs[i].grads);
    }
    loss /= bs;
    opt.step(params, grads);

    for (int i = 0; i < bs; ++i)
        if (outs[i].has_label) store.set_current(batch.stems[i], outs[i].new_label);
    return loss;
}

namespace {

double eval_mae(const sal::SaliencyModel& model, const data::DatasetManifest& manifest,
                int input_size) {
    const int n = static_cast<int>(manifest.entries.size());
    std::vector<double> maes(n, 0.0);
    parallel_chunks(n, n, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            const auto& e = manifest.entries[i];
            if (!e.label_path) continue;
            Tensor3 img = data::load_image(manifest.resolve(e.image_path), input_size);
            Map2D pred = model.forward(img);
            Map2D gt = data::load_map(manifest.resolve(*e.label_path), input_size);
            maes[i] = metrics::mae(pred, gt);
        }
    });
    double s = 0.0;
    int counted = 0;
    for (int i = 0; i < n; ++i)
        if (manifest.entries[i].label_path) {
            s += maes[i];
            ++counted;
        }
    return counted > 0 ? s / counted : -1.0;
}

}  // namespace

SaliencyTrainResult train_saliency(const data::DatasetManifest& manifest, refine::LabelStore& store,
                                   const SaliencyTrainConfig& cfg, const std::string& ckpt_dir,
                                   const std::string& log_path) {
    require_config(cfg.epochs >= 1 && cfg.batch_size >= 1, "train_saliency: bad epoch/batch config");
    nn::require_buildable_backbone(cfg.backbone);
    require_runtime(!store.stems().empty(), "train_saliency: label store is empty");
    make_dirs(ckpt_dir);

    // only entries with a stage-1 label are trainable
    std::vector<int> usable;
    std::vector<std::string> stems;
    stems.reserve(manifest.entries.size());
    for (int i = 0; i < static_cast<int>(manifest.entries.size()); ++i) {
        std::string stem = fs::path(manifest.entries[i].image_path).stem().string();
        if (std::find(store.stems().begin(), store.stems().end(), stem) != store.stems().end())
            usable.push_back(i);
        stems.push_back(stem);
    }
    require_runtime(!usable.empty(), "train_saliency: no manifest entry has a stored label");

    const int n = static_cast<int>(usable.size());
    std::vector<Tensor3> images(n);
    for (int i = 0; i < n; ++i)
        images[i] =
            data::load_image(manifest.resolve(manifest.entries[usable[i]].image_path), cfg.input_size);

    sal::SaliencyModel model;
    nn::Adam opt(cfg.lr);
    Rng rng(derive_seed(cfg.seed, "sal-train", 0));
    int start_epoch = 1;

    if (cfg.resume) {
        int last = 0;
        for (int e = cfg.epochs; e >= 1; --e)
            if (fs::exists(epoch_ckpt_path(ckpt_dir, e))) {
                last = e;
                break;
            }
        if (last > 0) {
            nn::Checkpoint ckpt = nn::load_checkpoint(epoch_ckpt_path(ckpt_dir, last));
            model = sal::SaliencyModel::from_checkpoint(ckpt);
            opt.import_state(ckpt.opt_state, ckpt.adam_t);
            rng.restore(ckpt.rng_state);
            start_epoch = last + 1;
        }
    }
    if (start_epoch == 1) {
        Rng init_rng(derive_seed(cfg.seed, "sal-init", 0));
        std::optional<nn::Checkpoint> encoder_init;
        if (!cfg.classifier_ckpt.empty()) encoder_init = nn::load_checkpoint(cfg.classifier_ckpt);
        model = sal::SaliencyModel::create(cfg.decoder, init_rng, encoder_init);
    }

    std::ofstream log(log_path, cfg.resume && start_epoch > 1 ? std::ios::app : std::ios::trunc);
    require_runtime(static_cast<bool>(log), "cannot open training log " + log_path);
    if (start_epoch == 1) log << "epoch,batch,lambda,loss,val_mae\n";

    SaliencyTrainResult result;
    for (int epoch = start_epoch; epoch <= cfg.epochs; ++epoch) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);

        const double lam = lambda_at(epoch, cfg.epochs, cfg.lambda);
        double epoch_loss = 0.0;
        int batches = 0;
        for (int start = 0; start < n; start += cfg.batch_size) {
            const int end = std::min(start + cfg.batch_size, n);
            CalibrationBatch batch;
            for (int i = start; i < end; ++i) {
                batch.images.push_back(&images[order[i]]);
                batch.stems.push_back(stems[usable[order[i]]]);
            }
            double loss = calibration_step(model, opt, store, batch, epoch, cfg);
            epoch_loss += loss * (end - start);
            ++batches;
            const bool last_batch = end >= n;
            log << epoch << "," << batches << "," << lam << "," << loss << ",";
            if (last_batch && cfg.eval_manifest) {
                result.final_val_mae = eval_mae(model, *cfg.eval_manifest, cfg.input_size);
                log << result.final_val_mae;
            }
            log << "\n";
        }
        result.final_loss = epoch_loss / n;

        store.snapshot(epoch);
        nn::Checkpoint ckpt = model.to_checkpoint();
        ckpt.opt_state = opt.export_state();
        ckpt.adam_t = opt.t();
        ckpt.rng_state = rng.save();
        ckpt.epoch = epoch;
        ckpt.seed = cfg.seed;
        ckpt.num_categories = manifest.num_categories;
        save_checkpoint(ckpt, epoch_ckpt_path(ckpt_dir, epoch));
    }
    log.close();

    // final checkpoint is a copy of the last epoch's
    result.final_checkpoint = join_path(ckpt_dir, "saliency.ckpt");
    nn::Checkpoint final_ckpt = nn::load_checkpoint(epoch_ckpt_path(ckpt_dir, cfg.epochs));
    save_checkpoint(final_ckpt, result.final_checkpoint);
    return result;
}

}  // namespace wsod::selfcal
