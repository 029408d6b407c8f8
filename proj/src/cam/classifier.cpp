#include "cam/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "core/errors.hpp"
#include "core/fsutil.hpp"
#include "core/parallel.hpp"
#include "data/image_io.hpp"
#include "nn/adam.hpp"

namespace wsod::cam {

void ClassifierModel::init(int num_categories, Rng& rng) {
    backbone.init(rng);
    head = ClassifierHead(num_categories, backbone.out_channels(5));
    head.init(rng);
}

std::vector<nn::ParamRef> ClassifierModel::params() {
    auto out = backbone.params();
    auto hp = head.params();
    out.insert(out.end(), hp.begin(), hp.end());
    return out;
}

ClassScores ClassifierModel::score_image(const Tensor3& image) const {
    nn::BackboneActs acts = backbone.forward(image);
    return classification_scores(acts.f5, head);
}

nn::Checkpoint ClassifierModel::to_checkpoint() const {
    nn::Checkpoint ckpt;
    ClassifierModel* self = const_cast<ClassifierModel*>(this);
    for (const auto& p : self->params()) ckpt.tensors[p.name] = *p.value;
    ckpt.backbone = nn::TinyBackbone::kName;
    ckpt.role = "classifier";
    ckpt.num_categories = head.num_categories;
    return ckpt;
}

ClassifierModel ClassifierModel::from_checkpoint(const nn::Checkpoint& ckpt) {
    require_runtime(ckpt.role == "classifier", "checkpoint role is not 'classifier'");
    require_runtime(ckpt.backbone == nn::TinyBackbone::kName,
                    "checkpoint backbone '" + ckpt.backbone + "' does not match this build");
    ClassifierModel model;
    auto wit = ckpt.tensors.find("head.w");
    require_runtime(wit != ckpt.tensors.end(), "checkpoint is missing head weights");
    int k = ckpt.num_categories;
    int c = model.backbone.out_channels(5);
    require_runtime(static_cast<int>(wit->second.size()) == k * c,
                    "checkpoint head shape mismatch");
    model.head = ClassifierHead(k, c);
    for (const auto& p : model.params()) {
        auto it = ckpt.tensors.find(p.name);
        require_runtime(it != ckpt.tensors.end(), "checkpoint is missing tensor " + p.name);
        require_runtime(it->second.size() == p.value->size(),
                        "checkpoint tensor shape mismatch for " + p.name);
        *p.value = it->second;
    }
    return model;
}

namespace {

struct SampleResult {
    nn::GradStore grads;
    double loss = 0.0;
    bool correct = false;
};

// Forward + backward for one labelled image; gradient of the mean-batch
// softmax cross-entropy is accumulated scaled by inv_batch.
SampleResult classify_backward(const ClassifierModel& model, const Tensor3& image, int label,
                               double inv_batch, const std::vector<nn::ParamRef>& param_shape) {
    SampleResult res;
    res.grads = nn::make_grads(param_shape);

    nn::BackboneActs acts = model.backbone.forward(image);
    std::vector<double> pooled = nn::global_avg_pool(acts.f5);
    ClassScores cls = classification_scores(acts.f5, model.head);

    // numerically stable log-softmax
    const int k = model.head.num_categories;
    double max_s = *std::max_element(cls.scores.begin(), cls.scores.end());
    double sum_exp = 0.0;
    for (double s : cls.scores) sum_exp += std::exp(s - max_s);
    double log_z = max_s + std::log(sum_exp);
    res.loss = log_z - cls.scores[label];

    int argmax = static_cast<int>(std::max_element(cls.scores.begin(), cls.scores.end()) -
                                  cls.scores.begin());
    res.correct = (argmax == label);

    // dL/dscore = softmax - onehot
    std::vector<double> dscores(k);
    for (int i = 0; i < k; ++i)
        dscores[i] = (std::exp(cls.scores[i] - log_z) - (i == label ? 1.0 : 0.0)) * inv_batch;

    const int c = model.head.in_channels;
    std::vector<double>& gw = res.grads["head.w"];
    std::vector<double>& gb = res.grads["head.b"];
    std::vector<double> dpooled(c, 0.0);
    for (int i = 0; i < k; ++i) {
        gb[i] += dscores[i];
        const double* wk = &model.head.weights[static_cast<size_t>(i) * c];
        for (int j = 0; j < c; ++j) {
            gw[static_cast<size_t>(i) * c + j] += dscores[i] * pooled[j];
            dpooled[j] += dscores[i] * wk[j];
        }
    }
    Tensor3 g5 = nn::global_avg_pool_backward(dpooled, acts.f5.c, acts.f5.h, acts.f5.w);
    model.backbone.backward(acts, nullptr, nullptr, &g5, res.grads);
    return res;
}

}  // namespace

ClassifierTrainResult train_classifier(const data::DatasetManifest& manifest,
                                       const ClassifierTrainConfig& cfg,
                                       const std::string& ckpt_path, const std::string& log_path) {
    require_config(cfg.backbone == "tiny" || cfg.backbone == "densenet169",
                   "unknown backbone: " + cfg.backbone);
    nn::require_buildable_backbone(cfg.backbone);
    for (const auto& e : manifest.entries)
        require_config(e.category_id.has_value(),
                       "train_classifier: manifest entry without category_id: " + e.image_path);

    const int n = static_cast<int>(manifest.entries.size());
    std::vector<Tensor3> images(n);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
        images[i] = data::load_image(manifest.resolve(manifest.entries[i].image_path), cfg.input_size);
        labels[i] = *manifest.entries[i].category_id;
    }

    ClassifierModel model;
    Rng init_rng(derive_seed(cfg.seed, "cls-init", 0));
    model.init(manifest.num_categories, init_rng);
    auto params = model.params();

    nn::Adam opt(cfg.lr);
    Rng shuffle_rng(derive_seed(cfg.seed, "cls-shuffle", 0));

    std::ostringstream log;
    log << "epoch,loss,accuracy\n";

    ClassifierTrainResult result;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        int correct = 0;
        for (int start = 0; start < n; start += cfg.batch_size) {
            const int end = std::min(start + cfg.batch_size, n);
            const int bs = end - start;
            const double inv_batch = 1.0 / bs;

            std::vector<SampleResult> results(bs);
            parallel_chunks(bs, bs, [&](int lo, int hi) {
                for (int i = lo; i < hi; ++i) {
                    int idx = order[start + i];
                    results[i] = classify_backward(model, images[idx], labels[idx], inv_batch, params);
                }
            });

            nn::GradStore grads = nn::make_grads(params);
            for (int i = 0; i < bs; ++i) {
                nn::accumulate(grads, results[i].grads);
                epoch_loss += results[i].loss;
                if (results[i].correct) ++correct;
                if (!std::isfinite(results[i].loss))
                    fail_runtime("train_classifier: non-finite loss on image " +
                                 manifest.entries[order[start + i]].image_path);
            }
            opt.step(params, grads);
        }
        result.final_loss = epoch_loss / n;
        result.final_accuracy = static_cast<double>(correct) / n;
        log << epoch << "," << result.final_loss << "," << result.final_accuracy << "\n";
    }

    nn::Checkpoint ckpt = model.to_checkpoint();
    ckpt.epoch = cfg.epochs;
    ckpt.seed = cfg.seed;
    save_checkpoint(ckpt, ckpt_path);
    write_text_file(log_path, log.str());
    return result;
}

}  // namespace wsod::cam
