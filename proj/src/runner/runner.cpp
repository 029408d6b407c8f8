#include "runner/runner.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "cam/classifier.hpp"
#include "core/errors.hpp"
#include "core/fsutil.hpp"
#include "core/hash.hpp"
#include "core/parallel.hpp"
#include "data/image_io.hpp"
#include "data/synthetic.hpp"
#include "refine/pseudo.hpp"
#include "report/plot.hpp"
#include "sal/model.hpp"
#include "selfcal/train.hpp"

namespace fs = std::filesystem;

namespace wsod::runner {

namespace {

void write_run_meta(const config::RunConfig& cfg, const std::string& out_dir,
                    const std::string& manifest_path) {
    make_dirs(out_dir);
    std::string resolved = config::to_json(cfg);
    write_text_file(join_path(out_dir, "resolved_config.json"), resolved);
    nlohmann::json meta = {
        {"config_hash", Sha256::of_string(resolved)},
        {"seed", cfg.seed},
    };
    if (!manifest_path.empty() && fs::exists(manifest_path))
        meta["manifest_sha256"] = Sha256::of_file(manifest_path);
    write_text_file(join_path(out_dir, "run_meta.json"), meta.dump(2) + "\n");
}

data::DatasetManifest load_checked_manifest(const config::RunConfig& cfg,
                                            const std::string& path) {
    data::DatasetManifest m = data::load_manifest(path);
    if (cfg.preset == "paper" && m.synthetic)
        fail_config("--preset paper refuses the synthetic stand-in dataset (" + path + ")");
    return m;
}

std::string cam_cache_dir() {
    const char* env = std::getenv("SELFCAL_WSOD_CACHE");
    return env ? std::string(env) : std::string();
}

}  // namespace

void run_gen_synthetic(const config::RunConfig& cfg) {
    DirLock lock(cfg.data_root);

    data::SyntheticConfig train_cfg = cfg.synthetic;
    data::generate_synthetic(train_cfg, cfg.data_root, "train");

    data::SyntheticConfig test_cfg = cfg.synthetic;
    test_cfg.num_images = cfg.synthetic_test_images;
    data::generate_synthetic(test_cfg, cfg.data_root, "test");

    write_run_meta(cfg, cfg.data_root, join_path(cfg.data_root, "train.csv"));
}

void run_train_cls(const config::RunConfig& cfg) {
    const std::string manifest_path = cfg.resolved_train_manifest();
    data::DatasetManifest manifest = load_checked_manifest(cfg, manifest_path);
    DirLock lock(cfg.checkpoint_dir);

    cam::ClassifierTrainConfig tc;
    tc.lr = cfg.stage1.lr;
    tc.epochs = cfg.stage1.epochs;
    tc.batch_size = cfg.stage1.batch_size;
    tc.input_size = cfg.input_size;
    tc.seed = cfg.seed;
    tc.backbone = cfg.backbone;

    cam::ClassifierTrainResult res =
        cam::train_classifier(manifest, tc, cfg.classifier_ckpt_path(),
                              join_path(cfg.checkpoint_dir, "classifier_log.csv"));
    write_run_meta(cfg, cfg.checkpoint_dir, manifest_path);
    std::cout << "stage-1 training done: loss " << res.final_loss << ", accuracy "
              << res.final_accuracy << "\n";
}

void run_gen_pseudo(const config::RunConfig& cfg) {
    const std::string manifest_path = cfg.resolved_train_manifest();
    data::DatasetManifest manifest = load_checked_manifest(cfg, manifest_path);
    DirLock lock(cfg.store_dir);

    nn::Checkpoint ckpt = nn::load_checkpoint(cfg.classifier_ckpt_path());
    cam::ClassifierModel model = cam::ClassifierModel::from_checkpoint(ckpt);

    refine::PseudoGenConfig pc;
    pc.scales = cfg.scales;
    pc.affinity = cfg.affinity;
    pc.threshold = cfg.binarize_threshold;
    pc.use_crf = cfg.crf;
    pc.input_size = cfg.input_size;
    pc.cam_cache_dir = cam_cache_dir();

    refine::PseudoGenResult res = refine::generate_pseudo_labels(
        manifest, model, Sha256::of_file(cfg.classifier_ckpt_path()), pc, cfg.store_dir);
    write_run_meta(cfg, cfg.store_dir, manifest_path);
    std::cout << "pseudo labels written: " << res.written << " (skipped " << res.skipped.size()
              << ")\n";
}

void run_train_sal(const config::RunConfig& cfg) {
    const std::string manifest_path = cfg.resolved_train_manifest();
    data::DatasetManifest manifest = load_checked_manifest(cfg, manifest_path);
    DirLock lock(cfg.checkpoint_dir);

    refine::LabelStore store = refine::LabelStore::open(cfg.store_dir);

    selfcal::SaliencyTrainConfig tc;
    tc.lr = cfg.stage2.lr;
    tc.epochs = cfg.stage2.epochs;
    tc.batch_size = cfg.stage2.batch_size;
    tc.input_size = cfg.input_size;
    tc.lambda = cfg.lambda;
    tc.binarize_threshold = cfg.binarize_threshold;
    tc.affinity = cfg.affinity;
    tc.seed = cfg.seed;
    tc.backbone = cfg.backbone;
    tc.resume = cfg.resume;
    if (fs::exists(cfg.classifier_ckpt_path())) tc.classifier_ckpt = cfg.classifier_ckpt_path();

    // evaluation-only MAE curve when the training set carries synthetic GT;
    // the trainer never reads it for decisions
    data::DatasetManifest eval_manifest;
    bool have_gt = false;
    if (cfg.eval_during_training) {
        for (const auto& e : manifest.entries) have_gt = have_gt || e.label_path.has_value();
        if (have_gt) eval_manifest = manifest;
    }
    tc.eval_manifest = have_gt ? &eval_manifest : nullptr;

    selfcal::SaliencyTrainResult res = selfcal::train_saliency(
        manifest, store, tc, cfg.checkpoint_dir, join_path(cfg.checkpoint_dir, "training_log.csv"));
    write_run_meta(cfg, cfg.checkpoint_dir, manifest_path);
    std::cout << "stage-2 training done: loss " << res.final_loss;
    if (res.final_val_mae >= 0.0) std::cout << ", eval MAE " << res.final_val_mae;
    std::cout << "\n";
}

void run_infer(const config::RunConfig& cfg) {
    const std::string manifest_path = cfg.resolved_test_manifest();
    data::DatasetManifest manifest = load_checked_manifest(cfg, manifest_path);
    DirLock lock(cfg.pred_dir);

    nn::Checkpoint ckpt = nn::load_checkpoint(cfg.saliency_ckpt_path());
    sal::SaliencyModel model = sal::SaliencyModel::from_checkpoint(ckpt);
    sal::infer(manifest, model, cfg.input_size, cfg.pred_dir);
    write_run_meta(cfg, cfg.pred_dir, manifest_path);
    std::cout << "wrote " << manifest.entries.size() << " prediction maps to " << cfg.pred_dir
              << "\n";
}

metrics::MetricReport run_eval(const config::RunConfig& cfg) {
    metrics::MetricReport report;
    if (!cfg.gt_dir.empty()) {
        report = metrics::evaluate_dataset(cfg.pred_dir, cfg.gt_dir, cfg.protocol);
    } else {
        data::DatasetManifest manifest = data::load_manifest(cfg.resolved_test_manifest());
        report = metrics::evaluate_manifest(cfg.pred_dir, manifest, cfg.protocol);
    }
    for (const auto& s : report.missing_predictions)
        std::cerr << "warning: no prediction for " << s << "\n";
    for (const auto& s : report.missing_ground_truths)
        std::cerr << "warning: no ground truth for " << s << "\n";

    make_dirs(cfg.report_dir);
    metrics::write_report_csv(report, join_path(cfg.report_dir, "metrics.csv"));
    write_run_meta(cfg, cfg.report_dir, "");
    std::cout << metrics::format_summary(report) << "\n";
    return report;
}

void run_export_labels(const config::RunConfig& cfg) {
    const std::string manifest_path = cfg.resolved_train_manifest();
    data::DatasetManifest manifest = load_checked_manifest(cfg, manifest_path);
    DirLock lock(cfg.export_dir);

    nn::Checkpoint ckpt = nn::load_checkpoint(cfg.saliency_ckpt_path());
    sal::SaliencyModel model = sal::SaliencyModel::from_checkpoint(ckpt);

    const bool crf_live = cfg.crf && refine::crf_plugin_present();
    const int n = static_cast<int>(manifest.entries.size());
    std::vector<uint8_t> refined(n, 0);
    parallel_chunks(n, n, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const auto& entry = manifest.entries[i];
            Tensor3 img = data::load_image(manifest.resolve(entry.image_path), cfg.input_size);
            Map2D pred = model.forward(img);
            if (crf_live) {
                refine::CrfResult crf = refine::crf_refine(pred, img, refine::CrfParams{});
                pred = std::move(crf.map);
                refined[i] = crf.refined ? 1 : 0;
            }
            std::string stem = fs::path(entry.image_path).stem().string();
            data::save_map(pred, join_path(cfg.export_dir, stem + ".png"));
        }
    });

    bool any_refined = false;
    for (uint8_t r : refined) any_refined = any_refined || (r != 0);
    nlohmann::json meta = {
        {"num_exported", n},
        {"crf", {{"requested", cfg.crf}, {"plugin_present", refine::crf_plugin_present()},
                 {"refined", any_refined}}},
    };
    write_text_file(join_path(cfg.export_dir, "export_meta.json"), meta.dump(2) + "\n");
    write_run_meta(cfg, cfg.export_dir, manifest_path);
    if (!any_refined && cfg.crf)
        std::cerr << "note: CRF plugin absent; exported labels are raw predictions\n";
    std::cout << "exported " << n << " training-set labels to " << cfg.export_dir << "\n";
}

namespace {

struct RunLog {
    std::string name;
    std::vector<int> epochs;
    std::vector<double> mean_loss;
    std::vector<double> val_mae;  // NaN when absent
};

RunLog parse_training_log(const std::string& path) {
    RunLog log;
    log.name = fs::path(path).parent_path().filename().string();
    if (log.name.empty()) log.name = fs::path(path).stem().string();
    std::ifstream f(path);
    require_config(static_cast<bool>(f), "report: cannot open training log " + path);
    std::string line;
    std::getline(f, line);  // header
    int cur_epoch = -1;
    double loss_sum = 0.0;
    int loss_count = 0;
    double last_mae = std::nan("");
    auto flush = [&]() {
        if (cur_epoch >= 0 && loss_count > 0) {
            log.epochs.push_back(cur_epoch);
            log.mean_loss.push_back(loss_sum / loss_count);
            log.val_mae.push_back(last_mae);
        }
        loss_sum = 0.0;
        loss_count = 0;
        last_mae = std::nan("");
    };
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        while (cells.size() < 5) cells.push_back("");
        int epoch = std::atoi(cells[0].c_str());
        if (epoch != cur_epoch) {
            flush();
            cur_epoch = epoch;
        }
        loss_sum += std::atof(cells[3].c_str());
        ++loss_count;
        if (!cells[4].empty()) last_mae = std::atof(cells[4].c_str());
    }
    flush();
    require_config(!log.epochs.empty(), "report: empty training log " + path);
    return log;
}

}  // namespace

void run_report(const config::RunConfig& cfg) {
    require_config(!cfg.report_runs.empty() && cfg.report_runs.size() <= 2,
                   "report: pass one or two training logs via report.runs / --run");
    make_dirs(cfg.report_dir);

    std::vector<RunLog> runs;
    for (size_t i = 0; i < cfg.report_runs.size(); ++i) {
        RunLog log = parse_training_log(cfg.report_runs[i]);
        log.name = "run" + std::to_string(i + 1);
        runs.push_back(std::move(log));
    }

    // joined CSV; the comparison columns exist only with a second run
    std::ostringstream csv;
    csv << "epoch";
    for (const auto& r : runs) csv << ",loss_" << r.name << ",val_mae_" << r.name;
    csv << "\n";
    size_t max_epochs = 0;
    for (const auto& r : runs) max_epochs = std::max(max_epochs, r.epochs.size());
    for (size_t i = 0; i < max_epochs; ++i) {
        csv << (i + 1);
        for (const auto& r : runs) {
            csv << ",";
            if (i < r.epochs.size()) csv << r.mean_loss[i];
            csv << ",";
            if (i < r.epochs.size() && !std::isnan(r.val_mae[i])) csv << r.val_mae[i];
        }
        csv << "\n";
    }
    write_text_file(join_path(cfg.report_dir, runs.size() == 2 ? "comparison.csv" : "run.csv"),
                    csv.str());

    std::vector<report::Series> loss_series, mae_series;
    const uint8_t colors[2][3] = {{200, 60, 40}, {40, 90, 200}};
    for (size_t i = 0; i < runs.size(); ++i) {
        report::Series s;
        s.label = runs[i].name + " LOSS";
        for (size_t e = 0; e < runs[i].epochs.size(); ++e) {
            s.x.push_back(runs[i].epochs[e]);
            s.y.push_back(runs[i].mean_loss[e]);
        }
        s.r = colors[i][0];
        s.g = colors[i][1];
        s.b = colors[i][2];
        loss_series.push_back(s);

        report::Series m;
        m.label = runs[i].name + " MAE";
        for (size_t e = 0; e < runs[i].epochs.size(); ++e)
            if (!std::isnan(runs[i].val_mae[e])) {
                m.x.push_back(runs[i].epochs[e]);
                m.y.push_back(runs[i].val_mae[e]);
            }
        m.r = colors[i][0];
        m.g = colors[i][1];
        m.b = colors[i][2];
        if (!m.x.empty()) mae_series.push_back(m);
    }
    report::render_line_chart(join_path(cfg.report_dir, "loss_curves.png"), "TRAINING LOSS",
                              loss_series);
    if (!mae_series.empty())
        report::render_line_chart(join_path(cfg.report_dir, "mae_curves.png"),
                                  "EVAL MAE (GROUND TRUTH, REPORT ONLY)", mae_series);

    // label-evolution strips from the store snapshots
    if (!cfg.report_label_store.empty()) {
        std::vector<int> epochs;
        for (const auto& e : fs::directory_iterator(cfg.report_label_store)) {
            std::string name = e.path().filename().string();
            if (e.is_directory() && name.rfind("Y_epoch", 0) == 0)
                epochs.push_back(std::atoi(name.substr(7).c_str()));
        }
        std::sort(epochs.begin(), epochs.end());
        std::vector<std::string> stems = list_png_stems(join_path(cfg.report_label_store, "Y1"));
        const int strip_count = std::min<int>(cfg.report_strip_images, static_cast<int>(stems.size()));
        for (int i = 0; i < strip_count; ++i) {
            std::vector<Map2D> maps;
            std::vector<std::string> captions;
            maps.push_back(data::load_map(join_path(join_path(cfg.report_label_store, "Y1"),
                                                    stems[i] + ".png")));
            captions.push_back("Y1");
            for (int epoch : epochs) {
                std::string p = join_path(
                    join_path(cfg.report_label_store, "Y_epoch" + std::to_string(epoch)),
                    stems[i] + ".png");
                if (fs::exists(p)) {
                    maps.push_back(data::load_map(p));
                    captions.push_back("E" + std::to_string(epoch));
                }
            }
            report::render_map_strip(join_path(cfg.report_dir, "progress_" + stems[i] + ".png"),
                                     maps, captions);
        }
    }
    write_run_meta(cfg, cfg.report_dir, "");
    std::cout << "report written to " << cfg.report_dir << "\n";
}

}  // namespace wsod::runner
