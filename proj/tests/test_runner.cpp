#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>

#include "config/run_config.hpp"
#include "core/errors.hpp"
#include "core/fsutil.hpp"
#include "core/hash.hpp"
#include "data/image_io.hpp"
#include "runner/runner.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace wsod;

namespace {

config::RunConfig base_cfg(const std::string& root) {
    config::RunConfig cfg;
    config::set_key(cfg, "preset", "tiny");
    config::set_key(cfg, "seed", "9");
    config::set_key(cfg, "input_size", "32");
    config::set_key(cfg, "data_root", root + "/data");
    config::set_key(cfg, "checkpoint_dir", root + "/ckpt");
    config::set_key(cfg, "store_dir", root + "/store");
    config::set_key(cfg, "pred_dir", root + "/pred");
    config::set_key(cfg, "export_dir", root + "/export");
    config::set_key(cfg, "report_dir", root + "/report");
    config::set_key(cfg, "synthetic.num_images", "8");
    config::set_key(cfg, "synthetic.test_images", "4");
    config::set_key(cfg, "synthetic.image_size", "32");
    config::set_key(cfg, "synthetic.num_categories", "2");
    config::set_key(cfg, "stage1.epochs", "2");
    config::set_key(cfg, "stage1.batch_size", "4");
    config::set_key(cfg, "stage2.epochs", "2");
    config::set_key(cfg, "stage2.batch_size", "4");
    return cfg;
}

}  // namespace

TEST_CASE("runner pipeline end to end on a micro dataset") {
    std::string root = testutil::scratch_dir("runner");
    config::RunConfig cfg = base_cfg(root);
    config::finalize(cfg);

    runner::run_gen_synthetic(cfg);
    CHECK(fs::exists(root + "/data/train.csv"));
    CHECK(fs::exists(root + "/data/test.csv"));
    CHECK(fs::exists(root + "/data/resolved_config.json"));
    auto meta = nlohmann::json::parse(read_text_file(root + "/data/run_meta.json"));
    CHECK(meta.contains("config_hash"));
    CHECK(meta.contains("manifest_sha256"));
    CHECK(meta["seed"] == 9);

    runner::run_train_cls(cfg);
    CHECK(fs::exists(root + "/ckpt/classifier.ckpt"));
    CHECK(fs::exists(root + "/ckpt/classifier_log.csv"));

    SUBCASE("cam cache is honored when SELFCAL_WSOD_CACHE is set") {
        std::string cache = root + "/cam_cache";
        setenv("SELFCAL_WSOD_CACHE", cache.c_str(), 1);
        runner::run_gen_pseudo(cfg);
        unsetenv("SELFCAL_WSOD_CACHE");
        CHECK(fs::exists(cache));
        int cached = 0;
        for (const auto& e : fs::recursive_directory_iterator(cache))
            if (e.is_regular_file()) ++cached;
        CHECK(cached == 8);

        // rerun reading from the cache must reproduce identical labels
        std::string first = Sha256::of_file(root + "/store/Y1/train_00000.png");
        fs::remove_all(root + "/store");
        setenv("SELFCAL_WSOD_CACHE", cache.c_str(), 1);
        runner::run_gen_pseudo(cfg);
        unsetenv("SELFCAL_WSOD_CACHE");
        CHECK(Sha256::of_file(root + "/store/Y1/train_00000.png") == first);
    }

    runner::run_gen_pseudo(cfg);
    CHECK(fs::exists(root + "/store/store.json"));

    runner::run_train_sal(cfg);
    CHECK(fs::exists(root + "/ckpt/saliency.ckpt"));
    CHECK(fs::exists(root + "/ckpt/training_log.csv"));
    CHECK(fs::exists(root + "/store/Y_epoch2"));

    runner::run_infer(cfg);
    int preds = 0;
    for (const auto& e : fs::directory_iterator(root + "/pred"))
        if (e.path().extension() == ".png") ++preds;
    CHECK(preds == 4);

    metrics::MetricReport rep = runner::run_eval(cfg);
    CHECK(rep.per_image.size() == 4);
    CHECK(fs::exists(root + "/report/metrics.csv"));

    SUBCASE("export mirrors the training set 1:1 and flags the CRF state") {
        runner::run_export_labels(cfg);
        int exported = 0;
        for (const auto& e : fs::directory_iterator(root + "/export"))
            if (e.path().extension() == ".png") ++exported;
        CHECK(exported == 8);
        auto emeta = nlohmann::json::parse(read_text_file(root + "/export/export_meta.json"));
        CHECK(emeta["num_exported"] == 8);
        CHECK(emeta["crf"]["plugin_present"] == false);
        CHECK(emeta["crf"]["refined"] == false);
        // exported labels share the ground-truth mask format: 8-bit gray
        Map2D m = data::load_map(root + "/export/train_00000.png");
        CHECK(m.h == 32);
        CHECK(m.w == 32);
    }

    SUBCASE("report with two runs joins on epoch; one run omits the comparison") {
        config::RunConfig rep2 = base_cfg(root);
        config::set_key(rep2, "report.runs",
                        root + "/ckpt/training_log.csv," + root + "/ckpt/training_log.csv");
        config::set_key(rep2, "report.label_store", root + "/store");
        config::set_key(rep2, "report_dir", root + "/report2");
        config::finalize(rep2);
        runner::run_report(rep2);
        CHECK(fs::exists(root + "/report2/comparison.csv"));
        CHECK(fs::exists(root + "/report2/loss_curves.png"));
        std::string csv = read_text_file(root + "/report2/comparison.csv");
        CHECK(csv.rfind("epoch,loss_run1,val_mae_run1,loss_run2,val_mae_run2\n", 0) == 0);
        int strips = 0;
        for (const auto& e : fs::directory_iterator(root + "/report2"))
            if (e.path().filename().string().rfind("progress_", 0) == 0) ++strips;
        CHECK(strips >= 1);

        config::RunConfig rep1 = base_cfg(root);
        config::set_key(rep1, "report.runs", root + "/ckpt/training_log.csv");
        config::set_key(rep1, "report_dir", root + "/report1");
        config::finalize(rep1);
        runner::run_report(rep1);
        CHECK(fs::exists(root + "/report1/run.csv"));
        CHECK(!fs::exists(root + "/report1/comparison.csv"));
        std::string solo = read_text_file(root + "/report1/run.csv");
        CHECK(solo.rfind("epoch,loss_run1,val_mae_run1\n", 0) == 0);

        config::RunConfig rep0 = base_cfg(root);
        config::set_key(rep0, "report_dir", root + "/report0");
        config::finalize(rep0);
        CHECK_THROWS_AS(runner::run_report(rep0), Error);
    }

    SUBCASE("paper preset refuses the synthetic stand-in") {
        config::RunConfig paper;
        config::set_key(paper, "preset", "paper");
        config::set_key(paper, "train_manifest", root + "/data/train.csv");
        config::set_key(paper, "checkpoint_dir", root + "/paper_ckpt");
        config::finalize(paper);
        CHECK_THROWS_WITH_AS(runner::run_train_cls(paper), doctest::Contains("synthetic"), Error);
    }
}
