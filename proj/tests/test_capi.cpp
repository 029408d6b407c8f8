#include <doctest.h>

#include <json.hpp>

#include <cstring>
#include <filesystem>
#include <string>

#include "core/fsutil.hpp"
#include "data/image_io.hpp"
#include "refine/crf.hpp"
#include "selfcal_wsod.h"
#include "test_util.hpp"

TEST_CASE("c api basics") {
    CHECK(std::string(sw_version()) == "1.0.0");

    SUBCASE("null handles are config errors with messages") {
        CHECK(sw_config_load_file(nullptr, "x") == SW_ERR_CONFIG);
        CHECK(std::strlen(sw_last_error()) > 0);
        CHECK(sw_config_set(nullptr, "seed", "1") == SW_ERR_CONFIG);
        CHECK(sw_run_train_classifier(nullptr) == SW_ERR_CONFIG);
        CHECK(sw_report_image_count(nullptr) == -1);
    }
    SUBCASE("config lifecycle") {
        sw_config* cfg = sw_config_new();
        REQUIRE(cfg);
        CHECK(sw_config_set(cfg, "seed", "21") == SW_OK);
        CHECK(sw_config_set(cfg, "input_size", "32") == SW_OK);
        CHECK(sw_config_set(cfg, "bogus_key", "1") == SW_ERR_CONFIG);
        CHECK(std::string(sw_last_error()).find("unknown key") != std::string::npos);
        CHECK(sw_config_finalize(cfg) == SW_OK);

        char* json = sw_config_to_json(cfg);
        REQUIRE(json);
        auto j = nlohmann::json::parse(json);
        CHECK(j["seed"] == 21);
        CHECK(j["input_size"] == 32);
        sw_string_free(json);
        sw_config_free(cfg);
    }
    SUBCASE("running without finalize is a config error") {
        sw_config* cfg = sw_config_new();
        CHECK(sw_config_set(cfg, "seed", "3") == SW_OK);
        CHECK(sw_run_gen_synthetic(cfg) == SW_ERR_CONFIG);
        CHECK(std::string(sw_last_error()).find("finalize") != std::string::npos);
        sw_config_free(cfg);
    }
    SUBCASE("missing manifest surfaces as a config error (exit code 2)") {
        sw_config* cfg = sw_config_new();
        CHECK(sw_config_set(cfg, "train_manifest", "definitely_missing.csv") == SW_OK);
        CHECK(sw_config_finalize(cfg) == SW_OK);
        CHECK(sw_run_train_classifier(cfg) == SW_ERR_CONFIG);
        CHECK(std::string(sw_last_error()).find("manifest") != std::string::npos);
        sw_config_free(cfg);
    }
}

TEST_CASE("c api evaluation round trip") {
    std::string dir = testutil::scratch_dir("capi_eval");
    wsod::Rng rng(33);
    wsod::make_dirs(dir + "/gt");
    wsod::make_dirs(dir + "/pred");
    for (int i = 0; i < 3; ++i) {
        wsod::Map2D g = testutil::random_binary(rng, 16, 16, 0.3);
        wsod::data::save_map(g, dir + "/gt/m" + std::to_string(i) + ".png");
        wsod::data::save_map(g, dir + "/pred/m" + std::to_string(i) + ".png");
    }

    sw_config* cfg = sw_config_new();
    CHECK(sw_config_set(cfg, "pred_dir", (dir + "/pred").c_str()) == SW_OK);
    CHECK(sw_config_set(cfg, "gt_dir", (dir + "/gt").c_str()) == SW_OK);
    CHECK(sw_config_set(cfg, "report_dir", (dir + "/report").c_str()) == SW_OK);
    CHECK(sw_config_finalize(cfg) == SW_OK);

    sw_report* report = nullptr;
    REQUIRE(sw_run_eval(cfg, &report) == SW_OK);
    REQUIRE(report);
    CHECK(sw_report_image_count(report) == 3);

    double means[4];
    CHECK(sw_report_means(report, means) == SW_OK);
    CHECK(means[0] == doctest::Approx(1.0).epsilon(1e-9));   // S
    CHECK(means[1] == doctest::Approx(1.0).epsilon(1e-9));   // E
    CHECK(means[2] == doctest::Approx(1.0).epsilon(1e-9));   // F
    CHECK(means[3] == doctest::Approx(0.0).epsilon(1e-12));  // MAE

    char id[64];
    double row[4];
    CHECK(sw_report_image_metrics(report, 0, id, sizeof(id), row) == SW_OK);
    CHECK(std::string(id) == "m0");
    CHECK(sw_report_image_metrics(report, 99, id, sizeof(id), row) == SW_ERR_CONFIG);

    CHECK(std::filesystem::exists(dir + "/report/metrics.csv"));
    sw_report_free(report);
    sw_config_free(cfg);
}

namespace {

int doubling_plugin(const double* mask, const double* /*image*/, int h, int w, double* out,
                    void* user) {
    *static_cast<int*>(user) += 1;
    for (int i = 0; i < h * w; ++i) out[i] = mask[i] * 2.0;
    return 1;
}

}  // namespace

TEST_CASE("c api crf plugin installation") {
    CHECK(!wsod::refine::crf_plugin_present());
    int calls = 0;
    CHECK(sw_crf_set_plugin(&doubling_plugin, &calls) == SW_OK);
    CHECK(wsod::refine::crf_plugin_present());

    wsod::Map2D mask(4, 4, 0.4);
    wsod::Tensor3 img(3, 4, 4, 0.5);
    wsod::refine::CrfResult r = wsod::refine::crf_refine(mask, img, wsod::refine::CrfParams{});
    CHECK(r.refined);
    CHECK(calls == 1);
    for (double v : r.map.v) CHECK(v == doctest::Approx(0.8));

    CHECK(sw_crf_set_plugin(nullptr, nullptr) == SW_OK);
    CHECK(!wsod::refine::crf_plugin_present());
}
