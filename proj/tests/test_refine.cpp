#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>

#include "cam/classifier.hpp"
#include "core/errors.hpp"
#include "core/fsutil.hpp"
#include "core/hash.hpp"
#include "data/image_io.hpp"
#include "data/synthetic.hpp"
#include "refine/crf.hpp"
#include "refine/pamr.hpp"
#include "refine/pseudo.hpp"
#include "test_util.hpp"

using namespace wsod;
using namespace wsod::refine;

namespace {

// left half pure red, right half pure blue
Tensor3 two_region_image(int size) {
    Tensor3 img(3, size, size, 0.0);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            if (x < size / 2)
                img.at(0, y, x) = 1.0;
            else
                img.at(2, y, x) = 1.0;
        }
    return img;
}

double region_variance(const Map2D& m, int x_begin, int x_end) {
    double mean = 0.0;
    int count = 0;
    for (int y = 0; y < m.h; ++y)
        for (int x = x_begin; x < x_end; ++x) {
            mean += m.at(y, x);
            ++count;
        }
    mean /= count;
    double var = 0.0;
    for (int y = 0; y < m.h; ++y)
        for (int x = x_begin; x < x_end; ++x) var += (m.at(y, x) - mean) * (m.at(y, x) - mean);
    return var / count;
}

}  // namespace

TEST_CASE("affinity operator properties") {
    Rng rng(13);
    AffinityConfig cfg;
    cfg.iterations = 10;
    cfg.dilations = {1, 2, 4, 8};
    Tensor3 img = testutil::random_tensor(rng, 3, 24, 24);

    SUBCASE("rows sum to one") {
        AffinityMatrix aff = build_affinity(img, cfg);
        const int n = 24 * 24;
        for (int i = 0; i < n; ++i) {
            double sum = 0.0;
            for (int k = aff.row_ptr[i]; k < aff.row_ptr[i + 1]; ++k) sum += aff.weight[k];
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("constant mask is a fixed point") {
        Map2D mask(24, 24, 0.7);
        Map2D out = pamr_refine(mask, img, cfg);
        for (double v : out.v) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));
    }
    SUBCASE("linear in the mask") {
        Map2D m1 = testutil::random_map(rng, 24, 24);
        Map2D m2 = testutil::random_map(rng, 24, 24);
        const double a = 0.6, b = -1.3;
        Map2D combo(24, 24);
        for (size_t i = 0; i < combo.size(); ++i) combo.v[i] = a * m1.v[i] + b * m2.v[i];
        Map2D r_combo = pamr_refine(combo, img, cfg);
        Map2D r1 = pamr_refine(m1, img, cfg);
        Map2D r2 = pamr_refine(m2, img, cfg);
        for (size_t i = 0; i < combo.size(); ++i)
            CHECK(r_combo.v[i] == doctest::Approx(a * r1.v[i] + b * r2.v[i]).epsilon(1e-10));
    }
    SUBCASE("output stays within the mask range") {
        Map2D mask = testutil::random_map(rng, 24, 24);
        Map2D out = pamr_refine(mask, img, cfg);
        CHECK(min_value(out) >= min_value(mask) - 1e-12);
        CHECK(max_value(out) <= max_value(mask) + 1e-12);
    }
    SUBCASE("bad configs are precondition violations") {
        AffinityConfig bad = cfg;
        bad.iterations = 0;
        CHECK_THROWS_AS(validate(bad), Error);
        bad = cfg;
        bad.dilations = {1, 4, 2};
        CHECK_THROWS_AS(validate(bad), Error);
        bad = cfg;
        bad.dilations = {};
        CHECK_THROWS_AS(validate(bad), Error);
        bad = cfg;
        bad.dilations = {0, 2};
        CHECK_THROWS_AS(validate(bad), Error);
    }
    SUBCASE("mask/image size mismatch") {
        Map2D mask(10, 10, 0.5);
        CHECK_THROWS_AS(pamr_refine(mask, img, cfg), Error);
    }
    SUBCASE("smoothing contracts within-region variance on a two-region image") {
        Tensor3 regions = two_region_image(32);
        Rng noise_rng(99);
        // noisy rendition of the left-region indicator
        Map2D mask(32, 32, 0.0);
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x)
                mask.at(y, x) = (x < 16 ? 0.8 : 0.1) + 0.1 * noise_rng.uniform(-1.0, 1.0);
        AffinityConfig rc;
        rc.iterations = 5;
        rc.dilations = {1, 2, 4};
        Map2D out = pamr_refine(mask, regions, rc);
        CHECK(region_variance(out, 0, 16) <= region_variance(mask, 0, 16));
        CHECK(region_variance(out, 16, 32) <= region_variance(mask, 16, 32));
    }
}

TEST_CASE("binarize follows the strict 0.4 rule") {
    Map2D m(1, 4);
    m.v = {0.41, 0.39, 0.40, 0.0};
    BinaryMask b = binarize(m);
    CHECK(b.values.v[0] == 1.0);
    CHECK(b.values.v[1] == 0.0);
    CHECK(b.values.v[2] == 0.0);  // strict >
    CHECK(b.values.v[3] == 0.0);

    Map2D zeros(3, 3, 0.0);
    for (double v : binarize(zeros).values.v) CHECK(v == 0.0);

    // idempotent: binarizing a binary map changes nothing
    Rng rng(21);
    Map2D r = testutil::random_map(rng, 6, 6);
    BinaryMask once = binarize(r, 0.4);
    BinaryMask twice = binarize(once.values, 0.4);
    CHECK(once.values.v == twice.values.v);

    CHECK_THROWS_AS(binarize(m, 0.0), Error);
    CHECK_THROWS_AS(binarize(m, 1.0), Error);
}

TEST_CASE("crf adapter") {
    Rng rng(31);
    Tensor3 img = two_region_image(16);
    Map2D mask(16, 16, 0.0);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 8; ++x) mask.at(y, x) = 1.0;
    set_crf_plugin(nullptr);

    SUBCASE("absent plugin passes through bit-exactly") {
        CrfResult r = crf_refine(mask, img, CrfParams{});
        CHECK(!r.refined);
        CHECK(r.map.v == mask.v);
        CHECK(!crf_plugin_present());
    }
    SUBCASE("installed plugin is used and output clamped") {
        set_crf_plugin([](const Map2D& in, const Tensor3&, const CrfParams&, Map2D& out) {
            out = Map2D(in.h, in.w);
            for (size_t i = 0; i < in.size(); ++i) out.v[i] = in.v[i] * 1.5 - 0.1;
            return true;
        });
        CHECK(crf_plugin_present());
        CrfResult r = crf_refine(mask, img, CrfParams{});
        CHECK(r.refined);
        for (double v : r.map.v) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        set_crf_plugin(nullptr);
    }
    SUBCASE("binary-consistent input stays stable under a smoothing plugin") {
        // 3x3 box blur as a stand-in appearance-aware refiner
        set_crf_plugin([](const Map2D& in, const Tensor3&, const CrfParams&, Map2D& out) {
            out = Map2D(in.h, in.w);
            for (int y = 0; y < in.h; ++y)
                for (int x = 0; x < in.w; ++x) {
                    double sum = 0.0;
                    int cnt = 0;
                    for (int dy = -1; dy <= 1; ++dy)
                        for (int dx = -1; dx <= 1; ++dx) {
                            int ny = y + dy, nx = x + dx;
                            if (ny < 0 || ny >= in.h || nx < 0 || nx >= in.w) continue;
                            sum += in.at(ny, nx);
                            ++cnt;
                        }
                    out.at(y, x) = sum / cnt;
                }
            return true;
        });
        CrfResult r = crf_refine(mask, img, CrfParams{});
        size_t kept = 0, fg = 0;
        for (size_t i = 0; i < mask.size(); ++i)
            if (mask.v[i] == 1.0) {
                ++fg;
                if (r.map.v[i] >= 0.5) ++kept;
            }
        CHECK(static_cast<double>(kept) >= 0.95 * static_cast<double>(fg));
        set_crf_plugin(nullptr);
    }
    SUBCASE("throwing plugin degrades to pass-through") {
        set_crf_plugin([](const Map2D&, const Tensor3&, const CrfParams&, Map2D&) -> bool {
            throw std::runtime_error("plugin exploded");
        });
        CrfResult r = crf_refine(mask, img, CrfParams{});
        CHECK(!r.refined);
        CHECK(r.map.v == mask.v);
        set_crf_plugin(nullptr);
    }
}

TEST_CASE("pseudo label generation and the label store") {
    std::string dir = testutil::scratch_dir("pseudo");
    data::SyntheticConfig scfg;
    scfg.num_images = 6;
    scfg.image_size = 32;
    scfg.num_categories = 2;
    scfg.seed = 9;
    data::DatasetManifest manifest = data::generate_synthetic(scfg, dir + "/data", "train");

    cam::ClassifierModel model;
    Rng rng(41);
    model.init(2, rng);

    PseudoGenConfig pc;
    pc.scales = {1.0, 2.0};
    pc.affinity.iterations = 4;
    pc.affinity.dilations = {1, 2, 4};
    pc.input_size = 32;
    pc.use_crf = false;

    SUBCASE("writes one binary label per image plus store.json") {
        PseudoGenResult res = generate_pseudo_labels(manifest, model, "testhash", pc, dir + "/store");
        CHECK(res.written == 6);
        CHECK(res.skipped.empty());
        auto meta = nlohmann::json::parse(read_text_file(dir + "/store/store.json"));
        CHECK(meta["threshold"] == 0.4);
        CHECK(meta["checkpoint_hash"] == "testhash");
        CHECK(meta["num_labels"] == 6);
        for (const auto& e : manifest.entries) {
            std::string stem = std::filesystem::path(e.image_path).stem().string();
            Map2D label = data::load_map(dir + "/store/Y1/" + stem + ".png");
            CHECK(label.h == 32);
            CHECK(label.w == 32);
            for (double v : label.v) CHECK((v == 0.0 || v == 1.0));
        }
    }
    SUBCASE("deterministic under a fixed model") {
        generate_pseudo_labels(manifest, model, "h", pc, dir + "/s1");
        generate_pseudo_labels(manifest, model, "h", pc, dir + "/s2");
        for (const auto& e : manifest.entries) {
            std::string stem = std::filesystem::path(e.image_path).stem().string();
            CHECK(Sha256::of_file(dir + "/s1/Y1/" + stem + ".png") ==
                  Sha256::of_file(dir + "/s2/Y1/" + stem + ".png"));
        }
    }
    SUBCASE("per-image failures are skipped, not fatal") {
        data::DatasetManifest broken = manifest;
        broken.entries.push_back({"does_not_exist.png", 0, std::nullopt});
        PseudoGenResult res = generate_pseudo_labels(broken, model, "h", pc, dir + "/s3");
        CHECK(res.written == 6);
        REQUIRE(res.skipped.size() == 1);
        CHECK(res.skipped[0] == "does_not_exist.png");
    }
    SUBCASE("label store lifecycle") {
        generate_pseudo_labels(manifest, model, "h", pc, dir + "/s4");
        LabelStore store = LabelStore::open(dir + "/s4");
        REQUIRE(store.stems().size() == 6);
        std::string stem = store.stems()[0];

        Map2D y1 = store.original(stem);
        CHECK(store.current(stem).v == y1.v);  // falls back to Y1

        Map2D updated(32, 32, 0.5);
        store.set_current(stem, updated);
        Map2D back = store.current(stem);
        for (double v : back.v) CHECK(v == doctest::Approx(0.5).epsilon(0.5 / 255.0));
        CHECK(store.original(stem).v == y1.v);  // Y1 untouched

        store.snapshot(3);
        CHECK(std::filesystem::exists(dir + "/s4/Y_epoch3/" + stem + ".png"));

        CHECK_THROWS_AS(LabelStore::open(dir + "/nostore"), Error);
    }
}
