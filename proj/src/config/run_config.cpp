#include "config/run_config.hpp"

#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/fsutil.hpp"
#include "core/hash.hpp"
#include "nn/backbone.hpp"

using nlohmann::json;

namespace wsod::config {

std::string RunConfig::classifier_ckpt_path() const {
    return classifier_ckpt.empty() ? join_path(checkpoint_dir, "classifier.ckpt") : classifier_ckpt;
}

std::string RunConfig::saliency_ckpt_path() const {
    return saliency_ckpt.empty() ? join_path(checkpoint_dir, "saliency.ckpt") : saliency_ckpt;
}

std::string RunConfig::resolved_train_manifest() const {
    return train_manifest.empty() ? join_path(data_root, "train.csv") : train_manifest;
}

std::string RunConfig::resolved_test_manifest() const {
    return test_manifest.empty() ? join_path(data_root, "test.csv") : test_manifest;
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        double v = std::stod(value, &used);
        require_config(used == value.size(), "config: bad number for " + key + ": " + value);
        return v;
    } catch (const Error&) {
        throw;
    } catch (...) {
        fail_config("config: bad number for " + key + ": " + value);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        int v = std::stoi(value, &used);
        require_config(used == value.size(), "config: bad integer for " + key + ": " + value);
        return v;
    } catch (const Error&) {
        throw;
    } catch (...) {
        fail_config("config: bad integer for " + key + ": " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    fail_config("config: bad boolean for " + key + ": " + value);
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_double(key, item));
    require_config(!out.empty(), "config: empty list for " + key);
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_int(key, item));
    require_config(!out.empty(), "config: empty list for " + key);
    return out;
}

}  // namespace

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    cfg.touched.insert(key);
    if (key == "preset") {
        require_config(value == "tiny" || value == "paper", "config: preset must be tiny or paper");
        cfg.preset = value;
    } else if (key == "seed") {
        cfg.seed = static_cast<uint64_t>(parse_int(key, value));
    } else if (key == "data_root") {
        cfg.data_root = value;
    } else if (key == "train_manifest") {
        cfg.train_manifest = value;
    } else if (key == "test_manifest") {
        cfg.test_manifest = value;
    } else if (key == "store_dir") {
        cfg.store_dir = value;
    } else if (key == "checkpoint_dir") {
        cfg.checkpoint_dir = value;
    } else if (key == "report_dir") {
        cfg.report_dir = value;
    } else if (key == "pred_dir") {
        cfg.pred_dir = value;
    } else if (key == "export_dir") {
        cfg.export_dir = value;
    } else if (key == "gt_dir") {
        cfg.gt_dir = value;
    } else if (key == "backbone") {
        cfg.backbone = value;
    } else if (key == "classifier_ckpt") {
        cfg.classifier_ckpt = value;
    } else if (key == "saliency_ckpt") {
        cfg.saliency_ckpt = value;
    } else if (key == "input_size") {
        cfg.input_size = parse_int(key, value);
    } else if (key == "stage1.lr") {
        cfg.stage1.lr = parse_double(key, value);
    } else if (key == "stage1.epochs") {
        cfg.stage1.epochs = parse_int(key, value);
    } else if (key == "stage1.batch_size") {
        cfg.stage1.batch_size = parse_int(key, value);
    } else if (key == "stage2.lr") {
        cfg.stage2.lr = parse_double(key, value);
    } else if (key == "stage2.epochs") {
        cfg.stage2.epochs = parse_int(key, value);
    } else if (key == "stage2.batch_size") {
        cfg.stage2.batch_size = parse_int(key, value);
    } else if (key == "lambda") {
        cfg.lambda = selfcal::LambdaPolicy::parse(value);
    } else if (key == "binarize_threshold") {
        cfg.binarize_threshold = parse_double(key, value);
    } else if (key == "scales") {
        cfg.scales = parse_double_list(key, value);
    } else if (key == "affinity.iterations") {
        cfg.affinity.iterations = parse_int(key, value);
    } else if (key == "affinity.dilations") {
        cfg.affinity.dilations = parse_int_list(key, value);
    } else if (key == "metric_protocol") {
        if (value == "max_over_thresholds")
            cfg.protocol = metrics::FProtocol::max_over_thresholds;
        else if (value == "adaptive")
            cfg.protocol = metrics::FProtocol::adaptive;
        else
            fail_config("config: metric_protocol must be max_over_thresholds or adaptive");
    } else if (key == "crf") {
        cfg.crf = parse_bool(key, value);
    } else if (key == "resume") {
        cfg.resume = parse_bool(key, value);
    } else if (key == "eval_during_training") {
        cfg.eval_during_training = parse_bool(key, value);
    } else if (key == "synthetic.num_images") {
        cfg.synthetic.num_images = parse_int(key, value);
    } else if (key == "synthetic.image_size") {
        cfg.synthetic.image_size = parse_int(key, value);
    } else if (key == "synthetic.num_categories") {
        cfg.synthetic.num_categories = parse_int(key, value);
    } else if (key == "synthetic.background") {
        if (value == "plain")
            cfg.synthetic.background = data::SyntheticConfig::Background::plain;
        else if (value == "textured")
            cfg.synthetic.background = data::SyntheticConfig::Background::textured;
        else
            fail_config("config: synthetic.background must be plain or textured");
    } else if (key == "synthetic.test_images") {
        cfg.synthetic_test_images = parse_int(key, value);
    } else if (key == "report.runs") {
        cfg.report_runs.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) cfg.report_runs.push_back(item);
    } else if (key == "report.label_store") {
        cfg.report_label_store = value;
    } else if (key == "report.strip_images") {
        cfg.report_strip_images = parse_int(key, value);
    } else {
        fail_config("config: unknown key: " + key);
    }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const Error&) {
        fail_config("config file not found: " + path);
    } catch (const std::exception& e) {
        fail_config("config file " + path + " is not valid JSON: " + e.what());
    }
    require_config(j.is_object(), "config file must hold a JSON object");

    // flatten one nesting level into dotted keys
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            for (const auto& [sub, subval] : value.items()) {
                std::string v = subval.is_string() ? subval.get<std::string>() : subval.dump();
                if (subval.is_array()) {
                    std::string list;
                    for (const auto& item : subval) {
                        if (!list.empty()) list += ",";
                        list += item.is_string() ? item.get<std::string>() : item.dump();
                    }
                    v = list;
                }
                set_key(cfg, key + "." + sub, v);
            }
        } else if (value.is_array()) {
            std::string list;
            for (const auto& item : value) {
                if (!list.empty()) list += ",";
                list += item.is_string() ? item.get<std::string>() : item.dump();
            }
            set_key(cfg, key, list);
        } else {
            std::string v = value.is_string() ? value.get<std::string>() : value.dump();
            set_key(cfg, key, v);
        }
    }
}

namespace {

struct Lock {
    const char* key;
    std::string value;
};

// V-A settings the paper preset pins
std::vector<Lock> paper_locks() {
    return {
        {"backbone", "densenet169"}, {"input_size", "256"},   {"stage1.lr", "0.0001"},
        {"stage1.epochs", "20"},     {"stage1.batch_size", "20"}, {"stage2.lr", "0.000003"},
        {"stage2.epochs", "25"},     {"stage2.batch_size", "20"}, {"lambda", "fixed:0.6"},
    };
}

std::string current_value(const RunConfig& cfg, const std::string& key) {
    if (key == "backbone") return cfg.backbone;
    if (key == "input_size") return std::to_string(cfg.input_size);
    if (key == "stage1.lr") return std::to_string(cfg.stage1.lr);
    if (key == "stage1.epochs") return std::to_string(cfg.stage1.epochs);
    if (key == "stage1.batch_size") return std::to_string(cfg.stage1.batch_size);
    if (key == "stage2.lr") return std::to_string(cfg.stage2.lr);
    if (key == "stage2.epochs") return std::to_string(cfg.stage2.epochs);
    if (key == "stage2.batch_size") return std::to_string(cfg.stage2.batch_size);
    if (key == "lambda") return cfg.lambda.describe();
    return "";
}

}  // namespace

void finalize(RunConfig& cfg) {
    // Desk-scale CAM/affinity geometry: the stock scales and dilations are
    // sized for 256 px inputs; at the tiny preset's 64 px they are rescaled
    // so the feature grids and affinity reach cover the same image fraction.
    if (cfg.preset == "tiny") {
        if (!cfg.touched.count("scales")) cfg.scales = {2.0, 3.0, 4.0, 5.0};
        if (!cfg.touched.count("affinity.dilations")) cfg.affinity.dilations = {1, 2, 3, 6};
    }
    if (cfg.preset == "paper") {
        RunConfig reference;
        for (const auto& lock : paper_locks()) set_key(reference, lock.key, lock.value);
        for (const auto& lock : paper_locks()) {
            if (cfg.touched.count(lock.key) &&
                current_value(cfg, lock.key) != current_value(reference, lock.key))
                fail_config(std::string("config: '") + lock.key +
                            "' is locked by --preset paper and cannot be overridden");
        }
        for (const auto& lock : paper_locks()) set_key(cfg, lock.key, lock.value);
        cfg.touched.erase("backbone");  // locks are not user overrides
    }
    require_config(cfg.input_size >= 16, "config: input_size must be >= 16");
    require_config(cfg.stage1.epochs >= 1 && cfg.stage2.epochs >= 1, "config: epochs must be >= 1");
    require_config(cfg.stage1.batch_size >= 1 && cfg.stage2.batch_size >= 1,
                   "config: batch_size must be >= 1");
    require_config(cfg.stage1.lr > 0 && cfg.stage2.lr > 0, "config: learning rates must be positive");
    require_config(cfg.binarize_threshold > 0.0 && cfg.binarize_threshold < 1.0,
                   "config: binarize_threshold must be in (0,1)");
    require_config(!cfg.scales.empty(), "config: scales must be non-empty");
    for (double s : cfg.scales) require_config(s > 0.0, "config: scales must be positive");
    refine::validate(cfg.affinity);
    require_config(nn::backbone_is_known(cfg.backbone), "config: unknown backbone " + cfg.backbone);
    cfg.synthetic.seed = cfg.seed;
}

std::string to_json(const RunConfig& cfg) {
    json j;
    j["preset"] = cfg.preset;
    j["seed"] = cfg.seed;
    j["data_root"] = cfg.data_root;
    j["train_manifest"] = cfg.resolved_train_manifest();
    j["test_manifest"] = cfg.resolved_test_manifest();
    j["store_dir"] = cfg.store_dir;
    j["checkpoint_dir"] = cfg.checkpoint_dir;
    j["report_dir"] = cfg.report_dir;
    j["pred_dir"] = cfg.pred_dir;
    j["export_dir"] = cfg.export_dir;
    j["gt_dir"] = cfg.gt_dir;
    j["backbone"] = cfg.backbone;
    j["optimizer"] = "adam";
    j["input_size"] = cfg.input_size;
    j["stage1"] = {{"lr", cfg.stage1.lr}, {"epochs", cfg.stage1.epochs},
                   {"batch_size", cfg.stage1.batch_size}};
    j["stage2"] = {{"lr", cfg.stage2.lr}, {"epochs", cfg.stage2.epochs},
                   {"batch_size", cfg.stage2.batch_size}};
    j["lambda"] = cfg.lambda.describe();
    j["binarize_threshold"] = cfg.binarize_threshold;
    j["scales"] = cfg.scales;
    j["affinity"] = {{"iterations", cfg.affinity.iterations}, {"dilations", cfg.affinity.dilations}};
    j["metric_protocol"] = metrics::protocol_name(cfg.protocol);
    j["crf"] = cfg.crf;
    j["resume"] = cfg.resume;
    j["eval_during_training"] = cfg.eval_during_training;
    j["synthetic"] = {{"num_images", cfg.synthetic.num_images},
                      {"image_size", cfg.synthetic.image_size},
                      {"num_categories", cfg.synthetic.num_categories},
                      {"background",
                       cfg.synthetic.background == data::SyntheticConfig::Background::plain
                           ? "plain"
                           : "textured"},
                      {"test_images", cfg.synthetic_test_images},
                      {"seed", cfg.synthetic.seed}};
    return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) { return Sha256::of_string(to_json(cfg)); }

}  // namespace wsod::config
