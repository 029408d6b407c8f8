// selfcal-wsod: operator CLI for the two-stage weakly-supervised saliency
// pipeline. Talks to the core exclusively through the shared library's C API.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selfcal_wsod.h"

namespace {

struct CommonArgs {
    std::string config_file;
    std::string preset;
    int seed = -1;
    std::string lambda;
    bool no_crf = false;
    int size = 0;
    std::vector<std::string> overrides;  // key=value
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_file, "JSON config file");
    cmd->add_option("--preset", args.preset, "preset: tiny | paper")
        ->check(CLI::IsMember({"tiny", "paper"}));
    cmd->add_option("--seed", args.seed, "run seed");
    cmd->add_option("--lambda", args.lambda, "blend weight: fixed[:V] | scheduled[:E] | capped[:V]");
    cmd->add_flag("--no-crf", args.no_crf, "disable CRF refinement even if a plugin is present");
    cmd->add_option("--size", args.size, "input resolution (square)");
    cmd->add_option("--set", args.overrides, "extra config override key=value")
        ->type_name("KEY=VALUE");
}

int fail(int rc) {
    std::fprintf(stderr, "error: %s\n", sw_last_error());
    return rc;
}

int apply_common(sw_config* cfg, const CommonArgs& args) {
    if (!args.config_file.empty())
        if (int rc = sw_config_load_file(cfg, args.config_file.c_str())) return rc;
    if (!args.preset.empty())
        if (int rc = sw_config_set(cfg, "preset", args.preset.c_str())) return rc;
    if (args.seed >= 0)
        if (int rc = sw_config_set(cfg, "seed", std::to_string(args.seed).c_str())) return rc;
    if (!args.lambda.empty())
        if (int rc = sw_config_set(cfg, "lambda", args.lambda.c_str())) return rc;
    if (args.no_crf)
        if (int rc = sw_config_set(cfg, "crf", "false")) return rc;
    if (args.size > 0)
        if (int rc = sw_config_set(cfg, "input_size", std::to_string(args.size).c_str())) return rc;
    for (const auto& kv : args.overrides) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects KEY=VALUE, got '%s'\n", kv.c_str());
            return SW_ERR_CONFIG;
        }
        if (int rc = sw_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()))
            return rc;
    }
    return sw_config_finalize(cfg);
}

struct ConfigGuard {
    sw_config* cfg = sw_config_new();
    ~ConfigGuard() { sw_config_free(cfg); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"self-calibrated weakly-supervised salient object detection"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sw_version()));

    struct Sub {
        CLI::App* cmd;
        CommonArgs args;
        int (*run)(const sw_config*);
    };

    std::vector<Sub> subs;
    subs.reserve(8);  // CLI11 keeps pointers into args; no reallocation allowed
    auto add_sub = [&](const char* name, const char* desc, int (*run)(const sw_config*)) -> Sub& {
        subs.push_back({app.add_subcommand(name, desc), {}, run});
        add_common(subs.back().cmd, subs.back().args);
        return subs.back();
    };

    add_sub("gen-synthetic", "generate the seeded synthetic shapes dataset", sw_run_gen_synthetic);
    add_sub("train-cls", "stage 1: train the classification network", sw_run_train_classifier);
    add_sub("gen-pseudo", "stage 1: generate pseudo labels from CAMs", sw_run_gen_pseudo);
    add_sub("train-sal", "stage 2: train the saliency network (self-calibrated)",
            sw_run_train_saliency);
    add_sub("infer", "predict saliency maps, no post-processing", sw_run_infer);
    add_sub("export-labels", "export refined training-set predictions as labels",
            sw_run_export_labels);
    add_sub("report", "render static CSV/PNG reports from run logs", sw_run_report);

    // eval needs the report accessors, handled separately below
    Sub& eval_sub = add_sub("eval", "evaluate predictions: S/E/F/MAE", nullptr);
    std::string eval_pred, eval_gt;
    eval_sub.cmd->add_option("--pred", eval_pred, "prediction directory");
    eval_sub.cmd->add_option("--gt", eval_gt, "ground-truth directory");

    // report conveniences
    CLI::App* report_cmd = subs[6].cmd;
    std::vector<std::string> report_runs;
    std::string report_store;
    report_cmd->add_option("--run", report_runs, "training log CSV (repeat for comparison)");
    report_cmd->add_option("--labels", report_store, "label store with epoch snapshots");

    CLI11_PARSE(app, argc, argv);

    for (auto& sub : subs) {
        if (!sub.cmd->parsed()) continue;

        ConfigGuard guard;
        if (sub.cmd == report_cmd) {
            std::string joined;
            for (const auto& r : report_runs) {
                if (!joined.empty()) joined += ",";
                joined += r;
            }
            if (!joined.empty())
                if (int rc = sw_config_set(guard.cfg, "report.runs", joined.c_str()))
                    return fail(rc);
            if (!report_store.empty())
                if (int rc = sw_config_set(guard.cfg, "report.label_store", report_store.c_str()))
                    return fail(rc);
        }
        if (sub.cmd == eval_sub.cmd) {
            if (!eval_pred.empty())
                if (int rc = sw_config_set(guard.cfg, "pred_dir", eval_pred.c_str()))
                    return fail(rc);
            if (!eval_gt.empty())
                if (int rc = sw_config_set(guard.cfg, "gt_dir", eval_gt.c_str())) return fail(rc);
        }

        if (int rc = apply_common(guard.cfg, sub.args)) return fail(rc);

        if (sub.cmd == eval_sub.cmd) {
            sw_report* report = nullptr;
            if (int rc = sw_run_eval(guard.cfg, &report)) return fail(rc);
            sw_report_free(report);
            return SW_OK;
        }
        if (int rc = sub.run(guard.cfg)) return fail(rc);
        return SW_OK;
    }
    return SW_ERR_CONFIG;
}
