#pragma once

#include "config/run_config.hpp"
#include "metrics/evaluate.hpp"

namespace wsod::runner {

// Subcommand entry points shared by the C API and the CLI. Each acquires a
// lock on its output directory and writes resolved_config.json plus
// run_meta.json (config hash, seed, manifest content hash) next to its
// outputs. All are deterministic for a fixed config and seed.
void run_gen_synthetic(const config::RunConfig& cfg);
void run_train_cls(const config::RunConfig& cfg);
void run_gen_pseudo(const config::RunConfig& cfg);
void run_train_sal(const config::RunConfig& cfg);
void run_infer(const config::RunConfig& cfg);
metrics::MetricReport run_eval(const config::RunConfig& cfg);
void run_export_labels(const config::RunConfig& cfg);
void run_report(const config::RunConfig& cfg);

}  // namespace wsod::runner
