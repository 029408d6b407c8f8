#pragma once

#include <string>
#include <vector>

#include "data/manifest.hpp"
#include "metrics/metrics.hpp"

namespace wsod::metrics {

struct MetricReport {
    struct Row {
        std::string id;
        double s = 0.0, e = 0.0, f = 0.0, mae = 0.0;
    };
    std::vector<Row> per_image;
    double mean_s = 0.0, mean_e = 0.0, mean_f = 0.0, mean_mae = 0.0;
    FProtocol protocol = FProtocol::max_over_thresholds;
    std::vector<std::string> missing_predictions;
    std::vector<std::string> missing_ground_truths;
};

// Pairs predictions and ground truths by file stem. Predictions are
// bilinearly resized to the ground truth's native resolution. Aborts when no
// pair matches; unmatched stems are listed in the report.
MetricReport evaluate_dataset(const std::string& pred_dir, const std::string& gt_dir,
                              FProtocol protocol);

// Same pairing via a manifest's label_path column.
MetricReport evaluate_manifest(const std::string& pred_dir, const data::DatasetManifest& manifest,
                               FProtocol protocol);

// CSV: `id,s_measure,e_measure,f_measure,mae` rows at 4 decimals plus a final
// MEAN row; the F protocol is recorded in a leading comment line.
void write_report_csv(const MetricReport& report, const std::string& path);

// Human-readable summary, Table-style 3-decimal rounding.
std::string format_summary(const MetricReport& report);

const char* protocol_name(FProtocol protocol);

}  // namespace wsod::metrics
