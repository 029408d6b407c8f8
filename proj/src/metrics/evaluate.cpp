#include "metrics/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include "core/errors.hpp"
#include "core/fsutil.hpp"
#include "core/parallel.hpp"
#include "data/image_io.hpp"

namespace fs = std::filesystem;

namespace wsod::metrics {

namespace {

MetricReport evaluate_pairs(const std::vector<std::pair<std::string, std::string>>& pairs,
                            const std::vector<std::string>& ids, FProtocol protocol) {
    MetricReport report;
    report.protocol = protocol;
    const int n = static_cast<int>(pairs.size());
    report.per_image.resize(n);

    parallel_chunks(n, n, [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            Map2D gt = data::load_map(pairs[i].second);
            Map2D pred = data::load_map(pairs[i].first);
            if (!pred.same_shape(gt)) pred = resize_bilinear(pred, gt.h, gt.w);
            MetricReport::Row& row = report.per_image[i];
            row.id = ids[i];
            row.s = s_measure(pred, gt);
            row.e = e_measure(pred, gt);
            row.f = f_measure(pred, gt, 0.3, protocol);
            row.mae = mae(pred, gt);
        }
    });

    for (const auto& row : report.per_image) {
        report.mean_s += row.s;
        report.mean_e += row.e;
        report.mean_f += row.f;
        report.mean_mae += row.mae;
    }
    report.mean_s /= n;
    report.mean_e /= n;
    report.mean_f /= n;
    report.mean_mae /= n;
    return report;
}

}  // namespace

MetricReport evaluate_dataset(const std::string& pred_dir, const std::string& gt_dir,
                              FProtocol protocol) {
    require_config(fs::is_directory(pred_dir), "eval: prediction directory not found: " + pred_dir);
    require_config(fs::is_directory(gt_dir), "eval: ground-truth directory not found: " + gt_dir);

    auto pred_stems = list_png_stems(pred_dir);
    auto gt_stems = list_png_stems(gt_dir);
    std::set<std::string> preds(pred_stems.begin(), pred_stems.end());
    std::set<std::string> gts(gt_stems.begin(), gt_stems.end());

    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::string> ids;
    MetricReport partial;
    for (const auto& s : gt_stems) {
        if (preds.count(s)) {
            pairs.emplace_back(join_path(pred_dir, s + ".png"), join_path(gt_dir, s + ".png"));
            ids.push_back(s);
        } else {
            partial.missing_predictions.push_back(s);
        }
    }
    for (const auto& s : pred_stems)
        if (!gts.count(s)) partial.missing_ground_truths.push_back(s);

    require_runtime(!pairs.empty(), "eval: no matching prediction/ground-truth pairs");
    MetricReport report = evaluate_pairs(pairs, ids, protocol);
    report.missing_predictions = std::move(partial.missing_predictions);
    report.missing_ground_truths = std::move(partial.missing_ground_truths);
    return report;
}

MetricReport evaluate_manifest(const std::string& pred_dir, const data::DatasetManifest& manifest,
                               FProtocol protocol) {
    require_config(fs::is_directory(pred_dir), "eval: prediction directory not found: " + pred_dir);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::string> ids;
    MetricReport partial;
    for (const auto& e : manifest.entries) {
        if (!e.label_path) continue;
        std::string stem = fs::path(e.image_path).stem().string();
        std::string pred_path = join_path(pred_dir, stem + ".png");
        if (fs::exists(pred_path)) {
            pairs.emplace_back(pred_path, manifest.resolve(*e.label_path));
            ids.push_back(stem);
        } else {
            partial.missing_predictions.push_back(stem);
        }
    }
    require_runtime(!pairs.empty(), "eval: no matching prediction/ground-truth pairs");
    MetricReport report = evaluate_pairs(pairs, ids, protocol);
    report.missing_predictions = std::move(partial.missing_predictions);
    return report;
}

const char* protocol_name(FProtocol protocol) {
    return protocol == FProtocol::max_over_thresholds ? "max_over_thresholds" : "adaptive";
}

void write_report_csv(const MetricReport& report, const std::string& path) {
    std::ostringstream out;
    out << "# f_protocol=" << protocol_name(report.protocol) << "\n";
    out << "id,s_measure,e_measure,f_measure,mae\n";
    char buf[160];
    for (const auto& row : report.per_image) {
        std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f,%.4f,%.4f\n", row.id.c_str(), row.s, row.e,
                      row.f, row.mae);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "MEAN,%.4f,%.4f,%.4f,%.4f\n", report.mean_s, report.mean_e,
                  report.mean_f, report.mean_mae);
    out << buf;
    write_text_file(path, out.str());
}

std::string format_summary(const MetricReport& report) {
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "images: %zu  S: %.3f  E: %.3f  F(%s): %.3f  MAE: %.3f",
                  report.per_image.size(), report.mean_s, report.mean_e,
                  protocol_name(report.protocol), report.mean_f, report.mean_mae);
    return std::string(buf);
}

}  // namespace wsod::metrics
