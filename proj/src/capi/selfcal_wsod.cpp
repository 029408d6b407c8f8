#include "selfcal_wsod.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "config/run_config.hpp"
#include "core/errors.hpp"
#include "metrics/evaluate.hpp"
#include "refine/crf.hpp"
#include "runner/runner.hpp"

using wsod::Error;
using wsod::ErrorKind;

struct sw_config {
    wsod::config::RunConfig cfg;
    bool finalized = false;
};

struct sw_report {
    wsod::metrics::MetricReport report;
};

namespace {

thread_local std::string t_last_error;

int set_error(const Error& e) {
    t_last_error = e.what();
    return e.kind() == ErrorKind::config ? SW_ERR_CONFIG : SW_ERR_RUNTIME;
}

int set_error(const std::exception& e) {
    t_last_error = e.what();
    return SW_ERR_RUNTIME;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return SW_OK;
    } catch (const Error& e) {
        return set_error(e);
    } catch (const std::exception& e) {
        return set_error(e);
    } catch (...) {
        t_last_error = "unknown error";
        return SW_ERR_RUNTIME;
    }
}

int require_handle(const void* handle, const char* what) {
    if (handle) return SW_OK;
    t_last_error = std::string("null ") + what + " handle";
    return SW_ERR_CONFIG;
}

const wsod::config::RunConfig& resolved(const sw_config* cfg) {
    if (!cfg->finalized) wsod::fail_config("config was not finalized; call sw_config_finalize");
    return cfg->cfg;
}

}  // namespace

extern "C" {

const char* sw_version(void) { return "1.0.0"; }

const char* sw_last_error(void) { return t_last_error.c_str(); }

sw_config* sw_config_new(void) { return new sw_config(); }

void sw_config_free(sw_config* cfg) { delete cfg; }

int sw_config_load_file(sw_config* cfg, const char* path) {
    if (int rc = require_handle(cfg, "config")) return rc;
    if (int rc = require_handle(path, "path")) return rc;
    return guarded([&] {
        wsod::config::load_config_file(cfg->cfg, path);
        cfg->finalized = false;
    });
}

int sw_config_set(sw_config* cfg, const char* key, const char* value) {
    if (int rc = require_handle(cfg, "config")) return rc;
    if (int rc = require_handle(key, "key")) return rc;
    if (int rc = require_handle(value, "value")) return rc;
    return guarded([&] {
        wsod::config::set_key(cfg->cfg, key, value);
        cfg->finalized = false;
    });
}

int sw_config_finalize(sw_config* cfg) {
    if (int rc = require_handle(cfg, "config")) return rc;
    return guarded([&] {
        wsod::config::finalize(cfg->cfg);
        cfg->finalized = true;
    });
}

char* sw_config_to_json(const sw_config* cfg) {
    if (!cfg) return nullptr;
    std::string json = wsod::config::to_json(cfg->cfg);
    char* out = static_cast<char*>(std::malloc(json.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, json.c_str(), json.size() + 1);
    return out;
}

void sw_string_free(char* s) { std::free(s); }

int sw_run_gen_synthetic(const sw_config* cfg) {
    if (int rc = require_handle(cfg, "config")) return rc;
    return guarded([&] { wsod::runner::run_gen_synthetic(resolved(cfg)); });
}

int sw_run_train_classifier(const sw_config* cfg) {
    if (int rc = require_handle(cfg, "config")) return rc;
    return guarded([&] { wsod::runner::run_train_cls(resolved(cfg)); });
}

int sw_run_gen_pseudo(const sw_config* cfg) {
    if (int rc = require_handle(cfg, "config")) return rc;
    return guarded([&] { wsod::runner::run_gen_pseudo(resolved(cfg)); });
}

int sw_run_train_saliency(const sw_config* cfg) {
    if (int rc = require_handle(cfg, "config")) return rc;
    return guarded([&] { wsod::runner::run_train_sal(resolved(cfg)); });
}

int sw_run_infer(const sw_config* cfg) {
    if (int rc = require_handle(cfg, "config")) return rc;
    return guarded([&] { wsod::runner::run_infer(resolved(cfg)); });
}

int sw_run_export_labels(const sw_config* cfg) {
    if (int rc = require_handle(cfg, "config")) return rc;
    return guarded([&] { wsod::runner::run_export_labels(resolved(cfg)); });
}

int sw_run_report(const sw_config* cfg) {
    if (int rc = require_handle(cfg, "config")) return rc;
    return guarded([&] { wsod::runner::run_report(resolved(cfg)); });
}

int sw_run_eval(const sw_config* cfg, sw_report** out_report) {
    if (int rc = require_handle(cfg, "config")) return rc;
    if (int rc = require_handle(out_report, "report out-pointer")) return rc;
    *out_report = nullptr;
    return guarded([&] {
        auto report = wsod::runner::run_eval(resolved(cfg));
        *out_report = new sw_report{std::move(report)};
    });
}

int sw_report_image_count(const sw_report* report) {
    return report ? static_cast<int>(report->report.per_image.size()) : -1;
}

int sw_report_image_metrics(const sw_report* report, int index, char* id_buf, size_t id_buf_len,
                            double values[4]) {
    if (int rc = require_handle(report, "report")) return rc;
    if (index < 0 || index >= static_cast<int>(report->report.per_image.size())) {
        t_last_error = "report index out of range";
        return SW_ERR_CONFIG;
    }
    const auto& row = report->report.per_image[index];
    if (id_buf && id_buf_len > 0) {
        std::strncpy(id_buf, row.id.c_str(), id_buf_len - 1);
        id_buf[id_buf_len - 1] = '\0';
    }
    if (values) {
        values[0] = row.s;
        values[1] = row.e;
        values[2] = row.f;
        values[3] = row.mae;
    }
    return SW_OK;
}

int sw_report_means(const sw_report* report, double values[4]) {
    if (int rc = require_handle(report, "report")) return rc;
    if (int rc = require_handle(values, "values")) return rc;
    values[0] = report->report.mean_s;
    values[1] = report->report.mean_e;
    values[2] = report->report.mean_f;
    values[3] = report->report.mean_mae;
    return SW_OK;
}

void sw_report_free(sw_report* report) { delete report; }

int sw_crf_set_plugin(sw_crf_plugin_fn fn, void* user) {
    return guarded([&] {
        if (!fn) {
            wsod::refine::set_crf_plugin(nullptr);
            return;
        }
        wsod::refine::set_crf_plugin(
            [fn, user](const wsod::Map2D& mask, const wsod::Tensor3& image,
                       const wsod::refine::CrfParams&, wsod::Map2D& out) {
                out = wsod::Map2D(mask.h, mask.w);
                return fn(mask.v.data(), image.v.data(), mask.h, mask.w, out.v.data(), user) != 0;
            });
    });
}

}  // extern "C"
