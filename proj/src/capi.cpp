#include "vofd/vofd.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/experiment.hpp"
#include "core/image.hpp"
#include "core/metrics.hpp"
#include "core/noise.hpp"
#include "core/solver.hpp"

struct vofd_image {
  vofd::Image img;
};

struct vofd_config {
  vofd::ExperimentConfig cfg;
};

struct vofd_report {
  vofd::RunReport report;
  vofd::Summary summary;
  vofd_image restored;  // borrowed view handed out by vofd_report_image
};

namespace {

thread_local std::string t_last_error;

void set_error(const std::string& msg) { t_last_error = msg; }

vofd_status fail(vofd_status status, const std::string& msg) {
  set_error(msg);
  return status;
}

vofd_status translate_current_exception() {
  try {
    throw;
  } catch (const vofd::IoError& e) {
    return fail(VOFD_ERR_IO, e.what());
  } catch (const vofd::FormatError& e) {
    return fail(VOFD_ERR_FORMAT, e.what());
  } catch (const vofd::ConfigError& e) {
    return fail(VOFD_ERR_CONFIG, e.what());
  } catch (const vofd::DimensionError& e) {
    return fail(VOFD_ERR_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VOFD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VOFD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(VOFD_ERR_INTERNAL, "unknown error");
  }
}

vofd_status require(bool ok, const char* msg) {
  return ok ? VOFD_OK : fail(VOFD_ERR_INVALID, msg);
}

void fill_summary(const vofd::Summary& s, vofd_summary* out) {
  std::memset(out, 0, sizeof(*out));
  std::snprintf(out->image, sizeof(out->image), "%s", s.image.c_str());
  std::snprintf(out->model, sizeof(out->model), "%s", s.model.c_str());
  out->looks = s.looks;
  out->psnr_noisy = s.psnr_noisy;
  out->psnr_best = s.psnr_best;
  out->ssim_noisy = s.ssim_noisy;
  out->ssim_best = s.ssim_best;
  out->iterations = s.iterations;
  out->best_iteration = s.best_iteration;
  out->wall_ms = s.wall_ms;
  std::snprintf(out->stop_reason, sizeof(out->stop_reason), "%s",
                s.stop_reason.c_str());
}

}  // namespace

extern "C" {

const char* vofd_version(void) { return "0.1.0"; }

const char* vofd_last_error(void) { return t_last_error.c_str(); }

const char* vofd_status_name(vofd_status status) {
  switch (status) {
    case VOFD_OK: return "ok";
    case VOFD_ERR_IO: return "io_error";
    case VOFD_ERR_FORMAT: return "format_error";
    case VOFD_ERR_CONFIG: return "config_error";
    case VOFD_ERR_INVALID: return "invalid_argument";
    case VOFD_ERR_INTERNAL: return "internal_error";
  }
  return "?";
}

void vofd_string_free(char* s) { delete[] s; }

vofd_status vofd_image_create(int width, int height, const double* data,
                              vofd_image** out) {
  if (auto st = require(out != nullptr, "vofd_image_create: out is null")) return st;
  *out = nullptr;
  try {
    auto handle = std::make_unique<vofd_image>();
    handle->img = vofd::Image(width, height, 0.0);  // validates dimensions
    if (data)
      std::copy(data, data + handle->img.size(), handle->img.data());
    *out = handle.release();
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

vofd_status vofd_image_load(const char* path, vofd_image** out) {
  if (auto st = require(path && out, "vofd_image_load: null argument")) return st;
  *out = nullptr;
  try {
    auto handle = std::make_unique<vofd_image>();
    handle->img = vofd::load_image(path);
    *out = handle.release();
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

vofd_status vofd_image_save(const vofd_image* img, const char* path) {
  if (auto st = require(img && path, "vofd_image_save: null argument")) return st;
  try {
    vofd::save_image(img->img, path);
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vofd_image_width(const vofd_image* img) { return img ? img->img.width() : 0; }
int vofd_image_height(const vofd_image* img) { return img ? img->img.height() : 0; }

const double* vofd_image_data(const vofd_image* img) {
  return img ? img->img.data() : nullptr;
}

double vofd_image_mean(const vofd_image* img) {
  return img && !img->img.empty() ? vofd::mean(img->img) : 0.0;
}

void vofd_image_free(vofd_image* img) { delete img; }

vofd_status vofd_gamma_noise_field(int width, int height, int looks,
                                   uint64_t seed, vofd_image** out) {
  if (auto st = require(out != nullptr, "vofd_gamma_noise_field: out is null"))
    return st;
  *out = nullptr;
  try {
    auto handle = std::make_unique<vofd_image>();
    handle->img = vofd::gamma_noise_field(width, height, vofd::NoiseSpec{looks, seed});
    *out = handle.release();
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

vofd_status vofd_apply_multiplicative(const vofd_image* img,
                                      const vofd_image* noise,
                                      vofd_image** out) {
  if (auto st = require(img && noise && out, "vofd_apply_multiplicative: null argument"))
    return st;
  *out = nullptr;
  try {
    auto handle = std::make_unique<vofd_image>();
    handle->img = vofd::apply_multiplicative(img->img, noise->img);
    *out = handle.release();
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

vofd_status vofd_psnr(const vofd_image* img, const vofd_image* reference,
                      double* out_db) {
  if (auto st = require(img && reference && out_db, "vofd_psnr: null argument"))
    return st;
  try {
    *out_db = vofd::psnr(img->img, reference->img);
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

vofd_status vofd_ssim(const vofd_image* img, const vofd_image* reference,
                      double* out) {
  if (auto st = require(img && reference && out, "vofd_ssim: null argument"))
    return st;
  try {
    *out = vofd::ssim(img->img, reference->img);
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

vofd_status vofd_config_create(vofd_config** out) {
  if (auto st = require(out != nullptr, "vofd_config_create: out is null")) return st;
  *out = new (std::nothrow) vofd_config();
  return *out ? VOFD_OK : fail(VOFD_ERR_INTERNAL, "out of memory");
}

vofd_status vofd_config_parse(vofd_config* cfg, const char* text) {
  if (auto st = require(cfg && text, "vofd_config_parse: null argument")) return st;
  try {
    cfg->cfg = vofd::ExperimentConfig::parse(text);
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

vofd_status vofd_config_load(vofd_config* cfg, const char* path) {
  if (auto st = require(cfg && path, "vofd_config_load: null argument")) return st;
  try {
    cfg->cfg = vofd::ExperimentConfig::load(path);
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

vofd_status vofd_config_set(vofd_config* cfg, const char* key, const char* value) {
  if (auto st = require(cfg && key && value, "vofd_config_set: null argument"))
    return st;
  try {
    cfg->cfg.set(key, value);
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

vofd_status vofd_config_get(const vofd_config* cfg, const char* key, char* buf,
                            size_t cap) {
  if (auto st = require(cfg && key && buf && cap > 0, "vofd_config_get: null argument"))
    return st;
  try {
    const std::string value = cfg->cfg.get(key);
    std::snprintf(buf, cap, "%s", value.c_str());
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

vofd_status vofd_config_format(const vofd_config* cfg, char** out) {
  if (auto st = require(cfg && out, "vofd_config_format: null argument")) return st;
  *out = nullptr;
  try {
    const std::string text = cfg->cfg.serialize();
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

void vofd_config_free(vofd_config* cfg) { delete cfg; }

vofd_status vofd_run_experiment(const vofd_config* cfg, vofd_report** out) {
  if (auto st = require(cfg && out, "vofd_run_experiment: null argument")) return st;
  *out = nullptr;
  try {
    auto handle = std::make_unique<vofd_report>();
    handle->summary = vofd::run_experiment(cfg->cfg, &handle->report);
    handle->restored.img = handle->report.restored;
    *out = handle.release();
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

int vofd_report_iterations(const vofd_report* report) {
  return report ? report->report.stopped_at : 0;
}

vofd_status vofd_report_series(const vofd_report* report, vofd_series series,
                               int iteration, double* out) {
  if (auto st = require(report && out, "vofd_report_series: null argument")) return st;
  const auto& records = report->report.records;
  if (iteration < 0 || static_cast<std::size_t>(iteration) >= records.size())
    return fail(VOFD_ERR_INVALID, "vofd_report_series: iteration out of range");
  const auto& rec = records[iteration];
  switch (series) {
    case VOFD_SERIES_PSNR: *out = rec.psnr; return VOFD_OK;
    case VOFD_SERIES_SSIM: *out = rec.ssim; return VOFD_OK;
    case VOFD_SERIES_MASS: *out = rec.mass; return VOFD_OK;
    case VOFD_SERIES_MIN: *out = rec.min; return VOFD_OK;
    case VOFD_SERIES_MAX: *out = rec.max; return VOFD_OK;
    case VOFD_SERIES_ENERGY: *out = rec.energy; return VOFD_OK;
  }
  return fail(VOFD_ERR_INVALID, "vofd_report_series: unknown series");
}

const vofd_image* vofd_report_image(const vofd_report* report) {
  return report ? &report->restored : nullptr;
}

vofd_status vofd_report_summary(const vofd_report* report, vofd_summary* out) {
  if (auto st = require(report && out, "vofd_report_summary: null argument"))
    return st;
  fill_summary(report->summary, out);
  return VOFD_OK;
}

void vofd_report_free(vofd_report* report) { delete report; }

vofd_status vofd_run_suite(const vofd_config* const* configs, size_t count,
                           const char* csv_path, int jobs,
                           vofd_summary* out_summaries,
                           vofd_status* out_statuses) {
  if (auto st = require(configs && csv_path, "vofd_run_suite: null argument"))
    return st;
  try {
    std::vector<vofd::ExperimentConfig> cfgs;
    cfgs.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!configs[i]) return fail(VOFD_ERR_INVALID, "vofd_run_suite: null config");
      cfgs.push_back(configs[i]->cfg);
    }
    const vofd::SuiteResult result = vofd::run_suite(cfgs, csv_path, jobs);

    // Map summaries (successes only, in input order) back onto slots.
    std::size_t success = 0;
    bool any_failed = false;
    std::string first_error;
    for (size_t i = 0; i < count; ++i) {
      const bool ok = result.errors[i].empty();
      if (out_statuses) out_statuses[i] = ok ? VOFD_OK : VOFD_ERR_INTERNAL;
      if (ok) {
        if (out_summaries) fill_summary(result.summaries[success], &out_summaries[i]);
        ++success;
      } else {
        if (out_summaries) std::memset(&out_summaries[i], 0, sizeof(vofd_summary));
        if (out_summaries)
          std::snprintf(out_summaries[i].stop_reason,
                        sizeof(out_summaries[i].stop_reason), "failed");
        if (!any_failed) first_error = result.errors[i];
        any_failed = true;
      }
    }
    if (any_failed)
      return fail(VOFD_ERR_INTERNAL, "suite: one or more runs failed: " + first_error);
    return VOFD_OK;
  } catch (...) {
    return translate_current_exception();
  }
}

}  // extern "C"
