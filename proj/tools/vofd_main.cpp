// vofd command line tool. Talks to the library exclusively through the
// public C API in vofd/vofd.h.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vofd/vofd.h"

namespace {

struct ConfigHandle {
  vofd_config* cfg = nullptr;
  ~ConfigHandle() { vofd_config_free(cfg); }
};

struct ImageHandle {
  vofd_image* img = nullptr;
  ~ImageHandle() { vofd_image_free(img); }
};

struct ReportHandle {
  vofd_report* report = nullptr;
  ~ReportHandle() { vofd_report_free(report); }
};

[[noreturn]] void die(vofd_status status) {
  std::fprintf(stderr, "vofd: %s: %s\n", vofd_status_name(status), vofd_last_error());
  std::exit(status == VOFD_ERR_CONFIG || status == VOFD_ERR_INVALID ? 2 : 1);
}

void check(vofd_status status) {
  if (status != VOFD_OK) die(status);
}

// "--key=value" or "key=value" leftovers become config assignments, so every
// config key doubles as a command line option.
void apply_overrides(vofd_config* cfg, const std::vector<std::string>& extras,
                     const std::vector<std::string>& sets) {
  auto assign = [&](const std::string& spec, const char* what) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "vofd: %s '%s' is not of the form key=value\n", what,
                   spec.c_str());
      std::exit(2);
    }
    std::string key = spec.substr(0, eq);
    while (key.size() >= 1 && key[0] == '-') key.erase(0, 1);
    check(vofd_config_set(cfg, key.c_str(), spec.substr(eq + 1).c_str()));
  };
  for (const auto& s : sets) assign(s, "--set argument");
  for (const auto& s : extras) assign(s, "argument");
}

std::string metric_str(double v) {
  if (std::isnan(v)) return "n/a";
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

void print_summary(const vofd_summary& s) {
  std::printf("image=%s model=%s L=%d psnr_noisy=%s psnr_best=%s ssim_best=%s "
              "iters=%d best_iter=%d stop=%s wall_ms=%.1f\n",
              s.image, s.model, s.looks, metric_str(s.psnr_noisy).c_str(),
              metric_str(s.psnr_best).c_str(), metric_str(s.ssim_best).c_str(),
              s.iterations, s.best_iteration, s.stop_reason, s.wall_ms);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vofd - variable-order fractional diffusion speckle denoiser"};
  app.require_subcommand(1);

  // ---- denoise ----
  auto* denoise = app.add_subcommand("denoise", "Run one denoising experiment");
  std::string dn_config, dn_input, dn_reference, dn_output_dir, dn_model;
  std::vector<std::string> dn_sets;
  denoise->add_option("config", dn_config, "Config file (key = value lines)");
  denoise->add_option("--input", dn_input, "Input image (PGM or grayscale PNG)");
  denoise->add_option("--reference", dn_reference, "Ground-truth image");
  denoise->add_option("--output-dir", dn_output_dir, "Artifact directory");
  denoise->add_option("--model", dn_model, "vo_f1l | vo_fpl | f1p_aa | aa");
  denoise->add_option("--set", dn_sets, "Config override key=value (repeatable)");
  denoise->allow_extras();

  // ---- suite ----
  auto* suite = app.add_subcommand("suite", "Run a batch of experiments");
  std::vector<std::string> suite_configs;
  std::string suite_out = "suite.csv";
  int suite_jobs = 1;
  std::vector<std::string> suite_sets;
  suite->add_option("configs", suite_configs, "Config files, one experiment each")
      ->required();
  suite->add_option("--out", suite_out, "Aggregate CSV path");
  suite->add_option("--jobs", suite_jobs, "Concurrent experiments");
  suite->add_option("--set", suite_sets, "Override applied to every config");
  suite->allow_extras();

  // ---- noise ----
  auto* noise = app.add_subcommand("noise", "Synthesize multiplicative Gamma noise");
  std::string nz_input, nz_output;
  int nz_looks = 4;
  std::uint64_t nz_seed = 42;
  noise->add_option("--input", nz_input, "Clean image")->required();
  noise->add_option("--output", nz_output, "Noisy image path")->required();
  noise->add_option("--looks", nz_looks, "Gamma looks L (variance 1/L)");
  noise->add_option("--seed", nz_seed, "PRNG seed");

  // ---- metrics ----
  auto* metrics = app.add_subcommand("metrics", "PSNR and SSIM between two images");
  std::string mt_image, mt_reference;
  metrics->add_option("--image", mt_image, "Image under test")->required();
  metrics->add_option("--reference", mt_reference, "Reference image")->required();

  // ---- config ----
  auto* config_cmd =
      app.add_subcommand("config", "Print the default config (redirect to a file)");

  CLI11_PARSE(app, argc, argv);

  if (denoise->parsed()) {
    ConfigHandle cfg;
    check(vofd_config_create(&cfg.cfg));
    if (!dn_config.empty()) check(vofd_config_load(cfg.cfg, dn_config.c_str()));
    if (!dn_input.empty()) check(vofd_config_set(cfg.cfg, "input", dn_input.c_str()));
    if (!dn_reference.empty())
      check(vofd_config_set(cfg.cfg, "reference", dn_reference.c_str()));
    if (!dn_output_dir.empty())
      check(vofd_config_set(cfg.cfg, "output_dir", dn_output_dir.c_str()));
    if (!dn_model.empty()) check(vofd_config_set(cfg.cfg, "model", dn_model.c_str()));
    apply_overrides(cfg.cfg, denoise->remaining(), dn_sets);

    ReportHandle report;
    check(vofd_run_experiment(cfg.cfg, &report.report));
    vofd_summary s;
    check(vofd_report_summary(report.report, &s));
    print_summary(s);
    return 0;
  }

  if (suite->parsed()) {
    std::vector<ConfigHandle> holders(suite_configs.size());
    std::vector<const vofd_config*> raw;
    for (std::size_t i = 0; i < suite_configs.size(); ++i) {
      check(vofd_config_create(&holders[i].cfg));
      check(vofd_config_load(holders[i].cfg, suite_configs[i].c_str()));
      apply_overrides(holders[i].cfg, suite->remaining(), suite_sets);
      raw.push_back(holders[i].cfg);
    }
    std::vector<vofd_summary> summaries(raw.size());
    std::vector<vofd_status> statuses(raw.size());
    const vofd_status st =
        vofd_run_suite(raw.data(), raw.size(), suite_out.c_str(), suite_jobs,
                       summaries.data(), statuses.data());
    int failures = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (statuses[i] == VOFD_OK) {
        print_summary(summaries[i]);
      } else {
        std::fprintf(stderr, "vofd: run %zu (%s) failed\n", i + 1,
                     suite_configs[i].c_str());
        ++failures;
      }
    }
    std::printf("wrote %s (%zu rows)\n", suite_out.c_str(), raw.size() - failures);
    if (st != VOFD_OK && failures == 0) die(st);
    return failures == 0 ? 0 : 1;
  }

  if (noise->parsed()) {
    ImageHandle clean, field, noisy;
    check(vofd_image_load(nz_input.c_str(), &clean.img));
    check(vofd_gamma_noise_field(vofd_image_width(clean.img),
                                 vofd_image_height(clean.img), nz_looks, nz_seed,
                                 &field.img));
    check(vofd_apply_multiplicative(clean.img, field.img, &noisy.img));
    check(vofd_image_save(noisy.img, nz_output.c_str()));
    double db = 0.0;
    check(vofd_psnr(noisy.img, clean.img, &db));
    std::printf("wrote %s (L=%d seed=%llu psnr=%s)\n", nz_output.c_str(), nz_looks,
                static_cast<unsigned long long>(nz_seed), metric_str(db).c_str());
    return 0;
  }

  if (metrics->parsed()) {
    ImageHandle a, b;
    check(vofd_image_load(mt_image.c_str(), &a.img));
    check(vofd_image_load(mt_reference.c_str(), &b.img));
    double db = 0.0, sim = 0.0;
    check(vofd_psnr(a.img, b.img, &db));
    check(vofd_ssim(a.img, b.img, &sim));
    std::printf("psnr = %s dB\nssim = %s\n", metric_str(db).c_str(),
                metric_str(sim).c_str());
    return 0;
  }

  if (config_cmd->parsed()) {
    ConfigHandle cfg;
    check(vofd_config_create(&cfg.cfg));
    char* text = nullptr;
    check(vofd_config_format(cfg.cfg, &text));
    std::fputs(text, stdout);
    vofd_string_free(text);
    return 0;
  }

  return 2;
}
