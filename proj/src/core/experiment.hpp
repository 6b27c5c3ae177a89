#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/coefficients.hpp"
#include "core/noise.hpp"
#include "core/solver.hpp"

namespace vofd {

struct GaborOptions {
  int orientations = 4;
  int scales = 8;
  double freq_low = 0.05;
  double freq_high = 0.4;
  int radius = 0;  // 0 = auto: min(ceil(3 * max sigma), min(w, h) - 1)
};

struct NoiseOptions {
  bool enabled = false;
  int looks = 4;
  std::uint64_t seed = 42;
};

struct EmitOptions {
  bool denoised = true;
  bool noisy = true;   // only meaningful when noise synthesis is on
  bool gabor = false;  // texture feature rescaled to [0,255], PNG
  bool csv = true;     // per-iteration diagnostics
  bool summary = true; // one-row summary CSV (includes wall_ms)
};

// Flat "key = value" config with dotted sections. Defaults reproduce the
// standard parameter set; see ExperimentConfig::serialize() for the full
// key list in canonical order.
struct ExperimentConfig {
  std::string input;
  std::string reference;   // defaults to input when noise synthesis is on
  std::string output_dir = ".";
  std::string run_name;    // default: <input stem>_<model>
  Model model = Model::kVoF1l;
  NoiseOptions noise;
  CoeffConfig coeff;
  std::optional<double> m;  // unset = auto: log2((2L+4)/3) with noise, else 1
  GaborOptions gabor;
  SolverConfig solver;
  EmitOptions emit;
  int threads = 0;  // 0 = hardware concurrency

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  std::string serialize() const;

  // Field-level validation of everything checkable without the input image.
  void validate() const;

  // coeff with the m rule applied.
  CoeffConfig resolved_coeff() const;
  std::string resolved_run_name() const;
};

struct Summary {
  std::string image;  // input stem
  std::string model;
  int looks = 0;  // 0 = no synthetic noise
  double psnr_noisy = 0.0;
  double psnr_best = 0.0;
  double ssim_noisy = 0.0;
  double ssim_best = 0.0;
  int iterations = 0;
  int best_iteration = 0;
  double wall_ms = 0.0;
  std::string stop_reason;
};

// Full pipeline: load input, synthesize noise if requested, build the
// Gabor bank and coefficients, evolve, write the artifacts selected by
// emit.* into output_dir. Everything except wall_ms is a pure function of
// (config, input bytes). Returns the summary; the full report goes to
// *report_out when non-null.
Summary run_experiment(const ExperimentConfig& cfg, RunReport* report_out = nullptr);

// Writes the per-iteration CSV (columns iter,psnr,ssim,mass,min,max,energy;
// psnr/ssim with 4 decimals, empty cells for NaN, "inf" for infinities).
void write_iteration_csv(const RunReport& report, const std::string& path);

struct SuiteResult {
  std::vector<Summary> summaries;        // successful runs, input order
  std::vector<std::string> errors;       // aligned with configs; "" = success
};

// Validates all configs up front (throws on the first invalid one), then
// runs each experiment, jobs at a time. Individual run failures are
// recorded in errors and the suite continues. csv_path receives one header
// plus one row per successful run:
//   image,L,model,psnr_noisy,psnr_best,ssim_best,iters,wall_ms
SuiteResult run_suite(const std::vector<ExperimentConfig>& configs,
                      const std::string& csv_path, int jobs = 1);

}  // namespace vofd
