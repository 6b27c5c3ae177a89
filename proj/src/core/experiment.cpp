#include "core/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "core/parallel.hpp"
#include "core/text.hpp"

namespace vofd {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc() || res.ptr != end)
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  int out = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size())
    throw ConfigError(key + ": expected an unsigned integer, got '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "input") { input = value; return; }
  if (key == "reference") { reference = value; return; }
  if (key == "output_dir") { output_dir = value; return; }
  if (key == "run_name") { run_name = value; return; }
  if (key == "model") {
    auto m_ = model_from_name(value);
    if (!m_) throw ConfigError("model: unknown model '" + value +
                               "' (expected vo_f1l, vo_fpl, f1p_aa or aa)");
    model = *m_;
    return;
  }
  if (key == "noise.enabled") { noise.enabled = parse_bool(key, value); return; }
  if (key == "noise.looks") { noise.looks = parse_int(key, value); return; }
  if (key == "noise.seed") { noise.seed = parse_u64(key, value); return; }
  if (key == "coeff.a_mode") {
    if (value == "constant_one") coeff.a_mode = AMode::kConstantOne;
    else if (value == "gray_detector") coeff.a_mode = AMode::kGrayDetector;
    else throw ConfigError("coeff.a_mode: expected constant_one or gray_detector, got '" + value + "'");
    return;
  }
  if (key == "coeff.r") { coeff.r = parse_double(key, value); return; }
  if (key == "coeff.sigma_f") { coeff.sigma_f = parse_double(key, value); return; }
  if (key == "coeff.sigma_g") { coeff.sigma_g = parse_double(key, value); return; }
  if (key == "coeff.h_g") { coeff.h_g = parse_double(key, value); return; }
  if (key == "coeff.eta") { coeff.eta = parse_int(key, value); return; }
  if (key == "coeff.s_minus") { coeff.s_minus = parse_double(key, value); return; }
  if (key == "coeff.s_plus") { coeff.s_plus = parse_double(key, value); return; }
  if (key == "coeff.m") {
    if (value == "auto") m.reset();
    else m = parse_double(key, value);
    return;
  }
  if (key == "coeff.grid_h") { coeff.grid_h = parse_double(key, value); return; }
  if (key == "gabor.orientations") { gabor.orientations = parse_int(key, value); return; }
  if (key == "gabor.scales") { gabor.scales = parse_int(key, value); return; }
  if (key == "gabor.freq_low") { gabor.freq_low = parse_double(key, value); return; }
  if (key == "gabor.freq_high") { gabor.freq_high = parse_double(key, value); return; }
  if (key == "gabor.radius") { gabor.radius = parse_int(key, value); return; }
  if (key == "solver.tau") { solver.tau = parse_double(key, value); return; }
  if (key == "solver.max_iters") { solver.max_iters = parse_int(key, value); return; }
  if (key == "solver.stop") {
    auto s = stop_policy_from_name(value);
    if (!s) throw ConfigError("solver.stop: unknown policy '" + value +
                              "' (expected max_psnr, fixed_iters or mean_change)");
    solver.stop = *s;
    return;
  }
  if (key == "solver.patience") { solver.patience = parse_int(key, value); return; }
  if (key == "solver.tol") { solver.tol = parse_double(key, value); return; }
  if (key == "solver.p") {
    if (value == "none") solver.p.reset();
    else solver.p = parse_double(key, value);
    return;
  }
  if (key == "solver.lambda") { solver.lambda = parse_double(key, value); return; }
  if (key == "solver.eps_tv") { solver.eps_tv = parse_double(key, value); return; }
  if (key == "emit.denoised") { emit.denoised = parse_bool(key, value); return; }
  if (key == "emit.noisy") { emit.noisy = parse_bool(key, value); return; }
  if (key == "emit.gabor") { emit.gabor = parse_bool(key, value); return; }
  if (key == "emit.csv") { emit.csv = parse_bool(key, value); return; }
  if (key == "emit.summary") { emit.summary = parse_bool(key, value); return; }
  if (key == "threads") { threads = parse_int(key, value); return; }
  throw ConfigError("unknown config key '" + key + "'");
}

std::string ExperimentConfig::get(const std::string& key) const {
  if (key == "input") return input;
  if (key == "reference") return reference;
  if (key == "output_dir") return output_dir;
  if (key == "run_name") return run_name;
  if (key == "model") return model_name(model);
  if (key == "noise.enabled") return noise.enabled ? "true" : "false";
  if (key == "noise.looks") return std::to_string(noise.looks);
  if (key == "noise.seed") return std::to_string(noise.seed);
  if (key == "coeff.a_mode")
    return coeff.a_mode == AMode::kConstantOne ? "constant_one" : "gray_detector";
  if (key == "coeff.r") return format_double(coeff.r);
  if (key == "coeff.sigma_f") return format_double(coeff.sigma_f);
  if (key == "coeff.sigma_g") return format_double(coeff.sigma_g);
  if (key == "coeff.h_g") return format_double(coeff.h_g);
  if (key == "coeff.eta") return std::to_string(coeff.eta);
  if (key == "coeff.s_minus") return format_double(coeff.s_minus);
  if (key == "coeff.s_plus") return format_double(coeff.s_plus);
  if (key == "coeff.m") return m ? format_double(*m) : "auto";
  if (key == "coeff.grid_h") return format_double(coeff.grid_h);
  if (key == "gabor.orientations") return std::to_string(gabor.orientations);
  if (key == "gabor.scales") return std::to_string(gabor.scales);
  if (key == "gabor.freq_low") return format_double(gabor.freq_low);
  if (key == "gabor.freq_high") return format_double(gabor.freq_high);
  if (key == "gabor.radius") return std::to_string(gabor.radius);
  if (key == "solver.tau") return format_double(solver.tau);
  if (key == "solver.max_iters") return std::to_string(solver.max_iters);
  if (key == "solver.stop") return stop_policy_name(solver.stop);
  if (key == "solver.patience") return std::to_string(solver.patience);
  if (key == "solver.tol") return format_double(solver.tol);
  if (key == "solver.p") return solver.p ? format_double(*solver.p) : "none";
  if (key == "solver.lambda") return format_double(solver.lambda);
  if (key == "solver.eps_tv") return format_double(solver.eps_tv);
  if (key == "emit.denoised") return emit.denoised ? "true" : "false";
  if (key == "emit.noisy") return emit.noisy ? "true" : "false";
  if (key == "emit.gabor") return emit.gabor ? "true" : "false";
  if (key == "emit.csv") return emit.csv ? "true" : "false";
  if (key == "emit.summary") return emit.summary ? "true" : "false";
  if (key == "threads") return std::to_string(threads);
  throw ConfigError("unknown config key '" + key + "'");
}

namespace {

const char* const kKeyOrder[] = {
    "input",          "reference",      "output_dir",      "run_name",
    "model",          "noise.enabled",  "noise.looks",     "noise.seed",
    "coeff.a_mode",   "coeff.r",        "coeff.sigma_f",   "coeff.sigma_g",
    "coeff.h_g",      "coeff.eta",      "coeff.s_minus",   "coeff.s_plus",
    "coeff.m",        "coeff.grid_h",   "gabor.orientations",
    "gabor.scales",   "gabor.freq_low", "gabor.freq_high", "gabor.radius",
    "solver.tau",     "solver.max_iters", "solver.stop",   "solver.patience",
    "solver.tol",     "solver.p",       "solver.lambda",   "solver.eps_tv",
    "emit.denoised",  "emit.noisy",     "emit.gabor",      "emit.csv",
    "emit.summary",   "threads",
};

}  // namespace

std::string ExperimentConfig::serialize() const {
  std::string out;
  for (const char* key : kKeyOrder) {
    out += key;
    out += " = ";
    out += get(key);
    out += "\n";
  }
  return out;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + stripped + "'");
    cfg.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void ExperimentConfig::validate() const {
  if (input.empty()) throw ConfigError("input: required");
  resolved_coeff().validate();
  solver.validate(model);
  if (noise.enabled) NoiseSpec{noise.looks, noise.seed}.validate();
  if (gabor.orientations < 1) throw ConfigError("gabor.orientations: must be >= 1");
  if (gabor.scales < 1) throw ConfigError("gabor.scales: must be >= 1");
  if (!(gabor.freq_low > 0.0 && gabor.freq_low < gabor.freq_high &&
        gabor.freq_high < 0.5))
    throw ConfigError("gabor: need 0 < freq_low < freq_high < 0.5");
  if (gabor.radius < 0) throw ConfigError("gabor.radius: must be >= 0 (0 = auto)");
  if (threads < 0) throw ConfigError("threads: must be >= 0 (0 = auto)");
  if (solver.stop == StopPolicy::kMaxPsnr && reference.empty() && !noise.enabled)
    throw ConfigError(
        "solver.stop: max_psnr needs a reference; set reference or enable "
        "noise synthesis (the clean input then serves as ground truth)");
}

CoeffConfig ExperimentConfig::resolved_coeff() const {
  CoeffConfig out = coeff;
  if (m) {
    out.m = *m;
  } else {
    out.m = noise.enabled
                ? std::log2((2.0 * static_cast<double>(noise.looks) + 4.0) / 3.0)
                : 1.0;
  }
  return out;
}

std::string ExperimentConfig::resolved_run_name() const {
  if (!run_name.empty()) return run_name;
  return stem_of(input) + "_" + model_name(model);
}

namespace {

std::string csv_cell(double v) { return format_metric(v); }

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open file for writing");
  out << contents;
  if (!out) throw IoError(path + ": write failed");
}

std::string summary_header() {
  return "image,L,model,psnr_noisy,psnr_best,ssim_best,iters,wall_ms\n";
}

std::string summary_row(const Summary& s) {
  std::string row;
  row += s.image;
  row += ",";
  row += std::to_string(s.looks);
  row += ",";
  row += s.model;
  row += ",";
  row += csv_cell(s.psnr_noisy);
  row += ",";
  row += csv_cell(s.psnr_best);
  row += ",";
  row += csv_cell(s.ssim_best);
  row += ",";
  row += std::to_string(s.iterations);
  row += ",";
  row += format_fixed(s.wall_ms, 1);
  row += "\n";
  return row;
}

// Linear rescale to [0,255] for the texture-feature debug dump; display
// only, never used in computation.
Image rescale_for_display(const Image& img) {
  const double lo = min_value(img), hi = max_value(img);
  Image out(img.width(), img.height());
  if (hi == lo) return out;
  const double scale = 255.0 / (hi - lo);
  for (std::size_t i = 0; i < img.size(); ++i)
    out.data()[i] = (img.data()[i] - lo) * scale;
  return out;
}

}  // namespace

void write_iteration_csv(const RunReport& report, const std::string& path) {
  std::string csv = "iter,psnr,ssim,mass,min,max,energy\n";
  for (const auto& rec : report.records) {
    csv += std::to_string(rec.iter);
    csv += ",";
    csv += csv_cell(rec.psnr);
    csv += ",";
    csv += csv_cell(rec.ssim);
    csv += ",";
    csv += format_double(rec.mass);
    csv += ",";
    csv += format_double(rec.min);
    csv += ",";
    csv += format_double(rec.max);
    csv += ",";
    csv += std::isnan(rec.energy) ? "" : format_double(rec.energy);
    csv += "\n";
  }
  write_file(path, csv);
}

Summary run_experiment(const ExperimentConfig& cfg, RunReport* report_out) {
  const auto t0 = std::chrono::steady_clock::now();
  cfg.validate();
  set_default_threads(cfg.threads);

  const Image input = load_image(cfg.input);

  Image f;
  Image reference_storage;
  const Image* reference = nullptr;
  if (cfg.noise.enabled) {
    const NoiseSpec spec{cfg.noise.looks, cfg.noise.seed};
    f = apply_multiplicative(input,
                             gamma_noise_field(input.width(), input.height(), spec));
    if (cfg.reference.empty() || cfg.reference == cfg.input) {
      reference = &input;  // clean input is the ground truth
    } else {
      reference_storage = load_image(cfg.reference);
      reference = &reference_storage;
    }
  } else {
    f = input;
    if (!cfg.reference.empty()) {
      reference_storage = load_image(cfg.reference);
      reference = &reference_storage;
    }
  }
  if (reference) require_same_shape(f, *reference, "run_experiment");

  GaborBank bank;
  const bool needs_bank = cfg.model != Model::kAa || cfg.emit.gabor;
  if (needs_bank) {
    int radius = cfg.gabor.radius;
    if (radius == 0) {
      // Probe bank for the envelope widths, then rebuild on the real grid.
      GaborBank probe = gabor_bank(cfg.gabor.orientations, cfg.gabor.scales,
                                   cfg.gabor.freq_low, cfg.gabor.freq_high, 1);
      radius = auto_radius(probe.max_sigma(), f.width(), f.height());
    }
    bank = gabor_bank(cfg.gabor.orientations, cfg.gabor.scales,
                      cfg.gabor.freq_low, cfg.gabor.freq_high, radius);
  }

  RunReport report =
      run(f, cfg.model, cfg.solver, cfg.resolved_coeff(), bank, reference);

  const std::string name = cfg.resolved_run_name();
  std::filesystem::create_directories(cfg.output_dir);
  const auto out_path = [&](const std::string& suffix) {
    return (std::filesystem::path(cfg.output_dir) / (name + suffix)).string();
  };

  if (cfg.emit.denoised) save_image(report.restored, out_path("_denoised.pgm"));
  if (cfg.emit.noisy && cfg.noise.enabled) save_image(f, out_path("_noisy.pgm"));
  if (cfg.emit.gabor)
    save_image(rescale_for_display(texture_feature(f, bank)), out_path("_gabor.png"));
  if (cfg.emit.csv) write_iteration_csv(report, out_path("_iters.csv"));

  const auto t1 = std::chrono::steady_clock::now();

  Summary s;
  s.image = stem_of(cfg.input);
  s.model = model_name(cfg.model);
  s.looks = cfg.noise.enabled ? cfg.noise.looks : 0;
  s.psnr_noisy = report.records.front().psnr;
  s.ssim_noisy = report.records.front().ssim;
  s.psnr_best = report.records[report.best_iter].psnr;
  s.ssim_best = report.records[report.best_iter].ssim;
  s.iterations = report.stopped_at;
  s.best_iteration = report.best_iter;
  s.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  s.stop_reason = stop_reason_name(report.reason);

  if (cfg.emit.summary)
    write_file(out_path("_summary.csv"), summary_header() + summary_row(s));

  if (report_out) *report_out = std::move(report);
  return s;
}

SuiteResult run_suite(const std::vector<ExperimentConfig>& configs,
                      const std::string& csv_path, int jobs) {
  for (std::size_t i = 0; i < configs.size(); ++i) {
    try {
      configs[i].validate();
    } catch (const Error& e) {
      throw ConfigError("suite config #" + std::to_string(i + 1) + ": " + e.what());
    }
  }

  SuiteResult result;
  result.errors.assign(configs.size(), "");
  std::vector<std::optional<Summary>> slots(configs.size());

  const int workers = std::max(1, jobs);
  std::size_t next = 0;
  while (next < configs.size()) {
    const std::size_t batch = std::min<std::size_t>(workers, configs.size() - next);
    std::vector<std::future<Summary>> futures;
    futures.reserve(batch);
    for (std::size_t b = 0; b < batch; ++b)
      futures.push_back(std::async(
          workers > 1 ? std::launch::async : std::launch::deferred,
          [&configs, i = next + b] { return run_experiment(configs[i]); }));
    for (std::size_t b = 0; b < batch; ++b) {
      try {
        slots[next + b] = futures[b].get();
      } catch (const std::exception& e) {
        result.errors[next + b] = e.what();
      }
    }
    next += batch;
  }

  std::string csv = summary_header();
  for (const auto& slot : slots)
    if (slot) {
      csv += summary_row(*slot);
      result.summaries.push_back(*slot);
    }
  write_file(csv_path, csv);
  return result;
}

}  // namespace vofd
