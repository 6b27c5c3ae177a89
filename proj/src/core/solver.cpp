#include "core/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/metrics.hpp"
#include "core/parallel.hpp"

namespace vofd {

namespace {

constexpr double kUFloor = 1e-6;  // positivity floor inside the 1/u^2 sources
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

inline double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// |du|^(p-2) * du; zero differences carry zero flux (pow(0, p-2) would be
// infinite for p < 2).
inline double p_flux(double du, double p) {
  if (du == 0.0) return 0.0;
  return std::pow(std::abs(du), p - 2.0) * du;
}

}  // namespace

const char* model_name(Model m) {
  switch (m) {
    case Model::kVoF1l: return "vo_f1l";
    case Model::kVoFpl: return "vo_fpl";
    case Model::kF1pAa: return "f1p_aa";
    case Model::kAa: return "aa";
  }
  return "?";
}

std::optional<Model> model_from_name(const std::string& name) {
  if (name == "vo_f1l") return Model::kVoF1l;
  if (name == "vo_fpl") return Model::kVoFpl;
  if (name == "f1p_aa") return Model::kF1pAa;
  if (name == "aa") return Model::kAa;
  return std::nullopt;
}

const char* stop_policy_name(StopPolicy p) {
  switch (p) {
    case StopPolicy::kMaxPsnr: return "max_psnr";
    case StopPolicy::kFixedIters: return "fixed_iters";
    case StopPolicy::kMeanChangeBelow: return "mean_change";
  }
  return "?";
}

std::optional<StopPolicy> stop_policy_from_name(const std::string& name) {
  if (name == "max_psnr") return StopPolicy::kMaxPsnr;
  if (name == "fixed_iters") return StopPolicy::kFixedIters;
  if (name == "mean_change") return StopPolicy::kMeanChangeBelow;
  return std::nullopt;
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::kMaxPsnr: return "max_psnr";
    case StopReason::kFixedIters: return "fixed_iters";
    case StopReason::kMeanChange: return "mean_change";
    case StopReason::kMaxIters: return "max_iters";
  }
  return "?";
}

void SolverConfig::validate(Model model) const {
  if (!(tau > 0.0)) throw ConfigError("solver.tau: must be positive");
  if (max_iters < 1) throw ConfigError("solver.max_iters: must be >= 1");
  if (patience < 1) throw ConfigError("solver.patience: must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("solver.tol: must be positive");
  if (!(lambda >= 0.0)) throw ConfigError("solver.lambda: must be >= 0");
  if (!(eps_tv > 0.0)) throw ConfigError("solver.eps_tv: must be positive");
  if (model == Model::kVoFpl) {
    if (!p) throw ConfigError("solver.p: required when model = vo_fpl");
    if (!(*p > 1.0 && *p <= 2.0))
      throw ConfigError("solver.p: must be in (1, 2]");
  }
}

namespace {

// Shared accumulation kernel: acc(p) = sum_o kw(p,o) * flux(u(p+o) - u(p)),
// in plane order, row-parallel. Flux is a callable on the raw difference.
template <typename Flux>
void accumulate_fluxes(const Image& u, const PairField& pf, Flux flux,
                       Image& acc) {
  const int w = u.width(), h = u.height();
  const auto& offsets = pf.offsets();
  parallel_for(h, [&](int row_begin, int row_end) {
    for (std::size_t idx = 0; idx < offsets.size(); ++idx) {
      const Offset o = offsets[idx];
      int r0, r1, c0, c1;
      pf.valid_range(static_cast<int>(idx), r0, r1, c0, c1);
      const int lo = std::max(r0, row_begin);
      const int hi = std::min(r1, row_end);
      const double* kw = pf.kw_plane(static_cast<int>(idx)).data();
      const double* src = u.data();
      double* out = acc.data();
      for (int i = lo; i < hi; ++i) {
        const std::size_t base = static_cast<std::size_t>(i) * w;
        const std::size_t nbase = static_cast<std::size_t>(i + o.di) * w + o.dj;
        for (int j = c0; j < c1; ++j)
          out[base + j] += kw[base + j] * flux(src[nbase + j] - src[base + j]);
      }
    }
  });
}

void require_field_shape(const Image& u, const PairField& pf) {
  if (u.width() != pf.width() || u.height() != pf.height())
    throw DimensionError("stepper: pair field was built for different dimensions");
}

}  // namespace

Image step_vo_f1l(const Image& u, const PairField& pf, double tau) {
  require_field_shape(u, pf);
  Image acc(u.width(), u.height(), 0.0);
  accumulate_fluxes(u, pf, [](double du) { return sign0(du); }, acc);
  Image out(u.width(), u.height());
  const double* pu = u.data();
  const double* pa = acc.data();
  double* po = out.data();
  for (std::size_t i = 0; i < u.size(); ++i) po[i] = pu[i] + tau * pa[i];
  return out;
}

Image step_vo_fpl(const Image& u, const PairField& pf_p, double tau, double p) {
  require_field_shape(u, pf_p);
  if (!(p > 1.0 && p <= 2.0)) throw ConfigError("step_vo_fpl: p must be in (1, 2]");
  Image acc(u.width(), u.height(), 0.0);
  accumulate_fluxes(u, pf_p, [p](double du) { return p_flux(du, p); }, acc);
  Image out(u.width(), u.height());
  const double* pu = u.data();
  const double* pa = acc.data();
  double* po = out.data();
  for (std::size_t i = 0; i < u.size(); ++i) po[i] = pu[i] + tau * pa[i];
  return out;
}

Image step_f1p_aa(const Image& u, const PairField& pf, double tau,
                  double lambda, const Image& f) {
  require_field_shape(u, pf);
  require_same_shape(u, f, "step_f1p_aa");
  Image acc(u.width(), u.height(), 0.0);
  accumulate_fluxes(u, pf, [](double du) { return sign0(du); }, acc);
  Image out(u.width(), u.height());
  const double* pu = u.data();
  const double* pfid = f.data();
  const double* pa = acc.data();
  double* po = out.data();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double denom = std::max(pu[i], kUFloor);
    po[i] = pu[i] + tau * (pa[i] + lambda * (pfid[i] - pu[i]) / (denom * denom));
  }
  return out;
}

namespace {

inline int reflect(int idx, int n) {
  if (idx < 0) return -idx;
  if (idx >= n) return 2 * (n - 1) - idx;
  return idx;
}

}  // namespace

Image step_aa(const Image& u, double tau, double lambda, const Image& f,
              double eps_tv) {
  require_same_shape(u, f, "step_aa");
  const int w = u.width(), h = u.height();
  if (w < 3 || h < 3) throw DimensionError("step_aa: image must be at least 3x3");
  if (!(eps_tv > 0.0)) throw ConfigError("step_aa: eps_tv must be positive");

  // u extended by mirror reflection; the normalized gradient field inherits
  // the antisymmetry that makes the boundary flux vanish.
  auto at = [&](int i, int j) { return u(reflect(i, h), reflect(j, w)); };
  auto p_at = [&](int i, int j, double& p1, double& p2) {
    const double gx = 0.5 * (at(i, j + 1) - at(i, j - 1));
    const double gy = 0.5 * (at(i + 1, j) - at(i - 1, j));
    const double norm = std::sqrt(gx * gx + gy * gy + eps_tv * eps_tv);
    p1 = gx / norm;
    p2 = gy / norm;
  };

  Image out(w, h);
  parallel_for(h, [&](int row_begin, int row_end) {
    for (int i = row_begin; i < row_end; ++i) {
      for (int j = 0; j < w; ++j) {
        double pe1, pe2, pw1, pw2, ps1, ps2, pn1, pn2;
        p_at(i, j + 1, pe1, pe2);
        p_at(i, j - 1, pw1, pw2);
        p_at(i + 1, j, ps1, ps2);
        p_at(i - 1, j, pn1, pn2);
        const double curvature = 0.5 * (pe1 - pw1) + 0.5 * (ps2 - pn2);
        const double denom = std::max(u(i, j), kUFloor);
        const double source = lambda * (f(i, j) - u(i, j)) / (denom * denom);
        out(i, j) = u(i, j) + tau * (curvature + source);
      }
    }
  });
  return out;
}

double discrete_energy(const Image& u, const PairField& pf) {
  require_field_shape(u, pf);
  const int w = u.width();
  double sum = 0.0, comp = 0.0;
  const auto& offsets = pf.offsets();
  for (std::size_t idx = 0; idx < offsets.size(); ++idx) {
    const Offset o = offsets[idx];
    int r0, r1, c0, c1;
    pf.valid_range(static_cast<int>(idx), r0, r1, c0, c1);
    const double* kw = pf.kw_plane(static_cast<int>(idx)).data();
    const double* src = u.data();
    for (int i = r0; i < r1; ++i) {
      const std::size_t base = static_cast<std::size_t>(i) * w;
      const std::size_t nbase = static_cast<std::size_t>(i + o.di) * w + o.dj;
      for (int j = c0; j < c1; ++j) {
        const double x = kw[base + j] * std::abs(src[nbase + j] - src[base + j]);
        const double t = sum + x;
        comp += (std::abs(sum) >= x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
      }
    }
  }
  return 0.5 * (sum + comp);
}

namespace {

IterationRecord diagnostics(int iter, const Image& u, const Image* reference,
                            const PairField* pf) {
  IterationRecord rec;
  rec.iter = iter;
  rec.mass = mean(u);
  rec.min = min_value(u);
  rec.max = max_value(u);
  rec.psnr = reference ? psnr(u, *reference) : kNan;
  const int window_side = 2 * SsimParams{}.window_radius + 1;
  rec.ssim = (reference && std::min(u.width(), u.height()) >= window_side)
                 ? ssim(u, *reference)
                 : kNan;
  rec.energy = pf ? discrete_energy(u, *pf) : kNan;
  return rec;
}

}  // namespace

RunReport run(const Image& f, Model model, const SolverConfig& scfg,
              const CoeffConfig& ccfg, const GaborBank& bank,
              const Image* reference) {
  scfg.validate(model);
  if (scfg.stop == StopPolicy::kMaxPsnr && reference == nullptr)
    throw ConfigError("solver.stop: max_psnr requires a reference image");
  if (reference) require_same_shape(f, *reference, "run");

  PairField pf;
  const bool uses_field = model != Model::kAa;
  if (uses_field) {
    const double p_scale = model == Model::kVoFpl ? *scfg.p : 1.0;
    pf = PairField::build(f, ccfg, bank, p_scale);
  }

  auto step = [&](const Image& u) {
    switch (model) {
      case Model::kVoF1l: return step_vo_f1l(u, pf, scfg.tau);
      case Model::kVoFpl: return step_vo_fpl(u, pf, scfg.tau, *scfg.p);
      case Model::kF1pAa: return step_f1p_aa(u, pf, scfg.tau, scfg.lambda, f);
      case Model::kAa: return step_aa(u, scfg.tau, scfg.lambda, f, scfg.eps_tv);
    }
    throw Error("run: unknown model");
  };

  RunReport report;
  Image u = f;
  report.records.push_back(diagnostics(0, u, reference, uses_field ? &pf : nullptr));

  const bool track_best = scfg.stop == StopPolicy::kMaxPsnr;
  double best_psnr = report.records[0].psnr;
  Image best = u;
  int best_iter = 0;

  int n = 0;
  StopReason reason = StopReason::kMaxIters;
  while (n < scfg.max_iters) {
    ++n;
    Image next = step(u);
    report.records.push_back(diagnostics(n, next, reference, uses_field ? &pf : nullptr));
    const double change = scfg.stop == StopPolicy::kMeanChangeBelow
                              ? mean_abs_diff(next, u)
                              : 0.0;
    u = std::move(next);

    if (track_best && report.records.back().psnr > best_psnr) {
      best_psnr = report.records.back().psnr;
      best = u;
      best_iter = n;
    }

    if (track_best && n - best_iter >= scfg.patience) {
      reason = StopReason::kMaxPsnr;
      break;
    }
    if (scfg.stop == StopPolicy::kMeanChangeBelow && change <= scfg.tol) {
      reason = StopReason::kMeanChange;
      break;
    }
  }
  if (reason == StopReason::kMaxIters && scfg.stop == StopPolicy::kFixedIters)
    reason = StopReason::kFixedIters;

  report.stopped_at = n;
  report.best_iter = track_best ? best_iter : n;
  report.restored = track_best ? std::move(best) : std::move(u);
  report.reason = reason;
  return report;
}

}  // namespace vofd
