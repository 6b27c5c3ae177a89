#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/coefficients.hpp"
#include "core/image.hpp"

namespace vofd {

enum class Model { kVoF1l, kVoFpl, kF1pAa, kAa };

const char* model_name(Model m);
std::optional<Model> model_from_name(const std::string& name);

enum class StopPolicy { kMaxPsnr, kFixedIters, kMeanChangeBelow };

const char* stop_policy_name(StopPolicy p);
std::optional<StopPolicy> stop_policy_from_name(const std::string& name);

struct SolverConfig {
  double tau = 0.5;
  int max_iters = 200;
  StopPolicy stop = StopPolicy::kMaxPsnr;
  int patience = 5;            // max_psnr: iterations without improvement
  double tol = 1e-4;           // mean_change: mean |u_next - u| threshold
  std::optional<double> p;     // order for the p-variant, in (1, 2]
  double lambda = 30.0;        // fidelity weight (f1p_aa, aa)
  double eps_tv = 1e-3;        // gradient regularization (aa)

  void validate(Model model) const;
};

enum class StopReason { kMaxPsnr, kFixedIters, kMeanChange, kMaxIters };

const char* stop_reason_name(StopReason r);

struct IterationRecord {
  int iter = 0;
  double psnr = 0.0;    // NaN without a reference
  double ssim = 0.0;    // NaN without a reference or on tiny images
  double mass = 0.0;    // mean intensity
  double min = 0.0;
  double max = 0.0;
  double energy = 0.0;  // NaN for the aa model (no pair field)
};

struct RunReport {
  std::vector<IterationRecord> records;  // size stopped_at + 1, index 0 = input
  Image restored;   // best-PSNR iterate under max_psnr, else the final iterate
  int stopped_at = 0;
  int best_iter = 0;  // equals stopped_at when no reference is available
  StopReason reason = StopReason::kMaxIters;
};

// One explicit step of the variable-order fractional 1-Laplacian sign flow:
//   u'(p) = u(p) + tau * sum_o kw(p,o) * sign0(u(p+o) - u(p)),
// sign0(0) = 0. Input is untouched; out-of-range neighbors contribute
// nothing. Accumulation order per pixel is the pair field's offset order.
Image step_vo_f1l(const Image& u, const PairField& pf, double tau);

// p-variant: sign0 becomes |du|^(p-2) du (0 at du == 0); pf must be built
// with the matching exponent scale p. p in (1, 2]; p = 2 is the linear
// variable-order fractional Laplacian step.
Image step_vo_fpl(const Image& u, const PairField& pf_p, double tau, double p);

// Sign flow plus the fidelity source tau * lambda * (f - u) / max(u, floor)^2.
Image step_f1p_aa(const Image& u, const PairField& pf, double tau,
                  double lambda, const Image& f);

// Curvature flow baseline: explicit step of
//   u_t = div(grad u / sqrt(|grad u|^2 + eps_tv^2)) + lambda (f - u) / u^2
// with central differences and reflecting ghost cells (homogeneous Neumann).
// Requires a 3x3 or larger image.
Image step_aa(const Image& u, double tau, double lambda, const Image& f,
              double eps_tv);

// Discrete energy 1/2 * sum_p sum_o kw(p,o) |u(p+o) - u(p)| over in-bounds
// pairs.
double discrete_energy(const Image& u, const PairField& pf);

// Full evolution loop: builds the pair field once from f (except for aa),
// iterates the model's stepper and records diagnostics each iteration.
// reference is required iff stop == max_psnr, which stops once PSNR has not
// improved for `patience` iterations and restores the best iterate.
RunReport run(const Image& f, Model model, const SolverConfig& scfg,
              const CoeffConfig& ccfg, const GaborBank& bank,
              const Image* reference);

}  // namespace vofd
