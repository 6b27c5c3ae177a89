#include "core/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "core/parallel.hpp"

namespace vofd {

void CoeffConfig::validate() const {
  if (!(s_minus > 0.0 && s_minus <= s_plus && s_plus < 1.0))
    throw ConfigError("coeff: need 0 < s_minus <= s_plus < 1");
  if (eta < 1) throw ConfigError("coeff.eta: must be >= 1");
  if (!(h_g > 0.0)) throw ConfigError("coeff.h_g: must be positive");
  if (!(m > 0.0)) throw ConfigError("coeff.m: must be positive");
  if (!(r > 0.0)) throw ConfigError("coeff.r: must be positive");
  if (!(grid_h > 0.0)) throw ConfigError("coeff.grid_h: must be positive");
  if (!(sigma_f > 0.0)) throw ConfigError("coeff.sigma_f: must be positive");
  if (!(sigma_g > 0.0)) throw ConfigError("coeff.sigma_g: must be positive");
}

double gray_detector_a(double fsig_p, double fsig_q, double m_max, double r) {
  if (!(m_max > 0.0))
    throw ConfigError(
        "gray detector: max of smoothed image is 0 (all-black input); "
        "use coeff.a_mode = constant_one");
  if (r == 0.0) return 1.0;
  return std::pow(fsig_p * fsig_q / (m_max * m_max), r);
}

double gray_detector_a(const Image& f_sigma, double m_max, double r, int pi,
                       int pj, int qi, int qj) {
  return gray_detector_a(f_sigma(pi, pj), f_sigma(qi, qj), m_max, r);
}

double edge_detector_b(double g_p, double g_q, double h_g) {
  const double d = g_p - g_q;
  return std::exp(-(d * d) / h_g);
}

double edge_detector_b(const Image& g, double h_g, int pi, int pj, int qi,
                       int qj) {
  return edge_detector_b(g(pi, pj), g(qi, qj), h_g);
}

double order_field_s(double h_p, double h_q, double s_minus, double s_plus,
                     double m) {
  const double d = h_p - h_q;
  return s_minus + (s_plus - s_minus) * std::exp(-m * (d * d));
}

double order_field_s(const Image& h_tex, double s_minus, double s_plus,
                     double m, int pi, int pj, int qi, int qj) {
  return order_field_s(h_tex(pi, pj), h_tex(qi, qj), s_minus, s_plus, m);
}

double distance_weight(int di, int dj, double grid_h, double s, double p) {
  const double dist =
      grid_h * std::sqrt(static_cast<double>(di) * di + static_cast<double>(dj) * dj);
  return 1.0 / std::pow(dist, 2.0 + s * p);
}

void PairField::init(int width, int height, int eta, bool keep_components) {
  width_ = width;
  height_ = height;
  eta_ = eta;
  offsets_.clear();
  for (int di = -eta; di <= eta; ++di)
    for (int dj = -eta; dj <= eta; ++dj)
      if (di != 0 || dj != 0) offsets_.push_back({di, dj});
  const std::size_t n = static_cast<std::size_t>(width) * height;
  kw_planes_.assign(offsets_.size(), std::vector<double>(n, 0.0));
  if (keep_components) {
    k_planes_.assign(offsets_.size(), std::vector<double>(n, 0.0));
    s_planes_.assign(offsets_.size(), std::vector<double>(n, 0.0));
  }
}

void PairField::valid_range(int offset_index, int& row_begin, int& row_end,
                            int& col_begin, int& col_end) const {
  const Offset o = offsets_[offset_index];
  row_begin = std::max(0, -o.di);
  row_end = height_ - std::max(0, o.di);
  col_begin = std::max(0, -o.dj);
  col_end = width_ - std::max(0, o.dj);
}

double PairField::kw_sum_at(int row, int col) const {
  double total = 0.0;
  for (std::size_t idx = 0; idx < offsets_.size(); ++idx) {
    const Offset o = offsets_[idx];
    const int qi = row + o.di, qj = col + o.dj;
    if (qi < 0 || qi >= height_ || qj < 0 || qj >= width_) continue;
    total += kw_planes_[idx][static_cast<std::size_t>(row) * width_ + col];
  }
  return total;
}

namespace {

// Positive half of the window under the (di, dj) lexicographic order; the
// negative half is filled by mirroring, which is what makes the pair
// symmetry bitwise.
inline bool is_positive_offset(const Offset& o) {
  return o.di > 0 || (o.di == 0 && o.dj > 0);
}

}  // namespace

PairField PairField::build(const Image& f, const CoeffConfig& cfg,
                           const GaborBank& bank, double p,
                           bool keep_components) {
  cfg.validate();
  if (!(p >= 1.0 && p <= 2.0))
    throw ConfigError("pair field: exponent scale p must be in [1, 2]");

  const int w = f.width(), h = f.height();

  // All three driver fields are frozen at t=0: they derive from the noisy
  // input, never from the evolving image.
  Image f_sigma;
  double m_max = 0.0;
  if (cfg.a_mode == AMode::kGrayDetector) {
    f_sigma = convolve(f, gaussian_kernel(cfg.sigma_f, auto_radius(cfg.sigma_f, w, h)));
    m_max = max_value(f_sigma);
    if (!(m_max > 0.0))
      throw ConfigError(
          "coeff.a_mode: gray_detector needs a non-black image; "
          "use coeff.a_mode = constant_one");
  }
  const Image g =
      convolve(f, gaussian_kernel(cfg.sigma_g, auto_radius(cfg.sigma_g, w, h)));
  const Image h_tex = texture_feature(f, bank);

  PairField pf;
  pf.init(w, h, cfg.eta, keep_components);

  // offset index lookup: (di, dj) -> plane
  const int side = 2 * cfg.eta + 1;
  auto plane_of = [&](int di, int dj) {
    const int lin = (di + cfg.eta) * side + (dj + cfg.eta);
    const int skip = lin > (cfg.eta * side + cfg.eta) ? 1 : 0;
    return lin - skip;
  };

  std::vector<int> positive;
  for (std::size_t idx = 0; idx < pf.offsets_.size(); ++idx)
    if (is_positive_offset(pf.offsets_[idx])) positive.push_back(static_cast<int>(idx));

  parallel_for(static_cast<int>(positive.size()), [&](int begin, int end) {
    for (int t = begin; t < end; ++t) {
      const int idx = positive[t];
      const Offset o = pf.offsets_[idx];
      const int mirror = plane_of(-o.di, -o.dj);
      std::vector<double>& fwd = pf.kw_planes_[idx];
      std::vector<double>& bwd = pf.kw_planes_[mirror];

      int r0, r1, c0, c1;
      pf.valid_range(idx, r0, r1, c0, c1);
      for (int i = r0; i < r1; ++i) {
        for (int j = c0; j < c1; ++j) {
          const int qi = i + o.di, qj = j + o.dj;
          const double a =
              cfg.a_mode == AMode::kGrayDetector
                  ? gray_detector_a(f_sigma(i, j), f_sigma(qi, qj), m_max, cfg.r)
                  : 1.0;
          const double b = edge_detector_b(g(i, j), g(qi, qj), cfg.h_g);
          const double s = order_field_s(h_tex(i, j), h_tex(qi, qj),
                                         cfg.s_minus, cfg.s_plus, cfg.m);
          const double kw =
              a * b * distance_weight(o.di, o.dj, cfg.grid_h, s, p);
          const std::size_t pp = static_cast<std::size_t>(i) * w + j;
          const std::size_t qq = static_cast<std::size_t>(qi) * w + qj;
          fwd[pp] = kw;
          bwd[qq] = kw;
          if (keep_components) {
            pf.k_planes_[idx][pp] = a * b;
            pf.k_planes_[mirror][qq] = a * b;
            pf.s_planes_[idx][pp] = s;
            pf.s_planes_[mirror][qq] = s;
          }
        }
      }
    }
  });
  return pf;
}

PairField PairField::uniform(int width, int height, int eta, double s,
                             double grid_h, double p) {
  if (width < 1 || height < 1)
    throw DimensionError("pair field: dimensions must be at least 1x1");
  if (eta < 1) throw ConfigError("pair field: eta must be >= 1");
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("pair field: order s must be in (0, 1)");
  if (!(grid_h > 0.0)) throw ConfigError("pair field: grid_h must be positive");

  PairField pf;
  pf.init(width, height, eta, false);
  for (std::size_t idx = 0; idx < pf.offsets_.size(); ++idx) {
    const Offset o = pf.offsets_[idx];
    const double kw = distance_weight(o.di, o.dj, grid_h, s, p);
    int r0, r1, c0, c1;
    pf.valid_range(static_cast<int>(idx), r0, r1, c0, c1);
    for (int i = r0; i < r1; ++i)
      for (int j = c0; j < c1; ++j)
        pf.kw_planes_[idx][static_cast<std::size_t>(i) * width + j] = kw;
  }
  return pf;
}

}  // namespace vofd
