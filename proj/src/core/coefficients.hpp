#pragma once

#include <optional>
#include <vector>

#include "core/filters.hpp"
#include "core/image.hpp"

namespace vofd {

enum class AMode { kConstantOne, kGrayDetector };

struct CoeffConfig {
  AMode a_mode = AMode::kGrayDetector;
  double r = 0.6;        // gray-detector exponent
  double sigma_f = 1.0;  // Gaussian std for f_sigma
  double sigma_g = 15.0; // Gaussian std for the edge field g
  double h_g = 10.0;     // edge-contrast scale
  int eta = 3;           // window half-width (Chebyshev)
  double s_minus = 0.5;  // lower fractional order
  double s_plus = 0.99;  // upper fractional order
  double m = 1.0;        // texture-contrast scale
  double grid_h = 1.0;   // spatial step

  void validate() const;
};

// Gray value detector a = (f_sigma(p) * f_sigma(q) / M^2)^r, in (0, 1] for
// positive inputs; 1 when both pixels attain the maximum M.
double gray_detector_a(double fsig_p, double fsig_q, double m_max, double r);
double gray_detector_a(const Image& f_sigma, double m_max, double r, int pi,
                       int pj, int qi, int qj);

// Edge detector b = exp(-|g(p)-g(q)|^2 / h_g), in (0, 1]; the window cutoff
// is structural (offsets outside the eta window never enter the pair field).
double edge_detector_b(double g_p, double g_q, double h_g);
double edge_detector_b(const Image& g, double h_g, int pi, int pj, int qi,
                       int qj);

// Variable order s = s_minus + (s_plus - s_minus) exp(-m |h(p)-h(q)|^2),
// in [s_minus, s_plus]; equals s_plus exactly when the texture features match.
double order_field_s(double h_p, double h_q, double s_minus, double s_plus,
                     double m);
double order_field_s(const Image& h_tex, double s_minus, double s_plus,
                     double m, int pi, int pj, int qi, int qj);

// 1 / (grid_h * sqrt(di^2 + dj^2))^(2 + s*p).
double distance_weight(int di, int dj, double grid_h, double s, double p);

struct Offset {
  int di = 0;  // row delta
  int dj = 0;  // col delta
};

// Discrete kernel table: for every pixel and every neighbor offset within
// the Chebyshev eta-window, the premultiplied weight kw = k * w with
// k = a*b and w the distance weight above. Entries whose neighbor falls
// outside the image are zero and the stepper never reads them.
//
// Offsets are enumerated di = -eta..eta (outer), dj = -eta..eta (inner),
// skipping (0,0); steppers accumulate in exactly this order.
//
// Each unordered pair is computed once and mirrored, so
// kw(p, o) == kw(p+o, -o) holds bitwise.
class PairField {
 public:
  PairField() = default;  // empty; steppers reject it by shape

  // p scales the exponent of the distance weight (2 + s*p); pass 1 for the
  // sign flow. keep_components additionally retains the k and s planes for
  // inspection (they are not needed by the steppers).
  static PairField build(const Image& f, const CoeffConfig& cfg,
                         const GaborBank& bank, double p = 1.0,
                         bool keep_components = false);

  // k == 1 everywhere, constant order s: the plain variable-exponent
  // fractional window without adaptivity.
  static PairField uniform(int width, int height, int eta, double s,
                           double grid_h = 1.0, double p = 1.0);

  int width() const { return width_; }
  int height() const { return height_; }
  int eta() const { return eta_; }
  const std::vector<Offset>& offsets() const { return offsets_; }

  std::span<const double> kw_plane(int offset_index) const {
    return kw_planes_[offset_index];
  }
  bool has_components() const { return !k_planes_.empty(); }
  std::span<const double> k_plane(int offset_index) const {
    return k_planes_[offset_index];
  }
  std::span<const double> s_plane(int offset_index) const {
    return s_planes_[offset_index];
  }

  // In-bounds pixel range of an offset plane: rows [row_begin, row_end) x
  // cols [col_begin, col_end).
  void valid_range(int offset_index, int& row_begin, int& row_end,
                   int& col_begin, int& col_end) const;

  // Sum over offsets of kw at pixel p, accumulated in plane order (the
  // per-step increment bound tau * sum kw).
  double kw_sum_at(int row, int col) const;

 private:
  void init(int width, int height, int eta, bool keep_components);

  int width_ = 0, height_ = 0, eta_ = 0;
  std::vector<Offset> offsets_;
  std::vector<std::vector<double>> kw_planes_;
  std::vector<std::vector<double>> k_planes_;  // only with keep_components
  std::vector<std::vector<double>> s_planes_;  // only with keep_components
};

}  // namespace vofd
