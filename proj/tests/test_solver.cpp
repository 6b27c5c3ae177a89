#include <doctest.h>

#include <cmath>

#include "core/metrics.hpp"
#include "core/solver.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace vofd;

namespace {

Image two_pixel(double a, double b) {
  Image img(2, 1);
  img(0, 0) = a;
  img(0, 1) = b;
  return img;
}

GaborBank small_bank() { return gabor_bank(4, 3, 0.1, 0.4, 5); }

}  // namespace

TEST_CASE("sign flow: two-pixel hand evaluation") {
  // eta = 1, k = 1, unit distance weight; fluxes are antisymmetric signs.
  const PairField pf = PairField::uniform(2, 1, 1, 0.7);
  const Image next = step_vo_f1l(two_pixel(0.0, 10.0), pf, 0.5);
  CHECK(next(0, 0) == 0.5);
  CHECK(next(0, 1) == 9.5);
}

TEST_CASE("sign flow: constant images are exact fixed points") {
  const PairField pf = PairField::uniform(9, 7, 2, 0.5);
  const Image c(9, 7, 123.25);
  const Image next = step_vo_f1l(c, pf, 0.5);
  for (std::size_t i = 0; i < c.size(); ++i)
    CHECK(next.pixels()[i] == c.pixels()[i]);
}

TEST_CASE("sign flow matches the quadruple-loop oracle bitwise") {
  CoeffConfig cfg;
  const GaborBank bank = small_bank();
  for (std::uint64_t seed : {10ull, 20ull, 30ull, 40ull}) {
    const Image u = testing::random_image(16, 16, seed, 1.0, 255.0);
    for (int eta : {1, 3}) {
      cfg.eta = eta;
      const PairField pf = PairField::build(u, cfg, bank);
      const Image fast = step_vo_f1l(u, pf, 0.5);
      const Image ref = oracle::naive_step_sign(u, pf, 0.5);
      for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(fast.pixels()[i] == ref.pixels()[i]);
    }
  }
}

TEST_CASE("p-variant: two-pixel linear case and oracle equivalence") {
  const PairField pf = PairField::uniform(2, 1, 1, 0.7, 1.0, 2.0);
  const Image next = step_vo_fpl(two_pixel(0.0, 10.0), pf, 0.1, 2.0);
  CHECK(next(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(next(0, 1) == doctest::Approx(9.0).epsilon(1e-15));

  CoeffConfig cfg;
  const GaborBank bank = small_bank();
  const Image u = testing::random_image(16, 16, 123, 1.0, 255.0);
  for (double p : {1.5, 2.0}) {
    const PairField pfp = PairField::build(u, cfg, bank, p);
    const Image fast = step_vo_fpl(u, pfp, 0.25, p);
    const Image ref = oracle::naive_step_p(u, pfp, 0.25, p);
    for (std::size_t i = 0; i < u.size(); ++i)
      CHECK(fast.pixels()[i] == ref.pixels()[i]);
  }

  CHECK_THROWS_AS(step_vo_fpl(two_pixel(0, 1), pf, 0.1, 1.0), ConfigError);
  CHECK_THROWS_AS(step_vo_fpl(two_pixel(0, 1), pf, 0.1, 2.5), ConfigError);
}

TEST_CASE("p = 2 step is linear in u") {
  const PairField pf = PairField::uniform(12, 12, 2, 0.6, 1.0, 2.0);
  const Image u1 = testing::random_image(12, 12, 51, 0.0, 255.0);
  const Image u2 = testing::random_image(12, 12, 52, 0.0, 255.0);
  const double a = 0.3;
  Image mix(12, 12);
  for (std::size_t i = 0; i < mix.size(); ++i)
    mix.pixels()[i] = a * u1.pixels()[i] + (1.0 - a) * u2.pixels()[i];
  const Image s_mix = step_vo_fpl(mix, pf, 0.05, 2.0);
  const Image s1 = step_vo_fpl(u1, pf, 0.05, 2.0);
  const Image s2 = step_vo_fpl(u2, pf, 0.05, 2.0);
  for (std::size_t i = 0; i < mix.size(); ++i)
    CHECK(s_mix.pixels()[i] ==
          doctest::Approx(a * s1.pixels()[i] + (1.0 - a) * s2.pixels()[i])
              .epsilon(1e-10));
}

TEST_CASE("fidelity source: one-pixel hand evaluation and reductions") {
  const PairField pf = PairField::uniform(1, 1, 1, 0.7);
  Image u(1, 1, 50.0);
  Image f(1, 1, 100.0);
  const Image next = step_f1p_aa(u, pf, 0.5, 1.0, f);
  CHECK(next(0, 0) == doctest::Approx(50.01).epsilon(1e-15));

  // lambda = 0 reduces to the sign flow
  const PairField pf2 = PairField::uniform(6, 6, 2, 0.8);
  const Image rnd = testing::random_image(6, 6, 3, 1.0, 255.0);
  const Image base = step_vo_f1l(rnd, pf2, 0.5);
  const Image with0 = step_f1p_aa(rnd, pf2, 0.5, 0.0, rnd);
  for (std::size_t i = 0; i < rnd.size(); ++i)
    CHECK(with0.pixels()[i] == base.pixels()[i]);

  // u == f makes the source vanish: constant image stays fixed
  const Image c(6, 6, 80.0);
  const Image fixed = step_f1p_aa(c, pf2, 0.5, 2.0, c);
  for (std::size_t i = 0; i < c.size(); ++i)
    CHECK(fixed.pixels()[i] == c.pixels()[i]);
}

TEST_CASE("curvature baseline: fixed points and ramp invariance") {
  const Image c(8, 8, 90.0);
  const Image still = step_aa(c, 0.5, 0.0, c, 1e-3);
  for (std::size_t i = 0; i < c.size(); ++i)
    CHECK(still.pixels()[i] == c.pixels()[i]);

  // linear ramp: constant gradient, zero curvature in the interior
  Image ramp(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) ramp(i, j) = static_cast<double>(i);
  const Image next = step_aa(ramp, 0.5, 0.0, ramp, 1e-3);
  for (int i = 2; i < 8; ++i)
    for (int j = 2; j < 8; ++j)
      CHECK(next(i, j) == doctest::Approx(ramp(i, j)).epsilon(1e-12));
}

TEST_CASE("curvature baseline with fidelity does not conserve mass") {
  const Image u = testing::random_image(12, 12, 8, 50.0, 200.0);
  Image f = u;
  for (double& v : f.pixels()) v += 20.0;  // u != f, source pushes upward
  const Image next = step_aa(u, 0.5, 30.0, f, 1e-3);
  CHECK(mean(next) != doctest::Approx(mean(u)).epsilon(1e-12));
}

TEST_CASE("mass conservation over repeated sign-flow steps") {
  CoeffConfig cfg;
  const Image f = testing::random_image(32, 32, 77, 0.0, 255.0);
  const PairField pf = PairField::build(f, cfg, small_bank());
  Image u = f;
  const double mass0 = mean(u);
  for (int n = 0; n < 60; ++n) u = step_vo_f1l(u, pf, 0.5);
  CHECK(std::abs(mean(u) - mass0) / std::abs(mass0) <= 1e-10);
}

TEST_CASE("argmax flux is non-positive, argmin flux non-negative") {
  const Image u = testing::random_image(20, 20, 31, 0.0, 255.0);
  const PairField pf = PairField::uniform(20, 20, 3, 0.6);
  const Image next = step_vo_f1l(u, pf, 0.5);
  std::size_t imax = 0, imin = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u.pixels()[i] > u.pixels()[imax]) imax = i;
    if (u.pixels()[i] < u.pixels()[imin]) imin = i;
  }
  CHECK(next.pixels()[imax] <= u.pixels()[imax]);
  CHECK(next.pixels()[imin] >= u.pixels()[imin]);
}

TEST_CASE("per-step increment is bounded by tau * sum kw") {
  const Image u = testing::random_image(16, 16, 63, 0.0, 255.0);
  const PairField pf = PairField::uniform(16, 16, 2, 0.75);
  const double tau = 0.5;
  const Image next = step_vo_f1l(u, pf, tau);
  // The bound holds with equality at local extrema (all signs aligned), and
  // the final u + tau*acc update rounds at ulp(u); 1e-12 absorbs that.
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      CHECK(std::abs(next(i, j) - u(i, j)) <= tau * pf.kw_sum_at(i, j) + 1e-12);
}

TEST_CASE("discrete energy: hand value, zero at constants, oracle check") {
  const PairField pf = PairField::uniform(2, 1, 1, 0.99);
  CHECK(discrete_energy(two_pixel(0.0, 10.0), pf) == 10.0);

  const PairField pf2 = PairField::uniform(10, 10, 2, 0.6);
  CHECK(discrete_energy(Image(10, 10, 55.0), pf2) == 0.0);

  const Image rnd = testing::random_image(10, 10, 17, 0.0, 255.0);
  const double e = discrete_energy(rnd, pf2);
  CHECK(e > 0.0);
  CHECK(e == doctest::Approx(oracle::naive_energy(rnd, pf2)).epsilon(1e-12));
}

TEST_CASE("p -> 1 single-step consistency on well-separated values") {
  const Image u = testing::spread_values_image(8, 8, 1.5);
  CoeffConfig cfg;
  cfg.a_mode = AMode::kConstantOne;
  const GaborBank bank = small_bank();
  const PairField pf1 = PairField::build(u, cfg, bank, 1.0);
  const Image ref = step_vo_f1l(u, pf1, 0.5);

  double prev_gap = std::numeric_limits<double>::infinity();
  for (double p : {1.5, 1.1, 1.01, 1.001}) {
    const PairField pfp = PairField::build(u, cfg, bank, p);
    const Image stepped = step_vo_fpl(u, pfp, 0.5, p);
    double gap = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      gap = std::max(gap, std::abs(stepped.pixels()[i] - ref.pixels()[i]));
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.5);  // p = 1.001 lands close to the sign flow
}

TEST_CASE("run loop: record bookkeeping and stopping") {
  CoeffConfig cfg;
  const GaborBank bank = small_bank();

  SUBCASE("max_iters = 1 performs exactly one step") {
    SolverConfig scfg;
    scfg.stop = StopPolicy::kFixedIters;
    scfg.max_iters = 1;
    const Image f = testing::random_image(16, 16, 5, 1.0, 255.0);
    const RunReport report = run(f, Model::kVoF1l, scfg, cfg, bank, nullptr);
    CHECK(report.stopped_at == 1);
    CHECK(report.records.size() == 2);
    CHECK(report.reason == StopReason::kFixedIters);
  }

  SUBCASE("max_iters = 0 violates the invariant") {
    SolverConfig scfg;
    scfg.max_iters = 0;
    CHECK_THROWS_AS(scfg.validate(Model::kVoF1l), ConfigError);
  }

  SUBCASE("constant input stops immediately under mean_change") {
    SolverConfig scfg;
    scfg.stop = StopPolicy::kMeanChangeBelow;
    const Image f(16, 16, 77.0);
    const RunReport report = run(f, Model::kVoF1l, scfg, cfg, bank, nullptr);
    CHECK(report.stopped_at == 1);
    CHECK(report.reason == StopReason::kMeanChange);
  }

  SUBCASE("max_psnr without a reference is rejected") {
    SolverConfig scfg;  // stop = max_psnr
    const Image f = testing::random_image(16, 16, 5, 1.0, 255.0);
    CHECK_THROWS_AS(run(f, Model::kVoF1l, scfg, cfg, bank, nullptr), ConfigError);
  }

  SUBCASE("records carry mass and extrema of each iterate") {
    SolverConfig scfg;
    scfg.stop = StopPolicy::kFixedIters;
    scfg.max_iters = 3;
    const Image f = testing::random_image(16, 16, 7, 1.0, 255.0);
    const RunReport report = run(f, Model::kVoF1l, scfg, cfg, bank, nullptr);
    REQUIRE(report.records.size() == 4);
    CHECK(report.records[0].mass == doctest::Approx(mean(f)).epsilon(1e-15));
    for (const auto& rec : report.records) {
      CHECK(rec.min <= rec.mass);
      CHECK(rec.mass <= rec.max);
      CHECK(std::isnan(rec.psnr));
    }
    // mass conserved across records
    CHECK(report.records[3].mass ==
          doctest::Approx(report.records[0].mass).epsilon(1e-12));
  }

  SUBCASE("solver.p is required for the p-variant") {
    SolverConfig scfg;
    CHECK_THROWS_AS(scfg.validate(Model::kVoFpl), ConfigError);
    scfg.p = 1.5;
    CHECK_NOTHROW(scfg.validate(Model::kVoFpl));
  }
}

TEST_CASE("steppers reject mismatched pair fields") {
  const PairField pf = PairField::uniform(8, 8, 1, 0.5);
  const Image u(8, 9, 1.0);
  CHECK_THROWS_AS(step_vo_f1l(u, pf, 0.5), DimensionError);
}
