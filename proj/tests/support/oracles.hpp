#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately naive (plain nested loops) and kept free
// of the optimized code paths it validates.

#include <span>

#include "core/coefficients.hpp"
#include "core/filters.hpp"
#include "core/image.hpp"

namespace vofd::oracle {

// Quadruple-loop correlation with reflect-without-repeat padding.
Image naive_convolve(const Image& img, const Kernel2D& kernel);

// Quadruple-loop sign-flow step: per pixel, offsets in the pair field's
// enumeration order.
Image naive_step_sign(const Image& u, const PairField& pf, double tau);

// Same for the p-variant flux |du|^(p-2) du.
Image naive_step_p(const Image& u, const PairField& pf, double tau, double p);

// 1/2 sum kw |du| via plain long double accumulation.
double naive_energy(const Image& u, const PairField& pf);

// Plain long double mean.
double naive_mean(std::span<const double> values);

}  // namespace vofd::oracle
