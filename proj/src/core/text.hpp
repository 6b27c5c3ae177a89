#pragma once

#include <string>

namespace vofd {

// Shortest decimal form that round-trips; locale-independent.
std::string format_double(double v);

// Fixed-point with the given number of decimals.
std::string format_fixed(double v, int precision);

// CSV cell for a metric: 4 decimals, "inf" for infinities, "" for NaN.
std::string format_metric(double v);

}  // namespace vofd
