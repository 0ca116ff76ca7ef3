#pragma once

#include <string>

#include "strata/strata.hpp"

namespace testing_util {

inline strata::ScalarField poly(const std::string& s) {
  return strata::fields::polynomial(strata::fields::parse_polynomial(s), s);
}

/// Central difference of f along direction c at x.
inline double fd_along(const strata::ScalarField& f, const strata::Point& x, const std::vector<double>& c,
                       double h = 1e-5) {
  strata::Point a = x, b = x;
  for (std::size_t j = 0; j < x.size(); ++j) {
    a[j] += h * c[j];
    b[j] -= h * c[j];
  }
  return (f(a) - f(b)) / (2 * h);
}

}  // namespace testing_util
