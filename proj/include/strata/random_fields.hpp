#pragma once

// Seeded random test pairs for the Picone identities.

#include <cmath>
#include <cstdint>
#include <vector>

#include "strata/field.hpp"
#include "strata/group.hpp"
#include "strata/picone.hpp"
#include "strata/sampling.hpp"

namespace strata {

namespace detail {

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }

}  // namespace detail

/// u = (0.3 + sum c_j (x_j - m_j)^2) exp(-|x - m|^2 / (2 s^2)) > 0.
inline ScalarField random_positive_field(std::size_t dim, std::uint64_t seed) {
  auto rng = make_rng(seed, 0x0u);
  std::vector<double> c(dim), m(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    c[j] = detail::uniform_in(rng, 0.2, 1.0);
    m[j] = detail::uniform_in(rng, -0.3, 0.3);
  }
  const double s = detail::uniform_in(rng, 0.7, 1.2);
  return ScalarField::make({"random_u", Smoothness::c2, SignClass::positive}, [c, m, s](auto x) {
    using T = scalar_of<decltype(x)>;
    T poly(0.3), r2(0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      T z = x[j] - m[j];
      poly += c[j] * z * z;
      r2 += z * z;
    }
    return poly * exp(-r2 / (2.0 * s * s));
  });
}

/// v = 1.5 + sin(a.x) + 0.3 cos(b.x) >= 0.2.
inline ScalarField random_oscillating_field(std::size_t dim, std::uint64_t seed) {
  auto rng = make_rng(seed, 0x1u);
  std::vector<double> a(dim), b(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    a[j] = detail::uniform_in(rng, -1.0, 1.0);
    b[j] = detail::uniform_in(rng, -1.0, 1.0);
  }
  return ScalarField::make({"random_v", Smoothness::c2, SignClass::positive}, [a, b](auto x) {
    using T = scalar_of<decltype(x)>;
    T sa(0.0), sb(0.0);
    for (std::size_t j = 0; j < a.size(); ++j) {
      sa += a[j] * x[j];
      sb += b[j] * x[j];
    }
    return 1.5 + sin(sa) + 0.3 * cos(sb);
  });
}

/// v = 3 + b.x' - sum a_i x'_i^2 with a_i in [0.1, 0.4]: X_i^2 v = -2 a_i on
/// every built-in group, and v >= 1.2 on [-1, 1]^d for N <= 3.
inline ScalarField random_concave_field(const StratifiedGroup& g, std::uint64_t seed) {
  auto rng = make_rng(seed, 0x2u);
  const std::size_t n = g.first_dim();
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = detail::uniform_in(rng, 0.1, 0.4);
    b[i] = detail::uniform_in(rng, -0.2, 0.2);
  }
  return ScalarField::make({"random_concave_v", Smoothness::c2, SignClass::positive}, [a, b](auto x) {
    using T = scalar_of<decltype(x)>;
    T v(3.0);
    for (std::size_t i = 0; i < a.size(); ++i) v += b[i] * x[i] - a[i] * x[i] * x[i];
    return v;
  });
}

inline PiconePair random_picone_pair(const StratifiedGroup& g, std::uint64_t seed, bool concave = false) {
  return {random_positive_field(g.dim(), seed),
          concave ? random_concave_field(g, seed) : random_oscillating_field(g.dim(), seed)};
}

/// Each p_i drawn from {1.5, 2, 3}.
inline ExponentVector random_exponents(std::size_t n, std::uint64_t seed) {
  static constexpr double choices[] = {1.5, 2.0, 3.0};
  auto rng = make_rng(seed, 0x3u);
  std::vector<double> p(n);
  for (auto& pi : p) pi = choices[rng() % 3];
  return ExponentVector(p);
}

}  // namespace strata
