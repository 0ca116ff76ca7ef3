#pragma once

// Horizontal calculus by nested forward jets. X_k f(x) is the derivative of
// f along the coefficient vector c_k(x); X_k^2 f differentiates that map once
// more along c_k(x), so f is evaluated on Dual<Dual<double>>.

#include <cmath>
#include <span>
#include <vector>

#include "strata/dual.hpp"
#include "strata/error.hpp"
#include "strata/field.hpp"
#include "strata/group.hpp"

namespace strata {

inline constexpr double default_smooth_guard = 1e-10;

namespace detail {

template <class T>
T directional(const ScalarField& f, std::span<const T> x, std::span<const T> dir) {
  std::vector<Dual<T>> y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) y[j] = Dual<T>(x[j], dir[j]);
  return f(std::span<const Dual<T>>(y)).eps;
}

inline void check_finite(double v, const char* what) {
  require(std::isfinite(v), ErrorKind::non_finite, std::string(what) + " evaluated to a non-finite value");
}

}  // namespace detail

/// X_k f at a point of any jet level one below the field's limit.
template <class T>
T apply_field_at(const StratifiedGroup& g, std::size_t k, const ScalarField& f, std::span<const T> x) {
  std::vector<T> c(g.dim());
  g.field_coeffs<T>(k, x, c);
  return detail::directional<T>(f, x, c);
}

inline double apply_field(const StratifiedGroup& g, std::size_t k, const ScalarField& f, std::span<const double> x) {
  g.check_point(x);
  require(k < g.first_dim(), ErrorKind::invalid_argument, "field index out of range");
  double v = apply_field_at<double>(g, k, f, x);
  detail::check_finite(v, "X_k f");
  return v;
}

/// X_k(X_k f)(x).
inline double second_field(const StratifiedGroup& g, std::size_t k, const ScalarField& f, std::span<const double> x) {
  g.check_point(x);
  require(k < g.first_dim(), ErrorKind::invalid_argument, "field index out of range");
  require(f.smoothness() == Smoothness::c2, ErrorKind::invalid_argument,
          "field '" + f.name() + "' is declared C1 only; X_k^2 needs C2");
  std::vector<double> c(g.dim());
  g.field_coeffs<double>(k, x, c);
  std::vector<Jet1> y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) y[j] = Jet1(x[j], c[j]);
  double v = apply_field_at<Jet1>(g, k, f, y).eps;
  detail::check_finite(v, "X_k^2 f");
  return v;
}

inline std::vector<double> horizontal_gradient(const StratifiedGroup& g, const ScalarField& f,
                                               std::span<const double> x) {
  g.check_point(x);
  std::vector<double> out(g.first_dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = apply_field(g, k, f, x);
  return out;
}

/// Horizontal gradient on jets; used to build composite fields such as X_i f.
template <class T>
std::vector<T> horizontal_gradient_at(const StratifiedGroup& g, const ScalarField& f, std::span<const T> x) {
  std::vector<T> out(g.first_dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = apply_field_at<T>(g, k, f, x);
  return out;
}

inline double horizontal_divergence(const StratifiedGroup& g, const HorizontalVectorField& v,
                                    std::span<const double> x) {
  require(v.size() == g.first_dim(), ErrorKind::dimension_mismatch,
          "vector field has " + std::to_string(v.size()) + " components, first stratum has " +
              std::to_string(g.first_dim()));
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) s += apply_field(g, k, v[k], x);
  return s;
}

inline double sub_laplacian(const StratifiedGroup& g, const ScalarField& f, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t k = 0; k < g.first_dim(); ++k) s += second_field(g, k, f, x);
  return s;
}

/// X_k f as a field (first-order jets only).
inline ScalarField field_derivative(const StratifiedGroup& g, std::size_t k, const ScalarField& f) {
  return ScalarField::make_depth1({"X" + std::to_string(k + 1) + "(" + f.name() + ")", Smoothness::c1},
                                  [g, k, f](auto x) {
                                    using T = scalar_of<decltype(x)>;
                                    return apply_field_at<T>(g, k, f, x);
                                  });
}

/// sum_i X_i(|X_i f|^{p_i-2} X_i f). Points where |X_i f| < guard and
/// p_i < 2 are rejected with NonSmoothPoint.
inline double anisotropic_p_sublaplacian(const StratifiedGroup& g, std::span<const double> p, const ScalarField& f,
                                         std::span<const double> x, double guard = default_smooth_guard) {
  g.check_point(x);
  require(p.size() == g.first_dim(), ErrorKind::dimension_mismatch, "exponent vector size != first-stratum dim");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    require(p[i] > 1.0, ErrorKind::invalid_argument, "p_i must exceed 1");
    const double xi_f = apply_field(g, i, f, x);
    if (p[i] < 2.0 && std::fabs(xi_f) < guard)
      fail(ErrorKind::non_smooth_point, "|X_" + std::to_string(i + 1) + " f| below guard with p_i < 2");
    std::vector<double> c(g.dim());
    g.field_coeffs<double>(i, x, c);
    std::vector<Jet1> y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = Jet1(x[j], c[j]);
    Jet1 inner = apply_field_at<Jet1>(g, i, f, y);
    double term = p_flux(inner, p[i]).eps;
    if (!std::isfinite(term)) fail(ErrorKind::non_smooth_point, "p-flux derivative is not finite");
    sum += term;
  }
  return sum;
}

}  // namespace strata
