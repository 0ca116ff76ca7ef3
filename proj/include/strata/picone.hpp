#pragma once

// First- and second-order Picone expressions. L and L1 are evaluated from
// their closed forms in X_i u, X_i v (and X_i^2 u, X_i^2 v); R and R1
// differentiate the quotient u^{p_i}/v^{p_i-1} with jets, so L = R is a
// genuine check of two independent evaluation routes.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "strata/dual.hpp"
#include "strata/error.hpp"
#include "strata/field.hpp"
#include "strata/group.hpp"
#include "strata/hcalc.hpp"
#include "strata/report.hpp"

namespace strata {

/// Anisotropy exponents p_i > 1 and their conjugates q_i = p_i/(p_i-1).
class ExponentVector {
 public:
  explicit ExponentVector(std::vector<double> p) : p_(std::move(p)) {
    require(!p_.empty(), ErrorKind::invalid_argument, "empty exponent vector");
    for (double pi : p_) require(std::isfinite(pi) && pi > 1.0, ErrorKind::invalid_argument, "p_i must exceed 1");
  }
  static ExponentVector uniform(std::size_t n, double p) { return ExponentVector(std::vector<double>(n, p)); }

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  double conjugate(std::size_t i) const { return p_[i] / (p_[i] - 1.0); }
  const std::vector<double>& values() const { return p_; }

 private:
  std::vector<double> p_;
};

struct PiconePair {
  ScalarField u;  // u >= 0
  ScalarField v;  // v > 0
};

struct PiconeOptions {
  double guard = default_smooth_guard;
};

namespace detail {

inline void check_exponents(const StratifiedGroup& g, const ExponentVector& p) {
  require(p.size() == g.first_dim(), ErrorKind::dimension_mismatch,
          "exponent vector has " + std::to_string(p.size()) + " entries, first stratum has " +
              std::to_string(g.first_dim()));
}

inline std::string point_str(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j) s += ", ";
    s += std::to_string(x[j]);
  }
  return s + ")";
}

inline void check_pair_values(double u, double v, std::span<const double> x) {
  if (!(v > 0.0)) fail(ErrorKind::domain_violation, "v <= 0 at " + point_str(x));
  if (!(u >= 0.0)) fail(ErrorKind::domain_violation, "u < 0 at " + point_str(x));
}

/// Jet1 point moving along c_k(x).
inline std::vector<Jet1> jet1_along(const StratifiedGroup& g, std::size_t k, std::span<const double> x) {
  std::vector<double> c(g.dim());
  g.field_coeffs<double>(k, x, c);
  std::vector<Jet1> y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) y[j] = Jet1(x[j], c[j]);
  return y;
}

/// Jet2 point whose eps.eps component of f(z) is X_k^2 f(x).
inline std::vector<Jet2> jet2_along(const StratifiedGroup& g, std::size_t k, std::span<const double> x) {
  auto y = jet1_along(g, k, x);
  std::vector<Jet1> c(g.dim());
  g.field_coeffs<Jet1>(k, y, c);
  std::vector<Jet2> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = Jet2(y[j], c[j]);
  return z;
}

struct FirstOrderData {
  double u, v, xu, xv;
};

struct SecondOrderData {
  double u, v, xu, xv, xxu, xxv;
};

}  // namespace detail

/// Summands of L(u,v), one per first-stratum direction.
inline std::vector<double> picone_L_terms(const StratifiedGroup& g, const ExponentVector& p, const PiconePair& pair,
                                          std::span<const double> x, const PiconeOptions& opt = {}) {
  g.check_point(x);
  detail::check_exponents(g, p);
  const double u = pair.u(x), v = pair.v(x);
  detail::check_pair_values(u, v, x);
  std::vector<double> terms(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    const double xu = apply_field(g, i, pair.u, x);
    const double xv = apply_field(g, i, pair.v, x);
    if (pi < 2.0 && std::fabs(xv) < opt.guard)
      fail(ErrorKind::non_smooth_point, "|X_" + std::to_string(i + 1) + " v| below guard at " + detail::point_str(x));
    const double ratio = u / v;
    terms[i] = abs_power(xu, pi) - pi * abs_power(ratio, pi - 1.0) * p_flux(xv, pi) * xu +
               (pi - 1.0) * abs_power(ratio, pi) * abs_power(xv, pi);
  }
  return terms;
}

inline double picone_L(const StratifiedGroup& g, const ExponentVector& p, const PiconePair& pair,
                       std::span<const double> x, const PiconeOptions& opt = {}) {
  auto t = picone_L_terms(g, p, pair, x, opt);
  double s = 0.0;
  for (double v : t) s += v;
  return s;
}

inline double picone_R(const StratifiedGroup& g, const ExponentVector& p, const PiconePair& pair,
                       std::span<const double> x, const PiconeOptions& opt = {}) {
  g.check_point(x);
  detail::check_exponents(g, p);
  detail::check_pair_values(pair.u(x), pair.v(x), x);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    auto y = detail::jet1_along(g, i, x);
    const Jet1 U = pair.u(std::span<const Jet1>(y));
    const Jet1 V = pair.v(std::span<const Jet1>(y));
    if (pi < 2.0 && std::fabs(V.eps) < opt.guard)
      fail(ErrorKind::non_smooth_point, "|X_" + std::to_string(i + 1) + " v| below guard at " + detail::point_str(x));
    const Jet1 w = abs_power(U, pi) / pow(V, pi - 1.0);
    s += abs_power(U.eps, pi) - w.eps * p_flux(V.eps, pi);
  }
  return s;
}

namespace detail {

inline SecondOrderData second_order_data(const StratifiedGroup& g, std::size_t i, const PiconePair& pair,
                                         std::span<const double> x, Jet2& U, Jet2& V) {
  auto z = jet2_along(g, i, x);
  U = pair.u(std::span<const Jet2>(z));
  V = pair.v(std::span<const Jet2>(z));
  return {U.val.val, V.val.val, U.val.eps, V.val.eps, U.eps.eps, V.eps.eps};
}

inline void check_second_order_guards(const SecondOrderData& d, double pi, std::size_t i, std::span<const double> x,
                                      const PiconeOptions& opt) {
  if (!(d.xxv < 0.0))
    fail(ErrorKind::sign_violation,
         "X_" + std::to_string(i + 1) + "^2 v = " + std::to_string(d.xxv) + " is not negative at " + point_str(x));
  if (pi < 2.0 && d.u < opt.guard)
    fail(ErrorKind::domain_violation, "u^{p_i-2} diverges (u ~ 0, p_i < 2) at " + point_str(x));
  if (pi < 2.0 && std::fabs(d.xxv) < opt.guard)
    fail(ErrorKind::non_smooth_point, "|X_i^2 v| below guard at " + point_str(x));
}

}  // namespace detail

inline double picone_L1(const StratifiedGroup& g, const ExponentVector& p, const PiconePair& pair,
                        std::span<const double> x, const PiconeOptions& opt = {}) {
  g.check_point(x);
  detail::check_exponents(g, p);
  require(pair.u.smoothness() == Smoothness::c2 && pair.v.smoothness() == Smoothness::c2,
          ErrorKind::invalid_argument, "second-order Picone needs C2 fields");
  detail::check_pair_values(pair.u(x), pair.v(x), x);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    Jet2 U, V;
    const auto d = detail::second_order_data(g, i, pair, x, U, V);
    detail::check_second_order_guards(d, pi, i, x, opt);
    const double ratio = d.u / d.v;
    const double defect = d.xu - ratio * d.xv;
    s += abs_power(d.xxu, pi) - pi * abs_power(ratio, pi - 1.0) * d.xxu * p_flux(d.xxv, pi) +
         (pi - 1.0) * abs_power(ratio, pi) * abs_power(d.xxv, pi) -
         pi * (pi - 1.0) * abs_power(d.u, pi - 2.0) / pow(d.v, pi - 1.0) * p_flux(d.xxv, pi) * defect * defect;
  }
  return s;
}

inline double picone_R1(const StratifiedGroup& g, const ExponentVector& p, const PiconePair& pair,
                        std::span<const double> x, const PiconeOptions& opt = {}) {
  g.check_point(x);
  detail::check_exponents(g, p);
  require(pair.u.smoothness() == Smoothness::c2 && pair.v.smoothness() == Smoothness::c2,
          ErrorKind::invalid_argument, "second-order Picone needs C2 fields");
  detail::check_pair_values(pair.u(x), pair.v(x), x);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    Jet2 U, V;
    const auto d = detail::second_order_data(g, i, pair, x, U, V);
    detail::check_second_order_guards(d, pi, i, x, opt);
    const Jet2 w = abs_power(U, pi) / pow(V, pi - 1.0);
    s += abs_power(d.xxu, pi) - w.eps.eps * p_flux(d.xxv, pi);
  }
  return s;
}

enum class PiconeOrder { first, second };

struct PiconeTolerance {
  double residual = 1e-8;  // max |L - R|
  double nonneg = 1e-8;    // min L >= -nonneg
};

/// Samples L and R over the points; guard-excluded points are counted.
inline IdentityReport check_picone(const StratifiedGroup& g, const ExponentVector& p, const PiconePair& pair,
                                   std::span<const Point> sample, PiconeTolerance tol,
                                   PiconeOrder order = PiconeOrder::first, std::uint64_t seed = 0,
                                   const PiconeOptions& opt = {}) {
  IdentityReport rep;
  rep.check = order == PiconeOrder::first ? "picone" : "picone_second_order";
  rep.sample_size = sample.size();
  rep.seed = seed;
  rep.tolerance = tol.residual;
  double min_l = std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  for (const auto& x : sample) {
    double l = 0.0, r = 0.0;
    try {
      if (order == PiconeOrder::first) {
        l = picone_L(g, p, pair, x, opt);
        r = picone_R(g, p, pair, x, opt);
      } else {
        l = picone_L1(g, p, pair, x, opt);
        r = picone_R1(g, p, pair, x, opt);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::non_smooth_point) throw;
      ++rep.excluded_count;
      continue;
    }
    ++used;
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::fabs(l - r));
    min_l = std::min(min_l, l);
  }
  if (used == 0) fail(ErrorKind::empty_sample, "every sample point was excluded by the smoothness guard");
  rep.min_value = min_l;
  const bool ok = rep.max_abs_residual <= tol.residual && min_l >= -tol.nonneg;
  rep.verdict = ok ? Verdict::pass : Verdict::fail;
  rep.diagnostics = {{"max_abs_residual", rep.max_abs_residual}, {"min_L", min_l}};
  return rep;
}

}  // namespace strata
