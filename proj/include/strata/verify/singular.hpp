#pragma once

// Hardy inequality with several singularities, the harmonic weight behind it,
// the uncertainty principle it implies, and the Euclidean vector-field lemma.

#include <cmath>
#include <string>
#include <vector>

#include "strata/hcalc.hpp"
#include "strata/quad.hpp"
#include "strata/verify/hardy.hpp"
#include "strata/verify/report.hpp"

namespace strata {

class SingularityList {
 public:
  SingularityList(const StratifiedGroup& g, std::vector<Point> points) : points_(std::move(points)) {
    require(!points_.empty(), ErrorKind::invalid_argument, "at least one singularity is required");
    for (const auto& a : points_) g.check_point(a);
    const std::size_t n = g.first_dim();
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (std::size_t j = i + 1; j < points_.size(); ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += std::pow(points_[i][k] - points_[j][k], 2);
        require(s > 0.0, ErrorKind::invalid_argument, "singularities must have distinct first-stratum parts");
      }
  }

  std::size_t size() const { return points_.size(); }
  const Point& operator[](std::size_t k) const { return points_[k]; }
  const std::vector<Point>& points() const { return points_; }
  std::vector<double> first_stratum(const StratifiedGroup& g, std::size_t k) const {
    return g.first_stratum(points_[k]);
  }

 private:
  std::vector<Point> points_;
};

/// w = sum_k |(x a_k^{-1})'|^{2-N}, its logarithm and A = grad_G ln w.
struct MultiSingularWeight {
  StratifiedGroup group;
  SingularityList singularities;

  template <class T>
  T w(std::span<const T> x) const {
    const double n = static_cast<double>(group.first_dim());
    T s(0.0);
    for (const auto& a : singularities.points()) {
      auto y = right_difference_first<T>(group, x, a);
      T r2(0.0);
      for (const auto& c : y) r2 += c * c;
      s += pow(r2, 0.5 * (2.0 - n));
    }
    return s;
  }

  ScalarField w_field() const {
    return ScalarField::make({"w", Smoothness::c2, SignClass::positive},
                             [self = *this](auto x) { return self.template w<scalar_of<decltype(x)>>(x); });
  }
  ScalarField log_w_field() const {
    return ScalarField::make({"ln_w", Smoothness::c2, SignClass::unrestricted},
                             [self = *this](auto x) { return log(self.template w<scalar_of<decltype(x)>>(x)); });
  }

  /// Closed form of A: -(N-2)/w sum_k y_k/|y_k|^N.
  std::vector<double> field(std::span<const double> x) const {
    const std::size_t n = group.first_dim();
    std::vector<double> acc(n, 0.0);
    double wv = 0.0;
    for (const auto& a : singularities.points()) {
      auto y = right_difference_first<double>(group, x, a);
      const double r = std::sqrt(detail::sq_norm(y));
      wv += std::pow(r, 2.0 - static_cast<double>(n));
      const double rn = std::pow(r, static_cast<double>(n));
      for (std::size_t j = 0; j < n; ++j) acc[j] += y[j] / rn;
    }
    for (auto& v : acc) v *= -(static_cast<double>(n) - 2.0) / wv;
    return acc;
  }

  /// |sum_k y_k/|y_k|^N|^2 / w^2, the weight multiplying ((N-2)/2)^2 |u|^2.
  double hardy_weight(std::span<const double> x) const {
    const std::size_t n = group.first_dim();
    std::vector<double> acc(n, 0.0);
    double wv = 0.0;
    for (const auto& a : singularities.points()) {
      auto y = right_difference_first<double>(group, x, a);
      const double r = std::sqrt(detail::sq_norm(y));
      wv += std::pow(r, 2.0 - static_cast<double>(n));
      const double rn = std::pow(r, static_cast<double>(n));
      for (std::size_t j = 0; j < n; ++j) acc[j] += y[j] / rn;
    }
    return detail::sq_norm(acc) / (wv * wv);
  }
};

namespace detail {

inline void require_n_at_least_3(const StratifiedGroup& g) {
  require(g.first_dim() >= 3, ErrorKind::invalid_argument,
          "first-stratum dimension N = " + std::to_string(g.first_dim()) + " but N >= 3 is required");
}

/// Each singularity must be outside the box or inside a point excision.
inline void check_singularities_excised(const StratifiedGroup& g, const SingularityList& s, const Domain& dom) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    auto a = s.first_stratum(g, k);
    bool inside = true;
    for (std::size_t j = 0; j < a.size(); ++j) inside = inside && a[j] >= dom.box.lo[j] && a[j] <= dom.box.hi[j];
    if (!inside) continue;
    bool covered = false;
    for (const auto& e : dom.excisions) {
      if (e.type != Excision::Type::point) continue;
      double d2 = 0.0;
      for (std::size_t j = 0; j < a.size() && j < e.center.size(); ++j) d2 += std::pow(e.center[j] - a[j], 2);
      if (std::sqrt(d2) < 0.5 * e.epsilon) covered = true;
    }
    require(covered, ErrorKind::invalid_argument,
            "singularity " + std::to_string(k + 1) + " lies inside the non-excised region");
  }
}

}  // namespace detail

/// int |grad_G u|^2 >= ((N-2)/2)^2 int weight |u|^2 with the multi-singular weight.
inline VerificationReport verify_hardy_multi_singular(const StratifiedGroup& g, const SingularityList& sing,
                                                      const ScalarField& u, const Domain& dom, const QuadConfig& q) {
  detail::check_dims(g, dom, u);
  detail::require_n_at_least_3(g);
  detail::check_singularities_excised(g, sing, dom);
  std::vector<std::string> notes;
  detail::check_support(dom, u, false, notes);
  MultiSingularWeight mw{g, sing};
  const double n = static_cast<double>(g.first_dim());
  const double c = 0.25 * (n - 2.0) * (n - 2.0);
  auto integrand = [&](std::span<const double> x, std::span<double> out) {
    const double uv = u(x);
    const double grad2 = detail::sq_norm(horizontal_gradient_at<double>(g, u, x));
    const double rhs = uv == 0.0 ? 0.0 : c * mw.hardy_weight(x) * uv * uv;
    out[0] = grad2;
    out[1] = rhs;
    out[2] = grad2 - rhs;
  };
  auto mq = detail::integrate_for(integrand, 3, dom, u, q);
  auto rep = detail::make_report("hardy_multi", Relation::inequality, mq, 0, 1, 2);
  rep.params = {{"group", g.spec()}, {"singularities", sing.points()}, {"constant", c}, {"u", u.name()}};
  rep.notes = std::move(notes);
  return rep;
}

/// max |L w| relative to sum_k |X_k^2 w| over the sample.
inline IdentityReport check_harmonicity_of_w(const StratifiedGroup& g, const SingularityList& sing,
                                             std::span<const Point> sample, double tol = 1e-7,
                                             std::uint64_t seed = 0) {
  detail::require_n_at_least_3(g);
  if (sample.empty()) fail(ErrorKind::empty_sample, "harmonicity check needs sample points");
  MultiSingularWeight mw{g, sing};
  auto w = mw.w_field();
  IdentityReport rep;
  rep.check = "harmonicity";
  rep.sample_size = sample.size();
  rep.seed = seed;
  rep.tolerance = tol;
  for (const auto& x : sample) {
    for (std::size_t k = 0; k < sing.size(); ++k) {
      auto y = right_difference_first<double>(g, x, sing[k]);
      if (detail::sq_norm(y) < 1e-24) fail(ErrorKind::domain_violation, "sample point hits a singularity");
    }
    double sum = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < g.first_dim(); ++k) {
      const double t = second_field(g, k, w, x);
      sum += t;
      scale += std::fabs(t);
    }
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::fabs(sum) / std::max(scale, 1e-300));
  }
  rep.verdict = rep.max_abs_residual <= tol ? Verdict::pass : Verdict::fail;
  rep.diagnostics = {{"max_rel_residual", rep.max_abs_residual}};
  return rep;
}

/// ((N-2)/2) int |u|^2 <= (int |grad_G u|^2)^{1/2} (int |u|^2 / weight)^{1/2}.
inline VerificationReport verify_uncertainty(const StratifiedGroup& g, const SingularityList& sing,
                                             const ScalarField& u, const Domain& dom, const QuadConfig& q) {
  detail::check_dims(g, dom, u);
  detail::require_n_at_least_3(g);
  detail::check_singularities_excised(g, sing, dom);
  std::vector<std::string> notes;
  detail::check_support(dom, u, false, notes);
  MultiSingularWeight mw{g, sing};
  const double n = static_cast<double>(g.first_dim());
  // components: |u|^2, |grad u|^2, |u|^2/weight, weight |u|^2
  auto integrand = [&](std::span<const double> x, std::span<double> out) {
    const double uv = u(x);
    out[0] = uv * uv;
    out[1] = detail::sq_norm(horizontal_gradient_at<double>(g, u, x));
    if (uv != 0.0) {
      const double wt = mw.hardy_weight(x);
      out[2] = uv * uv / wt;
      out[3] = wt * uv * uv;
    }
  };
  auto mq = detail::integrate_for(integrand, 4, dom, u, q);
  const auto &mass = mq[0], &grad = mq[1], &inv = mq[2], &wtd = mq[3];

  VerificationReport rep;
  rep.theorem = "uncertainty";
  rep.relation = Relation::inequality;
  rep.rhs = mass;
  rep.rhs.value = 0.5 * (n - 2.0) * mass.value;
  rep.rhs.std_error = 0.5 * (n - 2.0) * mass.std_error;
  rep.lhs = grad;
  rep.lhs.value = std::sqrt(grad.value * inv.value);
  double rel = 0.0;
  if (grad.value > 0.0) rel += std::pow(grad.std_error / grad.value, 2);
  if (inv.value > 0.0) rel += std::pow(inv.std_error / inv.value, 2);
  rep.lhs.std_error = 0.5 * rep.lhs.value * std::sqrt(rel);
  rep.margin = rep.lhs.value - rep.rhs.value;
  rep.combined_error = std::hypot(rep.lhs.std_error, rep.rhs.std_error);
  rep.verdict = decide(rep.relation, rep.margin, rep.combined_error, rep.lhs.value, rep.rhs.value);
  // Cauchy-Schwarz on the sample measure: never negative on shared nodes
  rep.diagnostics["cauchy_schwarz_slack"] = wtd.value * inv.value - mass.value * mass.value;
  rep.diagnostics["acceptance"] = mq.acceptance;
  rep.params = {{"group", g.spec()}, {"singularities", sing.points()}, {"u", u.name()}};
  notes.push_back("lhs is the product of square roots; its error is propagated to first order");
  rep.notes = std::move(notes);
  return rep;
}

// Vector fields on R^m ---------------------------------------------------------

namespace vector_fields {

inline HorizontalVectorField constant(std::vector<double> c) {
  HorizontalVectorField a;
  for (double v : c) a.push_back(fields::constant(v));
  return a;
}

/// (x - c)/|x - c|^2, divergence (m - 2)/|x - c|^2.
inline HorizontalVectorField radial(std::vector<double> center) {
  HorizontalVectorField a;
  for (std::size_t j = 0; j < center.size(); ++j)
    a.push_back(ScalarField::make({"radial_" + std::to_string(j + 1), Smoothness::c2}, [center, j](auto x) {
      using T = scalar_of<decltype(x)>;
      T r2(0.0);
      for (std::size_t k = 0; k < center.size(); ++k) r2 += (x[k] - center[k]) * (x[k] - center[k]);
      return (x[j] - center[j]) / r2;
    }));
  return a;
}

/// grad ln w for the multi-singular weight (first-order jets only).
inline HorizontalVectorField log_gradient(const MultiSingularWeight& mw) {
  HorizontalVectorField a;
  auto lw = mw.log_w_field();
  for (std::size_t k = 0; k < mw.group.first_dim(); ++k) a.push_back(field_derivative(mw.group, k, lw));
  return a;
}

}  // namespace vector_fields

/// int |grad u|^2 >= (1/4) (int div A |u|^2)^2 / int |A|^2 |u|^2 on R^m.
inline VerificationReport check_lemma_3_1(const Domain& dom, const HorizontalVectorField& a, const ScalarField& u,
                                          const QuadConfig& q) {
  const std::size_t m = dom.dim();
  auto g = make_euclidean(m);
  detail::check_dims(g, dom, u);
  require(a.size() == m, ErrorKind::dimension_mismatch, "vector field must have m components");
  std::vector<std::string> notes;
  detail::check_support(dom, u, false, notes);
  // components: |grad u|^2, div A |u|^2, |A|^2 |u|^2
  auto integrand = [&](std::span<const double> x, std::span<double> out) {
    const double uv = u(x);
    out[0] = detail::sq_norm(horizontal_gradient_at<double>(g, u, x));
    if (uv == 0.0) return;
    double a2 = 0.0;
    for (const auto& ak : a) {
      double v = ak(x);
      a2 += v * v;
    }
    out[1] = horizontal_divergence(g, a, x) * uv * uv;
    out[2] = a2 * uv * uv;
  };
  auto mq = detail::integrate_for(integrand, 3, dom, u, q);
  const auto &grad = mq[0], &div = mq[1], &den = mq[2];
  if (!(den.value > sigma_rule * den.std_error) || den.value == 0.0)
    fail(ErrorKind::zero_denominator, "int |A|^2 |u|^2 is not resolved away from zero");

  VerificationReport rep;
  rep.theorem = "lemma_3_1";
  rep.relation = Relation::inequality;
  rep.lhs = grad;
  rep.rhs = den;
  rep.rhs.value = 0.25 * div.value * div.value / den.value;
  const double d_div = 0.5 * div.value / den.value;
  const double d_den = -0.25 * div.value * div.value / (den.value * den.value);
  rep.rhs.std_error = std::hypot(d_div * div.std_error, d_den * den.std_error);
  rep.margin = rep.lhs.value - rep.rhs.value;
  rep.combined_error = std::hypot(rep.lhs.std_error, rep.rhs.std_error);
  rep.verdict = decide(rep.relation, rep.margin, rep.combined_error, rep.lhs.value, rep.rhs.value);
  rep.diagnostics["int_div_A_u2"] = div.value;
  rep.diagnostics["int_A2_u2"] = den.value;
  rep.diagnostics["int_A2_u2_std_error"] = den.std_error;
  rep.diagnostics["quarter_int_A2_u2"] = 0.25 * den.value;
  rep.diagnostics["acceptance"] = mq.acceptance;
  rep.params = {{"m", m}, {"u", u.name()}, {"field", a.empty() ? std::string() : a.front().name()}};
  notes.push_back("rhs error propagated to first order in the two integrals");
  rep.notes = std::move(notes);
  return rep;
}

}  // namespace strata
