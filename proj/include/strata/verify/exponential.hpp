#pragma once

// Hardy inequality with the Gaussian weight exp(-|(x x0^{-1})'|^2 / (4 lambda))
// and the integration-by-parts identity behind it.

#include <cmath>
#include <string>
#include <vector>

#include "strata/hcalc.hpp"
#include "strata/quad.hpp"
#include "strata/verify/hardy.hpp"
#include "strata/verify/singular.hpp"
#include "strata/verify/report.hpp"

namespace strata {

struct ExponentialWeightParams {
  Point x0;
  double lambda = 1.0;
};

namespace detail {

inline void check_exp_params(const StratifiedGroup& g, const ExponentialWeightParams& p) {
  require(p.lambda > 0.0 && std::isfinite(p.lambda), ErrorKind::invalid_argument, "lambda must be positive");
  g.check_point(p.x0);
}

/// {x' = 0} must be outside the box or removed by an excision.
inline void check_origin_excised(const StratifiedGroup& g, const Domain& dom) {
  const std::size_t n = g.first_dim();
  bool inside = true;
  for (std::size_t j = 0; j < n; ++j) inside = inside && dom.box.lo[j] <= 0.0 && dom.box.hi[j] >= 0.0;
  if (!inside) return;
  for (const auto& e : dom.excisions) {
    if (e.type == Excision::Type::hyperplane && e.coords[0] < n) return;
    if (e.type == Excision::Type::point && e.coords.size() == n) {
      double s = 0.0;
      for (double c : e.center) s += c * c;
      if (std::sqrt(s) < e.epsilon) return;
    }
  }
  fail(ErrorKind::invalid_argument, "domain must exclude the set x' = 0 where |x'|^{-2} is singular");
}

struct ExpWeightPoint {
  std::vector<double> y;  // (x x0^{-1})'
  double w;               // exp(-|y|^2 / (4 lambda))
};

inline ExpWeightPoint exp_weight_at(const StratifiedGroup& g, const ExponentialWeightParams& p,
                                    std::span<const double> x) {
  auto y = right_difference_first<double>(g, x, p.x0);
  return {y, std::exp(-sq_norm(y) / (4.0 * p.lambda))};
}

}  // namespace detail

/// int W((N-2)^2/(4|x'|^2) - N/(4 lambda) + |y|^2/(16 lambda^2)) |u|^2 <= int W |grad u|^2.
inline VerificationReport verify_exponential_weight(const StratifiedGroup& g, const ExponentialWeightParams& params,
                                                    const ScalarField& u, const Domain& dom, const QuadConfig& q) {
  detail::check_dims(g, dom, u);
  detail::require_n_at_least_3(g);
  detail::check_exp_params(g, params);
  detail::check_origin_excised(g, dom);
  std::vector<std::string> notes;
  detail::check_support(dom, u, false, notes);
  const double n = static_cast<double>(g.first_dim()), lam = params.lambda;
  const double c = 0.25 * (n - 2.0) * (n - 2.0);

  // components: weighted lhs, weighted rhs, diff, then the unweighted Hardy
  // pair and the difference of the two margins
  auto integrand = [&](std::span<const double> x, std::span<double> out) {
    const double uv = u(x);
    const double grad2 = detail::sq_norm(horizontal_gradient_at<double>(g, u, x));
    const auto [y, w] = detail::exp_weight_at(g, params, x);
    double rhs = 0.0, plain = 0.0;
    if (uv != 0.0) {
      double xp2 = 0.0;
      for (std::size_t j = 0; j < g.first_dim(); ++j) xp2 += x[j] * x[j];
      plain = c * uv * uv / xp2;
      rhs = w * (c / xp2 - n / (4.0 * lam) + detail::sq_norm(y) / (16.0 * lam * lam)) * uv * uv;
    }
    out[0] = w * grad2;
    out[1] = rhs;
    out[2] = out[0] - out[1];
    out[3] = grad2;
    out[4] = plain;
    out[5] = out[2] - (grad2 - plain);
  };
  auto mq = detail::integrate_for(integrand, 6, dom, u, q);
  auto rep = detail::make_report("exp_weight", Relation::inequality, mq, 0, 1, 2);
  rep.diagnostics["plain_hardy_margin"] = mq[3].value - mq[4].value;
  rep.diagnostics["plain_hardy_margin_std_error"] = std::hypot(mq[3].std_error, mq[4].std_error);
  rep.diagnostics["margin_minus_plain"] = mq[5].value;
  rep.diagnostics["margin_minus_plain_std_error"] = mq[5].std_error;
  rep.params = {{"group", g.spec()}, {"x0", params.x0}, {"lambda", lam}, {"u", u.name()}};
  notes.push_back("the constant term is read as -N/(4 lambda); the weight parameter is lambda throughout");
  rep.notes = std::move(notes);
  return rep;
}

/// int y.grad u u W = -1/2 int (N - |y|^2/(2 lambda)) W |u|^2 with y = (x x0^{-1})'.
inline VerificationReport check_ibp_identity(const StratifiedGroup& g, const ExponentialWeightParams& params,
                                             const ScalarField& u, const Domain& dom, const QuadConfig& q) {
  detail::check_dims(g, dom, u);
  detail::check_exp_params(g, params);
  std::vector<std::string> notes;
  detail::check_support(dom, u, true, notes);
  const double n = static_cast<double>(g.first_dim()), lam = params.lambda;
  auto integrand = [&](std::span<const double> x, std::span<double> out) {
    const double uv = u(x);
    if (uv == 0.0) return;
    const auto grad = horizontal_gradient_at<double>(g, u, x);
    const auto [y, w] = detail::exp_weight_at(g, params, x);
    double dot = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) dot += y[j] * grad[j];
    out[0] = dot * uv * w;
    out[1] = -0.5 * (n - detail::sq_norm(y) / (2.0 * lam)) * w * uv * uv;
    out[2] = out[0] - out[1];
  };
  auto mq = detail::integrate_for(integrand, 3, dom, u, q);
  auto rep = detail::make_report("ibp_identity", Relation::equality, mq, 0, 1, 2);
  rep.params = {{"group", g.spec()}, {"x0", params.x0}, {"lambda", lam}, {"u", u.name()}};
  rep.notes = std::move(notes);
  return rep;
}

}  // namespace strata
