#pragma once

// Anisotropic Hardy and Rellich inequalities, their constants, and a
// sharpness probe along truncated extremals.

#include <cmath>
#include <string>
#include <vector>

#include "strata/hcalc.hpp"
#include "strata/picone.hpp"
#include "strata/quad.hpp"
#include "strata/sampling.hpp"
#include "strata/verify/report.hpp"

namespace strata {

/// ((p-1)/p)^p.
inline double hardy_constant(double p) {
  require(p > 1.0, ErrorKind::invalid_argument, "p_i must exceed 1");
  return std::pow((p - 1.0) / p, p);
}

/// (a(a-1))^{p-1} (ap - 2p - a + 2)(ap - 2p - a + 1).
inline double rellich_constant(double alpha, double p) {
  require(p > 1.0, ErrorKind::invalid_argument, "p_i must exceed 1");
  return std::pow(alpha * (alpha - 1.0), p - 1.0) * (alpha * p - 2.0 * p - alpha + 2.0) *
         (alpha * p - 2.0 * p - alpha + 1.0);
}

struct RellichParams {
  std::vector<double> alpha;
};

namespace detail {

inline void check_hyperplanes_excised(const StratifiedGroup& g, const Domain& dom) {
  for (std::size_t i = 0; i < g.first_dim(); ++i) {
    bool ok = dom.box.lo[i] > 0.0 || dom.box.hi[i] < 0.0;
    for (const auto& e : dom.excisions)
      if (e.type == Excision::Type::hyperplane && e.coords[0] == i) ok = true;
    require(ok, ErrorKind::invalid_argument,
            "domain must exclude the hyperplane x'_" + std::to_string(i + 1) + " = 0");
  }
}

inline void check_dims(const StratifiedGroup& g, const Domain& dom, const ScalarField& u) {
  require(dom.dim() == g.dim(), ErrorKind::dimension_mismatch, "domain dimension differs from group dimension");
  require(u.valid(), ErrorKind::invalid_argument, "test function missing");
}

inline nlohmann::json quad_json(const QuadConfig& q) {
  return {{"method", q.method == QuadMethod::mc ? "mc" : "gl"}, {"n", q.n}, {"nodes", q.nodes}, {"seed", q.seed}};
}

}  // namespace detail

/// sum_i int |X_i u|^{p_i} >= sum_i ((p_i-1)/p_i)^{p_i} int |u|^{p_i}/|x'_i|^{p_i}.
inline VerificationReport verify_hardy_anisotropic(const StratifiedGroup& g, const ExponentVector& p,
                                                   const ScalarField& u, const Domain& dom, const QuadConfig& q) {
  detail::check_dims(g, dom, u);
  detail::check_exponents(g, p);
  detail::check_hyperplanes_excised(g, dom);
  std::vector<std::string> notes;
  detail::check_support(dom, u, false, notes);
  const std::size_t n_dir = g.first_dim();
  std::vector<double> k(n_dir);
  for (std::size_t i = 0; i < n_dir; ++i) {
    k[i] = hardy_constant(p[i]);
    if (p[i] >= static_cast<double>(n_dir))
      notes.push_back("p_" + std::to_string(i + 1) + " >= N lies outside the stated range 1 < p_i < N; checked anyway");
  }
  notes.push_back("every hyperplane {x'_i = 0} is excised (each weight |x'_i|^{-p_i} is singular there)");

  auto integrand = [&](std::span<const double> x, std::span<double> out) {
    const double uv = u(x);
    if (uv < 0.0) fail(ErrorKind::domain_violation, "u < 0 inside the domain; the inequality is stated for u >= 0");
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < n_dir; ++i) {
      lhs += abs_power(apply_field_at<double>(g, i, u, x), p[i]);
      rhs += k[i] * abs_power(uv, p[i]) / abs_power(x[i], p[i]);
    }
    out[0] = lhs;
    out[1] = rhs;
    out[2] = lhs - rhs;
  };
  auto mq = detail::integrate_for(integrand, 3, dom, u, q);
  auto rep = detail::make_report("hardy", Relation::inequality, mq, 0, 1, 2);
  rep.params = {{"group", g.spec()}, {"p", p.values()}, {"constants", k}, {"u", u.name()}};
  rep.notes = std::move(notes);
  return rep;
}

/// sum_i int |X_i^2 u|^{p_i} >= sum_i C_i(alpha_i, p_i) int |u|^{p_i}/|x'_i|^{2 p_i}.
inline VerificationReport verify_rellich(const StratifiedGroup& g, const ExponentVector& p, const RellichParams& params,
                                         const ScalarField& u, const Domain& dom, const QuadConfig& q) {
  detail::check_dims(g, dom, u);
  detail::check_exponents(g, p);
  const std::size_t n_dir = g.first_dim();
  require(params.alpha.size() == n_dir, ErrorKind::dimension_mismatch, "alpha vector size != first-stratum dim");
  for (double a : params.alpha)
    if (!(a > 2.0 && a < static_cast<double>(n_dir) - 2.0))
      fail(ErrorKind::alpha_out_of_range,
           "alpha_i = " + std::to_string(a) + " violates 2 < alpha_i < N - 2 with N = " + std::to_string(n_dir) +
               " (the window is nonempty only for N >= 5)");
  require(u.smoothness() == Smoothness::c2, ErrorKind::invalid_argument, "Rellich needs u in C2");
  detail::check_hyperplanes_excised(g, dom);
  std::vector<std::string> notes;
  detail::check_support(dom, u, false, notes);

  std::vector<double> c(n_dir);
  std::vector<bool> c_negative(n_dir);
  for (std::size_t i = 0; i < n_dir; ++i) {
    c[i] = rellich_constant(params.alpha[i], p[i]);
    c_negative[i] = c[i] < 0.0;
  }

  // components: lhs, rhs, diff, then int u^{p_i}/|x'_i|^{2p_i} for each i
  auto integrand = [&](std::span<const double> x, std::span<double> out) {
    const double uv = u(x);
    if (uv < 0.0) fail(ErrorKind::domain_violation, "u < 0 inside the domain; the inequality is stated for u >= 0");
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < n_dir; ++i) {
      auto z = detail::jet2_along(g, i, x);
      const double xxu = u(std::span<const Jet2>(z)).eps.eps;
      const double w = abs_power(uv, p[i]) / abs_power(x[i], 2.0 * p[i]);
      lhs += abs_power(xxu, p[i]);
      rhs += c[i] * w;
      out[3 + i] = w;
    }
    out[0] = lhs;
    out[1] = rhs;
    out[2] = lhs - rhs;
  };
  auto mq = detail::integrate_for(integrand, 3 + n_dir, dom, u, q);
  auto rep = detail::make_report("rellich", Relation::inequality, mq, 0, 1, 2);

  double rhs_split = 0.0;
  for (std::size_t i = 0; i < n_dir; ++i) rhs_split += c[i] * mq[3 + i].value;
  const double scale = std::max(std::fabs(rep.rhs.value), 1e-300);
  rep.diagnostics["rhs_two_route_rel_diff"] = std::fabs(rep.rhs.value - rhs_split) / scale;
  rep.diagnostics["constants"] = c;

  // empirical sign of X_i^2 v for v = prod |x'_j|^{alpha_j}
  std::vector<std::size_t> idx(n_dir);
  for (std::size_t i = 0; i < n_dir; ++i) idx[i] = i;
  auto v = fields::power(idx, params.alpha);
  std::size_t positive = 0, negative = 0;
  for (const auto& x : halton_points(dom.box, 256, q.seed + 11)) {
    if (!dom.contains(x)) continue;
    for (std::size_t i = 0; i < n_dir; ++i) (second_field(g, i, v, x) < 0.0 ? negative : positive)++;
  }
  rep.diagnostics["aux_second_derivative_positive"] = positive;
  rep.diagnostics["aux_second_derivative_negative"] = negative;
  if (positive > 0)
    notes.push_back("X_i^2 v > 0 observed at " + std::to_string(positive) +
                    " sampled (point, direction) pairs for v = prod |x'_j|^{alpha_j}: the concavity hypothesis of the "
                    "second-order Picone identity does not hold for this v");
  for (std::size_t i = 0; i < n_dir; ++i)
    if (c_negative[i] || c[i] == 0.0)
      notes.push_back("C_" + std::to_string(i + 1) + " = " + std::to_string(c[i]) +
                      " is not positive; that term of the bound is trivial");
  rep.params = {{"group", g.spec()}, {"p", p.values()}, {"alpha", params.alpha}, {"u", u.name()}};
  rep.notes = std::move(notes);
  return rep;
}

// Sharpness probe -------------------------------------------------------------

struct SharpnessRow {
  double delta = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double ratio_error = 0.0;
};

struct SharpnessTable {
  std::string verifier;
  std::vector<SharpnessRow> rows;
  std::string trend;
  Verdict verdict = Verdict::fail;
};

namespace detail {

/// C2 step: 0 at t <= 0, 1 at t >= 1.
template <class T>
T smoothstep(const T& t) {
  if (value_of(t) <= 0.0) return T(0.0);
  if (value_of(t) >= 1.0) return T(1.0);
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

}  // namespace detail

/// u_delta(x) = prod_j |x_j|^{a_j} chi_delta(x_j): the Hardy extremal
/// prod |x'_j|^{(p_j-1)/p_j} cut off smoothly below delta and above 1.
inline ScalarField truncated_extremal(std::vector<double> exponents, double delta) {
  require(delta > 0.0, ErrorKind::invalid_argument,
          "delta must be positive: the untruncated extremal is not C1 across the hyperplanes");
  require(delta < 0.5, ErrorKind::invalid_argument, "delta must be below 0.5");
  const std::size_t d = exponents.size();
  Box support{std::vector<double>(d, delta), std::vector<double>(d, 2.0)};
  return ScalarField::make({"truncated_extremal", Smoothness::c2, SignClass::nonnegative, support},
                           [a = std::move(exponents), delta](auto x) {
                             using T = scalar_of<decltype(x)>;
                             T prod(1.0);
                             for (std::size_t j = 0; j < a.size(); ++j) {
                               const T& s = x[j];
                               T chi = detail::smoothstep((s - delta) / delta) * detail::smoothstep(2.0 - s);
                               prod *= abs_power(s, a[j]) * chi;
                             }
                             return prod;
                           });
}

/// LHS/RHS ratios of the Hardy inequality on R^N along truncated extremals.
inline SharpnessTable sharpness_probe(const std::string& verifier, const ExponentVector& p,
                                      const std::vector<double>& deltas, const QuadConfig& q) {
  if (verifier != "hardy") fail(ErrorKind::unsupported, "no extremal family for verifier '" + verifier + "'");
  require(!deltas.empty(), ErrorKind::invalid_argument, "sharpness probe needs at least one delta");
  const std::size_t n = p.size();
  auto g = make_euclidean(n);
  std::vector<double> a(n);
  for (std::size_t j = 0; j < n; ++j) a[j] = (p[j] - 1.0) / p[j];
  SharpnessTable table;
  table.verifier = verifier;
  bool all_ok = true;
  for (double delta : deltas) {
    auto u = truncated_extremal(a, delta);
    Domain dom{cube(n, 0.0, 2.5), excise_hyperplanes(g, 0.5 * delta), "sharpness"};
    auto rep = verify_hardy_anisotropic(g, p, u, dom, q);
    SharpnessRow row{delta, rep.lhs.value, rep.rhs.value, rep.lhs.value / rep.rhs.value, 0.0};
    row.ratio_error = row.ratio * std::sqrt(std::pow(rep.lhs.std_error / rep.lhs.value, 2) +
                                            std::pow(rep.rhs.std_error / rep.rhs.value, 2));
    all_ok = all_ok && row.ratio >= 1.0 - sigma_rule * row.ratio_error;
    table.rows.push_back(row);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    if (table.rows[i].delta < table.rows[i - 1].delta && table.rows[i].ratio > table.rows[i - 1].ratio)
      decreasing = false;
  table.trend = decreasing ? "ratio decreases as delta shrinks" : "ratio is not monotone in delta";
  table.verdict = all_ok ? Verdict::pass : Verdict::fail;
  return table;
}

}  // namespace strata
