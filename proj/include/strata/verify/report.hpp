#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "strata/field.hpp"
#include "strata/quad.hpp"
#include "strata/report.hpp"

namespace strata {

/// Width of the error band, in standard errors, used by every verdict.
inline constexpr double sigma_rule = 3.0;

enum class Relation { inequality, equality };

/// LHS/RHS of one theorem instance. `lhs` is always the side asserted to be
/// the larger one (or either side of an equality), so margin = lhs - rhs.
struct VerificationReport {
  std::string theorem;
  Relation relation = Relation::inequality;
  QuadratureResult lhs;
  QuadratureResult rhs;
  double margin = 0.0;
  double combined_error = 0.0;
  Verdict verdict = Verdict::fail;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json diagnostics = nlohmann::json::object();
  std::vector<std::string> notes;

  bool passed() const { return verdict == Verdict::pass; }
};

/// pass iff margin >= -3 sigma (inequalities) or |margin| <= 3 sigma
/// (equalities). An equality whose error band exceeds half the size of both
/// sides cannot discriminate and is reported inconclusive.
inline Verdict decide(Relation rel, double margin, double err, double lhs, double rhs) {
  if (!std::isfinite(margin) || !std::isfinite(err)) return Verdict::inconclusive;
  const double band = sigma_rule * err;
  if (rel == Relation::inequality) return margin >= -band ? Verdict::pass : Verdict::fail;
  if (std::fabs(margin) > band) return Verdict::fail;
  const double scale = std::max(std::fabs(lhs), std::fabs(rhs));
  if (err > 0.0 && band > 0.5 * scale) return Verdict::inconclusive;
  return Verdict::pass;
}

namespace detail {

/// Integrates over dom, shrunk to the declared support of u when it has one.
inline MultiQuadrature integrate_for(const Integrand& f, std::size_t components, const Domain& dom,
                                     const ScalarField& u, const QuadConfig& q) {
  Domain d = dom;
  if (u.support() && !u.support()->empty()) {
    Domain r = dom.restricted(*u.support());
    if (!r.box.empty()) d = std::move(r);
  }
  return integrate(f, components, d, q);
}

/// Requires u to vanish near the boundary of dom and near every excision.
/// Fields without a declared support are rejected when `strict`, noted otherwise.
inline void check_support(const Domain& dom, const ScalarField& u, bool strict, std::vector<std::string>& notes) {
  require(u.support() || !strict, ErrorKind::invalid_argument,
          "u = '" + u.name() + "' must have compact support inside the domain");
  if (!u.support()) {
    notes.push_back("u has no declared compact support; boundary terms are not controlled");
    return;
  }
  if (u.support()->empty()) return;
  require(dom.holds_compactly(*u.support()), ErrorKind::invalid_argument,
          "support of u = '" + u.name() + "' is not compactly inside the domain (box or excisions)");
}

inline VerificationReport make_report(std::string theorem, Relation rel, const MultiQuadrature& mq, std::size_t greater,
                                      std::size_t lesser, std::size_t diff) {
  VerificationReport r;
  r.theorem = std::move(theorem);
  r.relation = rel;
  r.lhs = mq[greater];
  r.rhs = mq[lesser];
  r.margin = r.lhs.value - r.rhs.value;
  r.combined_error = mq[diff].std_error;
  r.verdict = decide(rel, r.margin, r.combined_error, r.lhs.value, r.rhs.value);
  r.diagnostics["acceptance"] = mq.acceptance;
  return r;
}

inline double sq_norm(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return s;
}

}  // namespace detail

inline nlohmann::json to_json(const QuadratureResult& q) {
  return {{"value", q.value}, {"std_error", q.std_error}, {"n_evals", q.n_evals}, {"method", q.method}};
}

inline nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json j = {{"check", r.check},
                      {"max_abs_residual", r.max_abs_residual},
                      {"excluded_count", r.excluded_count},
                      {"sample_size", r.sample_size},
                      {"seed", r.seed},
                      {"tolerance", r.tolerance},
                      {"verdict", std::string(to_string(r.verdict))},
                      {"notes", r.notes}};
  j["min_L"] = r.min_value ? nlohmann::json(*r.min_value) : nlohmann::json(nullptr);
  nlohmann::json diag = nlohmann::json::object();
  for (const auto& [k, v] : r.diagnostics) diag[k] = v;
  j["diagnostics"] = diag;
  return j;
}

inline nlohmann::json to_json(const VerificationReport& r) {
  return {{"theorem", r.theorem},
          {"relation", r.relation == Relation::equality ? "equality" : "inequality"},
          {"lhs", to_json(r.lhs)},
          {"rhs", to_json(r.rhs)},
          {"margin", r.margin},
          {"combined_error", r.combined_error},
          {"verdict", std::string(to_string(r.verdict))},
          {"params", r.params},
          {"diagnostics", r.diagnostics},
          {"notes", r.notes}};
}

}  // namespace strata
