#pragma once

// Many-particle Hardy inequalities on the n-fold product of a stratified group,
// the identities of rho^2 = sum_{i<j} |x'_i - x'_j|^2, and the ground state
// representation they rest on.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "strata/hcalc.hpp"
#include "strata/quad.hpp"
#include "strata/verify/hardy.hpp"
#include "strata/verify/report.hpp"

namespace strata {

class ManyParticleConfig {
 public:
  ManyParticleConfig(StratifiedGroup base, std::size_t n)
      : base_(std::move(base)), n_(n), group_(make_product_group(base_, std::max<std::size_t>(n, 1))) {
    require(n >= 2, ErrorKind::invalid_argument, "particle count n must be at least 2");
    require(base_.first_dim() >= 2, ErrorKind::invalid_argument, "first-stratum dimension N must be at least 2");
  }

  const StratifiedGroup& base() const { return base_; }
  const StratifiedGroup& group() const { return group_; }
  std::size_t particles() const { return n_; }
  /// N, the first-stratum dimension of one particle.
  std::size_t first_dim() const { return base_.first_dim(); }

  /// r_ij^2 = |x'_i - x'_j|^2.
  template <class T>
  T r2(std::span<const T> x, std::size_t i, std::size_t j) const {
    T s(0.0);
    for (std::size_t m = 0; m < first_dim(); ++m) {
      T d = x[group_.factor_coord(i, 0, m)] - x[group_.factor_coord(j, 0, m)];
      s += d * d;
    }
    return s;
  }

  template <class T>
  T rho2(std::span<const T> x) const {
    T s(0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) s += r2(x, i, j);
    return s;
  }

  ScalarField rho2_field() const {
    return ScalarField::make({"rho2", Smoothness::c2, SignClass::nonnegative},
                             [self = *this](auto x) { return self.template rho2<scalar_of<decltype(x)>>(x); });
  }

  /// (x_k x_i^{-1})' through the base group law.
  std::vector<double> relative(std::span<const double> x, std::size_t k, std::size_t i) const {
    auto xk = group_.factor_point<double>(x, k);
    auto xi = group_.factor_point<double>(x, i);
    return right_difference_first<double>(base_, std::span<const double>(xk), std::span<const double>(xi));
  }

 private:
  StratifiedGroup base_;
  std::size_t n_;
  StratifiedGroup group_;
};

namespace detail {

/// Each particle pair must be excised or kept apart by the box itself.
inline void check_pairs_excised(const ManyParticleConfig& cfg, const Domain& dom) {
  const auto& g = cfg.group();
  const std::size_t nb = cfg.first_dim();
  for (std::size_t i = 0; i < cfg.particles(); ++i)
    for (std::size_t j = i + 1; j < cfg.particles(); ++j) {
      std::vector<std::size_t> a(nb), b(nb);
      for (std::size_t m = 0; m < nb; ++m) {
        a[m] = g.factor_coord(i, 0, m);
        b[m] = g.factor_coord(j, 0, m);
      }
      bool ok = Excision::pair(a, b, 1e-12).clear_of(dom.box);
      for (const auto& e : dom.excisions)
        if (e.type == Excision::Type::pair && ((e.coords == a && e.coords_b == b) || (e.coords == b && e.coords_b == a)))
          ok = true;
      require(ok, ErrorKind::invalid_argument,
              "domain must excise the collision set x'_" + std::to_string(i + 1) + " = x'_" + std::to_string(j + 1));
    }
}

inline QuadratureResult sum_results(const QuadratureResult& a, const QuadratureResult& b) {
  QuadratureResult r = a;
  r.value = a.value + b.value;
  r.std_error = std::hypot(a.std_error, b.std_error);
  return r;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

}  // namespace detail

/// int |grad u|^2 >= ((N-2)^2/n) int sum_{i<j} |u|^2 / r_ij^2.
inline VerificationReport verify_many_particle(const ManyParticleConfig& cfg, const ScalarField& u, const Domain& dom,
                                               const QuadConfig& q) {
  const auto& g = cfg.group();
  detail::check_dims(g, dom, u);
  const std::size_t n = cfg.particles();
  require(n >= 3, ErrorKind::invalid_argument, "the many-particle inequality needs n >= 3 particles");
  detail::check_pairs_excised(cfg, dom);
  std::vector<std::string> notes;
  detail::check_support(dom, u, false, notes);
  const double nd = static_cast<double>(cfg.first_dim());
  const double c = (nd - 2.0) * (nd - 2.0) / static_cast<double>(n);
  if (c == 0.0) notes.push_back("N = 2 makes the constant (N-2)^2/n vanish; the bound is trivial");

  auto integrand = [&](std::span<const double> x, std::span<double> out) {
    const double uv = u(x);
    const double grad2 = detail::sq_norm(horizontal_gradient_at<double>(g, u, x));
    double rhs = 0.0;
    if (uv != 0.0 && c != 0.0)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) rhs += uv * uv / cfg.r2<double>(x, i, j);
    rhs *= c;
    out[0] = grad2;
    out[1] = rhs;
    out[2] = grad2 - rhs;
  };
  auto mq = detail::integrate_for(integrand, 3, dom, u, q);
  auto rep = detail::make_report("many_particle", Relation::inequality, mq, 0, 1, 2);
  rep.params = {{"base", cfg.base().spec()}, {"n", n}, {"constant", c}, {"u", u.name()}};
  rep.notes = std::move(notes);
  return rep;
}

/// L rho^2 = 2n(n-1)N, |grad rho^2|^2 = 4n rho^2 and
/// sum_k sum_{i<j} (x_k x_i^{-1})'.(x_k x_j^{-1})' = ((n-2)/2) rho^2, by jets.
inline IdentityReport check_rho_identities(const ManyParticleConfig& cfg, std::span<const Point> sample,
                                           double tol = 1e-9, std::uint64_t seed = 0) {
  if (sample.empty()) fail(ErrorKind::empty_sample, "rho identities need sample points");
  const auto& g = cfg.group();
  const std::size_t n = cfg.particles();
  const double nd = static_cast<double>(cfg.first_dim()), np = static_cast<double>(n);
  const double lap_expected = 2.0 * np * (np - 1.0) * nd;
  auto rho2 = cfg.rho2_field();
  IdentityReport rep;
  rep.check = "rho_identities";
  rep.sample_size = sample.size();
  rep.seed = seed;
  rep.tolerance = tol;
  double res_lap = 0.0, res_grad = 0.0, res_sum = 0.0, lap_last = 0.0;
  for (const auto& x : sample) {
    g.check_point(x);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (cfg.r2<double>(x, i, j) == 0.0)
          fail(ErrorKind::domain_violation, "sample point lies on the diagonal x'_i = x'_j");
    const double r = rho2(x);
    lap_last = sub_laplacian(g, rho2, x);
    res_lap = std::max(res_lap, detail::rel_diff(lap_last, lap_expected));
    const double grad2 = detail::sq_norm(horizontal_gradient(g, rho2, x));
    res_grad = std::max(res_grad, detail::rel_diff(grad2, 4.0 * np * r));
    double lhs = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          auto a = cfg.relative(x, k, i), b = cfg.relative(x, k, j);
          for (std::size_t m = 0; m < a.size(); ++m) lhs += a[m] * b[m];
        }
    const double rhs = 0.5 * (np - 2.0) * r;
    res_sum = std::max(res_sum, std::fabs(lhs - rhs) / std::max({std::fabs(lhs), std::fabs(rhs), r}));
  }
  rep.max_abs_residual = std::max({res_lap, res_grad, res_sum});
  rep.verdict = rep.max_abs_residual <= tol ? Verdict::pass : Verdict::fail;
  rep.diagnostics = {{"sublaplacian_rel_residual", res_lap},
                     {"gradient_rel_residual", res_grad},
                     {"pair_sum_rel_residual", res_sum},
                     {"sublaplacian_value", lap_last},
                     {"sublaplacian_expected", lap_expected}};
  return rep;
}

struct GroundStateParams {
  StratifiedGroup group;
  ScalarField f;  // f > 0, C2
  double alpha = 0.0;
};

namespace detail {

/// v = f^{-alpha} u as a field.
inline ScalarField ground_state_substitution(const ScalarField& f, double alpha, const ScalarField& u) {
  return ScalarField::make({"f^-alpha u", Smoothness::c2, SignClass::unrestricted}, [f, alpha, u](auto x) {
    using T = scalar_of<decltype(x)>;
    return pow(f.eval<T>(x), -alpha) * u.eval<T>(x);
  });
}

/// Components |grad u|^2, middle term, |grad v|^2 f^{2 alpha}, diff.
inline void ground_state_terms(const StratifiedGroup& g, const ScalarField& f, double alpha, const ScalarField& u,
                               const ScalarField& v, std::span<const double> x, std::span<double> out) {
  const double uv = u(x);
  out[0] = sq_norm(horizontal_gradient_at<double>(g, u, x));
  if (uv == 0.0 && out[0] == 0.0) return;
  const double fv = f(x);
  if (!(fv > 0.0)) fail(ErrorKind::domain_violation, "f <= 0 at " + point_str(x));
  const double gf2 = sq_norm(horizontal_gradient_at<double>(g, f, x));
  const double lf = sub_laplacian(g, f, x);
  out[1] = (alpha * (1.0 - alpha) * gf2 / (fv * fv) - alpha * lf / fv) * uv * uv;
  out[2] = sq_norm(horizontal_gradient_at<double>(g, v, x)) * std::pow(fv, 2.0 * alpha);
  out[3] = out[0] - out[1] - out[2];
}

}  // namespace detail

/// int |grad u|^2 = int (a(1-a)|grad f|^2/f^2 - a Lf/f)|u|^2 + int |grad v|^2 f^{2a}.
inline VerificationReport verify_ground_state(const GroundStateParams& cfg, const ScalarField& u, const Domain& dom,
                                              const QuadConfig& q) {
  const auto& g = cfg.group;
  detail::check_dims(g, dom, u);
  require(cfg.f.valid(), ErrorKind::invalid_argument, "f missing");
  require(cfg.f.smoothness() == Smoothness::c2, ErrorKind::invalid_argument, "f must be C2");
  std::vector<std::string> notes;
  detail::check_support(dom, u, true, notes);
  auto v = detail::ground_state_substitution(cfg.f, cfg.alpha, u);
  auto integrand = [&](std::span<const double> x, std::span<double> out) {
    detail::ground_state_terms(g, cfg.f, cfg.alpha, u, v, x, out);
  };
  auto mq = detail::integrate_for(integrand, 4, dom, u, q);
  VerificationReport rep;
  rep.theorem = "ground_state";
  rep.relation = Relation::equality;
  rep.lhs = mq[0];
  rep.rhs = detail::sum_results(mq[1], mq[2]);
  rep.margin = rep.lhs.value - rep.rhs.value;
  rep.combined_error = mq[3].std_error;
  rep.verdict = decide(rep.relation, rep.margin, rep.combined_error, rep.lhs.value, rep.rhs.value);
  rep.diagnostics = {{"acceptance", mq.acceptance}, {"middle_term", mq[1].value}, {"remainder_term", mq[2].value}};
  rep.params = {{"group", g.spec()}, {"f", cfg.f.name()}, {"alpha", cfg.alpha}, {"u", u.name()}};
  rep.notes = std::move(notes);
  return rep;
}

/// int |grad u|^2 = n((n-1)N/2 - 1)^2 int |u|^2/rho^2 + int |grad rho^{-2a} u|^2 rho^{4a},
/// a = (2 - (n-1)N)/4.
inline VerificationReport verify_total_separation(const ManyParticleConfig& cfg, const ScalarField& u,
                                                  const Domain& dom, const QuadConfig& q) {
  const auto& g = cfg.group();
  detail::check_dims(g, dom, u);
  detail::check_pairs_excised(cfg, dom);
  std::vector<std::string> notes;
  detail::check_support(dom, u, true, notes);
  const double np = static_cast<double>(cfg.particles()), nd = static_cast<double>(cfg.first_dim());
  const double alpha = (2.0 - (np - 1.0) * nd) / 4.0;
  const double c = np * std::pow((np - 1.0) * nd / 2.0 - 1.0, 2);
  if (c == 0.0) notes.push_back("the constant n((n-1)N/2 - 1)^2 vanishes; only the substitution identity is tested");
  auto rho2 = cfg.rho2_field();
  auto v = detail::ground_state_substitution(rho2, alpha, u);

  // components: |grad u|^2, C u^2/rho^2, remainder, diff, middle term by the ground-state route
  auto integrand = [&](std::span<const double> x, std::span<double> out) {
    std::array<double, 4> gs{};
    detail::ground_state_terms(g, rho2, alpha, u, v, x, gs);
    const double uv = u(x);
    out[0] = gs[0];
    out[1] = uv == 0.0 ? 0.0 : c * uv * uv / cfg.rho2<double>(x);
    out[2] = gs[2];
    out[3] = out[0] - out[1] - out[2];
    out[4] = gs[1];
  };
  auto mq = detail::integrate_for(integrand, 5, dom, u, q);
  VerificationReport rep;
  rep.theorem = "total_separation";
  rep.relation = Relation::equality;
  rep.lhs = mq[0];
  rep.rhs = detail::sum_results(mq[1], mq[2]);
  rep.margin = rep.lhs.value - rep.rhs.value;
  rep.combined_error = mq[3].std_error;
  rep.verdict = decide(rep.relation, rep.margin, rep.combined_error, rep.lhs.value, rep.rhs.value);
  rep.diagnostics = {{"acceptance", mq.acceptance},
                     {"alpha", alpha},
                     {"constant", c},
                     {"hardy_term", mq[1].value},
                     {"hardy_term_ground_state_route", mq[4].value},
                     {"hardy_term_rel_diff", detail::rel_diff(mq[1].value, mq[4].value)}};
  rep.params = {{"base", cfg.base().spec()}, {"n", cfg.particles()}, {"u", u.name()}};
  rep.notes = std::move(notes);
  return rep;
}

}  // namespace strata
