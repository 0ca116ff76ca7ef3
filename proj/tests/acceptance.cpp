// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "strata/strata.hpp"
#include "strata/suite.hpp"

using namespace strata;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

QuadConfig mc(std::size_t n, std::uint64_t seed) { return {QuadMethod::mc, n, 8, seed, 1}; }

ScalarField poly(const std::string& s) { return fields::polynomial(fields::parse_polynomial(s), s); }

Domain with_points(const StratifiedGroup& g, Box box, const std::vector<Point>& pts, double eps) {
  Domain d{std::move(box), {}, "points"};
  for (const auto& a : pts) d.excisions.push_back(excise_point(g, a, eps));
  return d;
}

// Random center and radius, support clear of the coordinate hyperplanes and
// inside [-1.5, 1.5]^d.
ScalarField seeded_bump(std::size_t dim, std::uint64_t seed) {
  auto rng = make_rng(seed, 0xb0);
  const double r = 0.2 + 0.2 * unit_uniform(rng);
  std::vector<double> c(dim);
  for (auto& x : c) {
    const double mag = r + 0.1 + (1.3 - 2 * r) * unit_uniform(rng);
    x = rng() % 2 ? mag : -mag;
  }
  return fields::bump(c, r);
}

// 1: first-order identity on R^3 and H^1
Outcome picone_identity() {
  const auto t0 = Clock::now();
  double worst = 0.0, min_l = INFINITY;
  bool ok = true;
  for (const auto& g : {make_euclidean(3), make_heisenberg(1)}) {
    auto pts = halton_points(cube(g.dim(), -1, 1), 10000, 1);
    for (std::uint64_t s = 0; s < 10; ++s) {
      auto rep = check_picone(g, random_exponents(g.first_dim(), s), random_picone_pair(g, s), pts, {1e-8, 1e-10});
      ok = ok && rep.passed();
      worst = std::max(worst, rep.max_abs_residual);
      min_l = std::min(min_l, *rep.min_value);
    }
  }
  const double secs = seconds_since(t0);
  return {ok && worst <= 1e-8 && min_l >= -1e-10 && secs < 10.0,
          "max |L-R| = " + fmt("%.2e", worst) + ", min L = " + fmt("%.2e", min_l) + ", " + fmt("%.2f s", secs)};
}

// 2: L vanishes for u = c v
Outcome picone_equality_case() {
  double worst = 0.0;
  for (const auto& g : {make_euclidean(3), make_heisenberg(1)}) {
    auto pts = halton_points(cube(g.dim(), -1, 1), 10000, 2);
    for (std::uint64_t s = 0; s < 3; ++s) {
      auto v = random_oscillating_field(g.dim(), 100 + s);
      auto p = random_exponents(g.first_dim(), 200 + s);
      for (double c : {0.5, 1.0, 2.0}) {
        PiconePair pair{fields::product(fields::constant(c), v), v};
        for (const auto& x : pts) worst = std::max(worst, std::fabs(picone_L(g, p, pair, x)));
      }
    }
  }
  return {worst <= 1e-9, "max |L| = " + fmt("%.2e", worst)};
}

// 3: second-order identity on the concave family
Outcome second_order_identity() {
  double worst = 0.0, min_l = INFINITY;
  std::size_t excluded = 0;
  for (const auto& g : {make_euclidean(3), make_heisenberg(1)}) {
    auto pts = halton_points(cube(g.dim(), -1, 1), 1000, 3);
    for (std::uint64_t s = 0; s < 10; ++s) {
      auto rep = check_picone(g, random_exponents(g.first_dim(), s), random_picone_pair(g, s, true), pts,
                              {1e-6, 1e-8}, PiconeOrder::second);
      worst = std::max(worst, rep.max_abs_residual);
      min_l = std::min(min_l, *rep.min_value);
      excluded += rep.excluded_count;
    }
  }
  return {worst <= 1e-6 && min_l >= -1e-8, "max |L1-R1| = " + fmt("%.2e", worst) + ", min L1 = " +
                                               fmt("%.2e", min_l) + ", excluded " + std::to_string(excluded)};
}

// 4: anisotropic Hardy on seeded bumps
Outcome hardy() {
  const double k[] = {hardy_constant(2.0), hardy_constant(1.5), hardy_constant(2.5), hardy_constant(3.0)};
  const double expect[] = {0.25, std::pow(1.0 / 3.0, 1.5), std::pow(0.6, 2.5), 8.0 / 27.0};
  bool constants = true;
  for (int i = 0; i < 4; ++i) constants = constants && std::fabs(k[i] - expect[i]) <= 1e-15;
  std::size_t passed = 0, total = 0;
  double min_margin_sigma = INFINITY;
  for (auto [g, p] : std::vector<std::pair<StratifiedGroup, ExponentVector>>{
           {make_euclidean(3), ExponentVector::uniform(3, 2.0)},
           {make_euclidean(4), ExponentVector({1.5, 2.0, 2.5, 3.0})}}) {
    Domain dom{cube(g.dim(), -1.5, 1.5), excise_hyperplanes(g, 0.05), "hardy"};
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto rep = verify_hardy_anisotropic(g, p, seeded_bump(g.dim(), 1000 + s), dom, mc(50000, s));
      ++total;
      passed += rep.passed();
      if (rep.combined_error > 0) min_margin_sigma = std::min(min_margin_sigma, rep.margin / rep.combined_error);
    }
  }
  return {constants && passed == total, std::to_string(passed) + "/" + std::to_string(total) +
                                            " pass, min margin/sigma = " + fmt("%.1f", min_margin_sigma) +
                                            (constants ? ", constants exact" : ", constants off")};
}

// 5: Rellich on R^5
Outcome rellich() {
  auto g = make_euclidean(5);
  Domain dom{cube(5, -1.5, 1.5), excise_hyperplanes(g, 0.05), "rellich"};
  std::size_t passed = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto rep = verify_rellich(g, ExponentVector::uniform(5, 2.0), {std::vector<double>(5, 2.5)},
                              seeded_bump(5, 2000 + s), dom, mc(50000, s));
    passed += rep.passed();
  }
  const bool c = rellich_constant(4.0, 2.0) == 24.0;
  return {passed == 20 && c, std::to_string(passed) + "/20 pass, C(4,2) = " + fmt("%g", rellich_constant(4.0, 2.0))};
}

// 6: rho^2 identities
Outcome rho_identities() {
  bool ok = true;
  double worst = 0.0, lap32 = NAN;
  for (auto [n, nb] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}, {3, 2}, {3, 3}, {4, 3}}) {
    ManyParticleConfig cfg(make_euclidean(nb), n);
    auto rep = check_rho_identities(cfg, halton_points(cube(cfg.group().dim(), -1, 1), 1000, 6));
    ok = ok && rep.passed();
    worst = std::max(worst, rep.max_abs_residual);
    if (n == 3 && nb == 2) lap32 = rep.diagnostic("sublaplacian_value");
  }
  ok = ok && std::fabs(lap32 - 24.0) <= 1e-9;
  return {ok, "max residual = " + fmt("%.2e", worst) + ", L rho^2 (n=3, N=2) = " + fmt("%.12g", lap32)};
}

// 7: ground-state representation and total separation
Outcome ground_state() {
  auto g = make_euclidean(3);
  auto u = fields::bump({0.1, 0.2, 0.0}, 0.6);
  Domain dom{cube(3, -1, 1), {}, "ground"};
  auto gs = verify_ground_state({g, poly("1 + x1^2 + x2^2 + x3^2"), 0.7}, u, dom, mc(500000, 21));
  ManyParticleConfig cfg(make_euclidean(2), 3);
  Domain pairs{cube(6, -1, 1), excise_pairs(cfg.group(), 0.05), "pairs"};
  auto ts = verify_total_separation(cfg, fields::bump({0.6, -0.6, -0.6, 0.6, 0.6, 0.6}, 0.3), pairs, mc(500000, 22));
  double collapse = 0.0;
  for (auto [f, a] : std::vector<std::pair<ScalarField, double>>{{poly("1 + x1^2"), 0.0}, {fields::constant(1.0), 0.7}}) {
    auto r = verify_ground_state({g, f, a}, u, dom, mc(20000, 23));
    collapse = std::max(collapse, std::fabs(r.margin) / r.lhs.value);
  }
  const bool ok = gs.passed() && ts.passed() && collapse <= 1e-12;
  return {ok, "ground state margin/sigma = " + fmt("%.2f", gs.margin / gs.combined_error) +
                  ", total separation margin/sigma = " + fmt("%.2f", ts.margin / ts.combined_error) +
                  ", collapse " + fmt("%.1e", collapse)};
}

// 8: several singularities
Outcome multi_singular() {
  auto g = make_euclidean(3);
  auto u = fields::bump({0.4, 0.3, 0.2}, 0.35);
  Domain d1 = with_points(g, cube(3, -1, 1), {{0, 0, 0}}, 0.05);
  auto q = mc(200000, 31);
  auto one = verify_hardy_multi_singular(g, SingularityList(g, {{0, 0, 0}}), u, d1, q);
  auto direct = detail::integrate_for(
      [&](std::span<const double> x, std::span<double> out) {
        const double uv = u(x);
        if (uv != 0.0) out[0] = 0.25 * uv * uv / (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      },
      1, d1, u, q);
  const double red = std::fabs(one.rhs.value - direct[0].value) / direct[0].value;
  std::vector<Point> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0.5}};
  bool multi = one.passed();
  for (std::size_t m : {2u, 3u}) {
    std::vector<Point> s(pts.begin(), pts.begin() + m);
    multi = multi && verify_hardy_multi_singular(g, SingularityList(g, s), fields::bump({0.5, 0.5, 0.2}, 0.3),
                                                 with_points(g, cube(3, -1, 2), s, 0.05), q)
                         .passed();
  }
  auto h = check_harmonicity_of_w(g, SingularityList(g, pts), halton_points(cube(3, -2, 2), 1000, 8));
  return {red <= 1e-10 && multi && h.max_abs_residual <= 1e-7,
          "m=1 rel diff = " + fmt("%.1e", red) + ", m=2,3 " + (multi ? "pass" : "fail") +
              ", harmonicity residual = " + fmt("%.1e", h.max_abs_residual)};
}

// 9: Gaussian weight
Outcome exponential() {
  auto g = make_euclidean(3);
  auto u = fields::bump({0.5, 0.5, 0.5}, 0.35);
  Domain open{cube(3, -1, 1), {}, "ibp"};
  Domain hyper{cube(3, -1, 1), excise_hyperplanes(g, 0.05), "exp"};
  bool ok = true;
  for (double lam : {0.25, 1.0}) {
    ok = ok && check_ibp_identity(g, {{0.1, 0.0, 0.0}, lam}, u, open, mc(200000, 41)).passed();
    ok = ok && verify_exponential_weight(g, {{0, 0, 0}, lam}, u, hyper, mc(200000, 42)).passed();
  }
  auto big = verify_exponential_weight(g, {{0, 0, 0}, 1e6}, u, hyper, mc(200000, 43));
  const double plain = big.diagnostics["plain_hardy_margin"].get<double>();
  const double sigma = big.diagnostics["plain_hardy_margin_std_error"].get<double>();
  const double gap = std::fabs(big.margin - plain);
  return {ok && gap <= 3 * sigma, std::string(ok ? "ibp and weight pass" : "ibp/weight failure") +
                                      ", |margin - plain| at lambda=1e6 = " + fmt("%.2e", gap) +
                                      " vs 3 sigma = " + fmt("%.2e", 3 * sigma)};
}

// 10: quadrature cross-check and determinism
Outcome quadrature() {
  auto g = make_euclidean(3);
  auto u = fields::bump({1, 1, 1}, 0.4);
  Domain dom{cube(3, 0.5, 1.5), {}, "hardy"};
  auto p = ExponentVector::uniform(3, 2.0);
  auto a = verify_hardy_anisotropic(g, p, u, dom, mc(200000, 51));
  auto b = verify_hardy_anisotropic(g, p, u, dom, {QuadMethod::gl, 0, 24, 0, 1});
  const double dl = std::fabs(a.lhs.value - b.lhs.value), el = std::hypot(a.lhs.std_error, b.lhs.std_error);
  const double dr = std::fabs(a.rhs.value - b.rhs.value), er = std::hypot(a.rhs.std_error, b.rhs.std_error);
  QuadConfig q4 = mc(200000, 51);
  q4.jobs = 4;
  const bool same = to_json(a).dump() == to_json(verify_hardy_anisotropic(g, p, u, dom, q4)).dump();
  return {dl <= 3 * el && dr <= 3 * er && same, "lhs gap/err = " + fmt("%.2f", dl / el) + ", rhs gap/err = " +
                                                    fmt("%.2f", dr / er) + (same ? ", bit-identical" : ", differs")};
}

// 11: the built-in suite
Outcome builtin_suite() {
  const auto t0 = Clock::now();
  SuiteOptions o;
  o.write_files = false;
  auto res = run_suite(emit_builtin_suite("paper-full"), o);
  const double secs = seconds_since(t0);
  std::size_t passed = 0;
  for (const auto& r : res.runs) passed += r.verdict == Verdict::pass;
  return {res.exit_code == 0 && secs < 600.0, std::to_string(passed) + "/" + std::to_string(res.runs.size()) +
                                                   " runs pass, exit " + std::to_string(res.exit_code) + ", " +
                                                   fmt("%.1f s", secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"picone identity, R^3 and H^1", picone_identity},
      {"picone equality case u = c v", picone_equality_case},
      {"second-order picone, concave v", second_order_identity},
      {"anisotropic hardy", hardy},
      {"anisotropic rellich", rellich},
      {"rho^2 identities", rho_identities},
      {"ground state and total separation", ground_state},
      {"multi-singular hardy", multi_singular},
      {"gaussian weight and ibp", exponential},
      {"mc vs gauss-legendre, determinism", quadrature},
      {"built-in suite paper-full", builtin_suite},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.ok;
    std::printf("%s %2zu %-36s %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
