// Pointwise checks on one group: group-law axioms and the Picone identity
// L = R >= 0 for seeded random (u, v) pairs. Prints a JSON report.

#include <algorithm>
#include <cmath>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "strata/strata.hpp"

namespace {

double max_diff(const strata::Point& a, const strata::Point& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::fabs(a[j] - b[j]));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Check group-law axioms and the Picone identity at sampled points"};
  std::string group_spec;
  std::size_t points = 1000, pairs = 10;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  app.add_option("--group", group_spec, "euclidean:N, heisenberg:n or product:<inner>:n")->required();
  app.add_option("--points", points, "sample points per check")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--pairs", pairs, "random (u, v) pairs")->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "residual tolerance");
  CLI11_PARSE(app, argc, argv);

  try {
    auto g = strata::StratifiedGroup::parse(group_spec);
    auto box = strata::cube(g.dim(), -1.0, 1.0);
    auto pts = strata::halton_points(box, points, seed);
    auto rng = strata::make_rng(seed, 0x9e);

    double assoc = 0.0, inv = 0.0, unit = 0.0, dil = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& a = pts[i];
      const auto& b = pts[(i + 1) % pts.size()];
      const auto& c = pts[(i + 7) % pts.size()];
      assoc = std::max(assoc, max_diff(g.product(g.product(a, b), c), g.product(a, g.product(b, c))));
      inv = std::max(inv, max_diff(g.product(a, g.inverse(a)), g.identity()));
      unit = std::max(unit, max_diff(g.product(a, g.identity()), a));
      const double lam = 0.5 + 1.5 * strata::unit_uniform(rng);
      dil = std::max(dil, max_diff(g.dilate(lam, g.product(a, b)), g.product(g.dilate(lam, a), g.dilate(lam, b))));
    }
    const bool law_ok = std::max({assoc, inv, unit, dil}) <= tol;

    nlohmann::json picone = nlohmann::json::array();
    bool picone_ok = true;
    for (std::size_t k = 0; k < pairs; ++k) {
      const std::uint64_t s = seed * 1000 + k;
      auto p = strata::random_exponents(g.first_dim(), s);
      auto rep = strata::check_picone(g, p, strata::random_picone_pair(g, s), pts, {tol, tol},
                                      strata::PiconeOrder::first, s);
      picone_ok = picone_ok && rep.passed();
      auto j = strata::to_json(rep);
      j["p"] = p.values();
      picone.push_back(j);
    }

    nlohmann::json out = {{"group", g.spec()},
                          {"points", points},
                          {"seed", seed},
                          {"group_law",
                           {{"associativity", assoc}, {"inverse", inv}, {"identity", unit}, {"dilation", dil}}},
                          {"picone", picone},
                          {"verdict", law_ok && picone_ok ? "pass" : "fail"}};
    std::cout << out.dump(2) << "\n";
    return law_ok && picone_ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
