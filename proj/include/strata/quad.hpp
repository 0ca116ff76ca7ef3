#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "strata/error.hpp"
#include "strata/field.hpp"
#include "strata/group.hpp"
#include "strata/sampling.hpp"

namespace strata {

/// Removes {x : |P x - c| < epsilon} from a box. Hyperplane: P picks one
/// coordinate, c = 0. Point: P picks first-stratum coordinates, c = a'.
/// Pair: P x = x'_i - x'_j for two factors of a product group.
struct Excision {
  enum class Type { hyperplane, point, pair };

  Type type = Type::hyperplane;
  std::vector<std::size_t> coords;
  std::vector<std::size_t> coords_b;
  std::vector<double> center;
  double epsilon = 0.0;

  static Excision hyperplane(std::size_t coord, double eps) { return {Type::hyperplane, {coord}, {}, {}, eps}; }
  static Excision point(std::vector<std::size_t> coords, std::vector<double> center, double eps) {
    return {Type::point, std::move(coords), {}, std::move(center), eps};
  }
  static Excision pair(std::vector<std::size_t> a, std::vector<std::size_t> b, double eps) {
    return {Type::pair, std::move(a), std::move(b), {}, eps};
  }

  double distance(std::span<const double> x) const {
    switch (type) {
      case Type::hyperplane: return std::fabs(x[coords[0]]);
      case Type::point: {
        double s = 0.0;
        for (std::size_t m = 0; m < coords.size(); ++m) {
          double z = x[coords[m]] - center[m];
          s += z * z;
        }
        return std::sqrt(s);
      }
      case Type::pair: {
        double s = 0.0;
        for (std::size_t m = 0; m < coords.size(); ++m) {
          double z = x[coords[m]] - x[coords_b[m]];
          s += z * z;
        }
        return std::sqrt(s);
      }
    }
    return 0.0;
  }

  bool removes(std::span<const double> x) const { return distance(x) < epsilon; }

  /// True when no point of the box lies in the removed set.
  bool clear_of(const Box& b) const {
    auto gap = [](double lo, double hi) { return lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0); };
    double s = 0.0;
    switch (type) {
      case Type::hyperplane: return gap(b.lo[coords[0]], b.hi[coords[0]]) >= epsilon;
      case Type::point:
        for (std::size_t m = 0; m < coords.size(); ++m) {
          double z = gap(b.lo[coords[m]] - center[m], b.hi[coords[m]] - center[m]);
          s += z * z;
        }
        return std::sqrt(s) >= epsilon;
      case Type::pair:
        for (std::size_t m = 0; m < coords.size(); ++m) {
          double z = gap(b.lo[coords[m]] - b.hi[coords_b[m]], b.hi[coords[m]] - b.lo[coords_b[m]]);
          s += z * z;
        }
        return std::sqrt(s) >= epsilon;
    }
    return false;
  }

  std::string type_name() const {
    switch (type) {
      case Type::hyperplane: return "hyperplane";
      case Type::point: return "point";
      case Type::pair: return "pair";
    }
    return "?";
  }
};

struct Domain {
  Box box;
  std::vector<Excision> excisions;
  std::string label;

  std::size_t dim() const { return box.dim(); }

  bool contains(std::span<const double> x) const {
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] < box.lo[j] || x[j] > box.hi[j]) return false;
    for (const auto& e : excisions)
      if (e.removes(x)) return false;
    return true;
  }

  /// Whether a closed box sits inside the box and clear of every excision.
  bool holds_compactly(const Box& b) const {
    if (!box.contains(b)) return false;
    return std::all_of(excisions.begin(), excisions.end(), [&](const Excision& e) { return e.clear_of(b); });
  }

  /// The same region intersected with a box (used to skip where u vanishes).
  Domain restricted(const Box& b) const {
    Domain d = *this;
    d.box = box.intersect(b);
    return d;
  }

  /// Checks bounds, epsilons and (by rejection sampling) that measure remains.
  void validate(std::uint64_t seed = 7) const {
    require(box.lo.size() == box.hi.size() && !box.lo.empty(), ErrorKind::invalid_argument, "domain box malformed");
    for (std::size_t j = 0; j < box.dim(); ++j)
      require(box.lo[j] < box.hi[j], ErrorKind::invalid_argument,
              "domain bound lo < hi violated on coordinate " + std::to_string(j));
    for (const auto& e : excisions) {
      require(e.epsilon > 0.0, ErrorKind::invalid_argument, "excision epsilon must be positive");
      for (std::size_t c : e.coords) require(c < box.dim(), ErrorKind::invalid_argument, "excision coordinate out of range");
      for (std::size_t c : e.coords_b)
        require(c < box.dim(), ErrorKind::invalid_argument, "excision coordinate out of range");
    }
    auto rng = make_rng(seed, 0xd0);
    Point x(box.dim());
    for (int i = 0; i < 4096; ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = box.lo[j] + unit_uniform(rng) * (box.hi[j] - box.lo[j]);
      if (contains(x)) return;
    }
    fail(ErrorKind::degenerate_domain, "no sampled point survives the excisions of domain '" + label + "'");
  }
};

/// Excise |x'_i| >= eps for every first-stratum coordinate.
inline std::vector<Excision> excise_hyperplanes(const StratifiedGroup& g, double eps) {
  std::vector<Excision> out;
  for (std::size_t i = 0; i < g.first_dim(); ++i) out.push_back(Excision::hyperplane(i, eps));
  return out;
}

/// Excise |x' - a'| >= eps around the first-stratum part of a.
inline Excision excise_point(const StratifiedGroup& g, std::span<const double> a, double eps) {
  std::vector<std::size_t> idx(g.first_dim());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  return Excision::point(std::move(idx), {a.begin(), a.begin() + static_cast<std::ptrdiff_t>(g.first_dim())}, eps);
}

/// Excise |x'_i - x'_j| >= eps for all factor pairs of a product group.
inline std::vector<Excision> excise_pairs(const StratifiedGroup& g, double eps) {
  std::vector<Excision> out;
  const std::size_t n = g.factors(), nb = g.factor().first_dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<std::size_t> a(nb), b(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        a[k] = g.factor_coord(i, 0, k);
        b[k] = g.factor_coord(j, 0, k);
      }
      out.push_back(Excision::pair(std::move(a), std::move(b), eps));
    }
  return out;
}

struct QuadratureResult {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_evals = 0;
  std::string method;
};

enum class QuadMethod { mc, gl };

struct QuadConfig {
  QuadMethod method = QuadMethod::mc;
  std::size_t n = 200000;   // MC samples
  std::size_t nodes = 8;    // GL nodes per axis
  std::uint64_t seed = 1;
  std::size_t jobs = 1;     // worker threads; results do not depend on it
};

/// Writes K integrand components at x.
using Integrand = std::function<void(std::span<const double> x, std::span<double> out)>;

struct MultiQuadrature {
  std::vector<QuadratureResult> components;
  std::size_t n_accepted = 0;
  double acceptance = 0.0;

  const QuadratureResult& operator[](std::size_t k) const { return components[k]; }
};

namespace detail {

struct Moments {
  std::size_t count = 0;
  std::vector<double> mean, m2;

  explicit Moments(std::size_t k = 0) : mean(k, 0.0), m2(k, 0.0) {}

  void add(std::span<const double> v) {
    ++count;
    for (std::size_t k = 0; k < v.size(); ++k) {
      double d = v[k] - mean[k];
      mean[k] += d / static_cast<double>(count);
      m2[k] += d * (v[k] - mean[k]);
    }
  }

  void merge(const Moments& o) {
    if (o.count == 0) return;
    const double na = static_cast<double>(count), nb = static_cast<double>(o.count), n = na + nb;
    for (std::size_t k = 0; k < mean.size(); ++k) {
      double d = o.mean[k] - mean[k];
      mean[k] += d * nb / n;
      m2[k] += o.m2[k] + d * d * na * nb / n;
    }
    count += o.count;
  }
};

inline constexpr std::size_t mc_chunk = 4096;

}  // namespace detail

/// Plain Monte Carlo over the box; excised points contribute zero. Samples
/// come in fixed chunks with their own streams and are merged in chunk order,
/// so the result depends on (seed, n) only.
inline MultiQuadrature integrate_mc(const Integrand& f, std::size_t components, const Domain& dom, std::size_t n,
                                    std::uint64_t seed, std::size_t jobs = 1) {
  require(n >= 100, ErrorKind::invalid_argument, "Monte Carlo needs n >= 100");
  const std::size_t d = dom.dim();
  const std::size_t chunks = (n + detail::mc_chunk - 1) / detail::mc_chunk;
  std::vector<detail::Moments> stats(chunks, detail::Moments(components));
  std::vector<std::size_t> accepted(chunks, 0);
  std::vector<std::exception_ptr> errors(chunks);

  auto run_chunk = [&](std::size_t c) {
    try {
      auto rng = make_rng(seed, c);
      const std::size_t begin = c * detail::mc_chunk, end = std::min(n, begin + detail::mc_chunk);
      Point x(d);
      std::vector<double> out(components), zero(components, 0.0);
      for (std::size_t s = begin; s < end; ++s) {
        for (std::size_t j = 0; j < d; ++j) x[j] = dom.box.lo[j] + unit_uniform(rng) * (dom.box.hi[j] - dom.box.lo[j]);
        if (!dom.contains(x)) {
          stats[c].add(zero);
          continue;
        }
        std::fill(out.begin(), out.end(), 0.0);
        f(x, out);
        for (double v : out)
          if (!std::isfinite(v)) fail(ErrorKind::non_finite, "integrand is not finite at a sample point");
        stats[c].add(out);
        ++accepted[c];
      }
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  jobs = std::max<std::size_t>(1, std::min(jobs, chunks));
  if (jobs == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t c = t; c < chunks; c += jobs) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  detail::Moments total(components);
  std::size_t acc = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    total.merge(stats[c]);
    acc += accepted[c];
  }
  MultiQuadrature out;
  out.n_accepted = acc;
  out.acceptance = static_cast<double>(acc) / static_cast<double>(n);
  if (out.acceptance < 0.01)
    fail(ErrorKind::degenerate_domain, "Monte Carlo acceptance " + std::to_string(out.acceptance) + " below 1%");
  const double vol = dom.box.volume();
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k < components; ++k) {
    double var = total.m2[k] / (nn - 1.0);
    out.components.push_back({vol * total.mean[k], vol * std::sqrt(var / nn), n, "mc"});
  }
  return out;
}

inline QuadratureResult integrate_mc(const std::function<double(std::span<const double>)>& f, const Domain& dom,
                                     std::size_t n, std::uint64_t seed, std::size_t jobs = 1) {
  auto r = integrate_mc([&](std::span<const double> x, std::span<double> out) { out[0] = f(x); }, 1, dom, n, seed,
                        jobs);
  return r.components[0];
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes, weights;

  explicit GaussLegendre(std::size_t n) : nodes(n), weights(n) {
    require(n >= 1, ErrorKind::invalid_argument, "Gauss-Legendre needs at least one node");
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * static_cast<double>(k) - 1.0) * z * p1 - (static_cast<double>(k) - 1.0) * p2) /
               static_cast<double>(k);
        }
        dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
        double dz = p0 / dp;
        z -= dz;
        if (std::fabs(dz) < 1e-16) break;
      }
      // recompute derivative at the converged node
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * static_cast<double>(k) - 1.0) * z * p1 - (static_cast<double>(k) - 1.0) * p2) /
             static_cast<double>(k);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      nodes[i] = -z;
      nodes[n - 1 - i] = z;
      weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

namespace detail {

/// Splits each axis around hyperplane excisions into admissible intervals.
inline std::vector<std::vector<std::pair<double, double>>> axis_pieces(const Domain& dom) {
  std::vector<std::vector<std::pair<double, double>>> pieces(dom.dim());
  for (std::size_t j = 0; j < dom.dim(); ++j) pieces[j] = {{dom.box.lo[j], dom.box.hi[j]}};
  for (const auto& e : dom.excisions) {
    if (e.type != Excision::Type::hyperplane)
      fail(ErrorKind::unsupported_excision, e.type_name() + " excision is not axis-representable; use Monte Carlo");
    auto& axis = pieces[e.coords[0]];
    std::vector<std::pair<double, double>> next;
    for (auto [a, b] : axis) {
      if (a < -e.epsilon) next.emplace_back(a, std::min(b, -e.epsilon));
      if (b > e.epsilon) next.emplace_back(std::max(a, e.epsilon), b);
    }
    axis = std::move(next);
  }
  return pieces;
}

inline std::vector<double> tensor_gl(const Integrand& f, std::size_t components, const Domain& dom, std::size_t nodes,
                                     std::size_t& evals) {
  const std::size_t d = dom.dim();
  GaussLegendre rule(nodes);
  auto pieces = axis_pieces(dom);
  // flatten (piece, node) per axis into abscissae and weights
  std::vector<std::vector<double>> xs(d), ws(d);
  for (std::size_t j = 0; j < d; ++j)
    for (auto [a, b] : pieces[j]) {
      if (!(b > a)) continue;
      const double h = 0.5 * (b - a), m = 0.5 * (a + b);
      for (std::size_t q = 0; q < nodes; ++q) {
        xs[j].push_back(m + h * rule.nodes[q]);
        ws[j].push_back(h * rule.weights[q]);
      }
    }
  std::vector<double> sum(components, 0.0), out(components);
  for (std::size_t j = 0; j < d; ++j)
    if (xs[j].empty()) return sum;
  std::vector<std::size_t> idx(d, 0);
  Point x(d);
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = xs[j][idx[j]];
      w *= ws[j][idx[j]];
    }
    std::fill(out.begin(), out.end(), 0.0);
    f(x, out);
    ++evals;
    for (std::size_t k = 0; k < components; ++k) sum[k] += w * out[k];
    std::size_t j = 0;
    while (j < d && ++idx[j] == xs[j].size()) idx[j++] = 0;
    if (j == d) break;
  }
  return sum;
}

}  // namespace detail

/// Tensor Gauss-Legendre with hyperplane excisions split into sub-boxes. The
/// error estimate compares against the rule with half as many nodes.
inline MultiQuadrature integrate_gl(const Integrand& f, std::size_t components, const Domain& dom,
                                    std::size_t nodes_per_axis) {
  require(dom.dim() <= 6, ErrorKind::invalid_argument, "tensor Gauss-Legendre limited to d <= 6");
  require(nodes_per_axis >= 2, ErrorKind::invalid_argument, "Gauss-Legendre needs >= 2 nodes per axis");
  std::size_t evals = 0;
  auto fine = detail::tensor_gl(f, components, dom, nodes_per_axis, evals);
  auto coarse = detail::tensor_gl(f, components, dom, nodes_per_axis / 2, evals);
  MultiQuadrature out;
  out.n_accepted = evals;
  out.acceptance = 1.0;
  for (std::size_t k = 0; k < components; ++k) {
    require(std::isfinite(fine[k]), ErrorKind::non_finite, "Gauss-Legendre integral is not finite");
    out.components.push_back({fine[k], std::fabs(fine[k] - coarse[k]), evals, "gl"});
  }
  return out;
}

inline QuadratureResult integrate_gl(const std::function<double(std::span<const double>)>& f, const Domain& dom,
                                     std::size_t nodes_per_axis) {
  auto r = integrate_gl([&](std::span<const double> x, std::span<double> out) { out[0] = f(x); }, 1, dom,
                        nodes_per_axis);
  return r.components[0];
}

inline MultiQuadrature integrate(const Integrand& f, std::size_t components, const Domain& dom,
                                 const QuadConfig& cfg) {
  if (cfg.method == QuadMethod::gl) return integrate_gl(f, components, dom, cfg.nodes);
  return integrate_mc(f, components, dom, cfg.n, cfg.seed, cfg.jobs);
}

}  // namespace strata
