#pragma once

// JSON suite descriptions: parsing with path diagnostics, dispatch to the
// verifiers, report files and the built-in suites.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "strata/strata.hpp"
#include "strata/verify/registry.hpp"

namespace strata {

using nlohmann::json;

/// Malformed suite: carries the path (e.g. runs[2].p) or line of the fault.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SuiteConfig {
  std::string name;
  std::vector<json> runs;
};

struct SuiteOptions {
  std::size_t jobs = 1;
  bool allow_inconclusive = false;
  std::filesystem::path out_dir = "strata-reports";
  bool write_files = true;
};

struct RunOutcome {
  std::size_t index = 0;
  std::string theorem;
  json record;
  Verdict verdict = Verdict::fail;
  double margin = 0.0;
  double band = 0.0;  // 3 * combined_error
  std::string error;
};

struct SuiteResult {
  std::vector<RunOutcome> runs;
  std::string summary;
  int exit_code = 0;
};

namespace detail {

/// Path-aware view into a JSON document.
class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  [[noreturn]] void error(const std::string& msg) const { throw ConfigError(path_ + ": " + msg); }

  const json& raw() const { return *j_; }
  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  Node at(const std::string& key) const {
    if (!j_->is_object()) error("expected an object");
    auto it = j_->find(key);
    if (it == j_->end()) error("missing required key '" + key + "'");
    return Node(*it, path_ + "." + key);
  }
  Node at(std::size_t i) const {
    if (!j_->is_array() || i >= j_->size()) error("index out of range");
    return Node((*j_)[i], path_ + "[" + std::to_string(i) + "]");
  }
  std::size_t size() const {
    if (!j_->is_array()) error("expected an array");
    return j_->size();
  }

  double number() const {
    if (!j_->is_number()) error("expected a number");
    return j_->get<double>();
  }
  std::size_t count() const {
    if (!j_->is_number_integer() || j_->get<long long>() < 0) error("expected a non-negative integer");
    return j_->get<std::size_t>();
  }
  std::string string() const {
    if (!j_->is_string()) error("expected a string");
    return j_->get<std::string>();
  }
  bool boolean() const {
    if (!j_->is_boolean()) error("expected true or false");
    return j_->get<bool>();
  }
  std::vector<double> numbers() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).number());
    return out;
  }
  std::vector<double> numbers(std::size_t expected) const {
    auto v = numbers();
    if (v.size() != expected)
      error("expected " + std::to_string(expected) + " numbers, got " + std::to_string(v.size()));
    return v;
  }

  double number_or(const std::string& key, double fallback) const { return has(key) ? at(key).number() : fallback; }
  std::size_t count_or(const std::string& key, std::size_t fallback) const {
    return has(key) ? at(key).count() : fallback;
  }
  std::string string_or(const std::string& key, std::string fallback) const {
    return has(key) ? at(key).string() : fallback;
  }

  /// Runs f, prefixing library errors with this node's path.
  template <class F>
  auto guard(F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      error(e.what());
    } catch (const std::invalid_argument& e) {
      error(std::string("malformed value (") + e.what() + ")");
    } catch (const std::out_of_range& e) {
      error(std::string("value out of range (") + e.what() + ")");
    }
  }

 private:
  const json* j_;
  std::string path_;
};

inline StratifiedGroup parse_group(const Node& n) {
  return n.guard([&] { return StratifiedGroup::parse(n.string()); });
}

inline ScalarField parse_field(const Node& n, std::size_t dim) {
  if (n.raw().is_string()) {
    const std::string s = n.string();
    if (s == "zero") return fields::zero(dim);
    if (s.rfind("poly:", 0) == 0) return n.guard([&] { return fields::polynomial(fields::parse_polynomial(s.substr(5))); });
    if (s.rfind("power:", 0) == 0) {
      std::vector<double> alpha;
      std::stringstream ss(s.substr(6));
      for (std::string tok; std::getline(ss, tok, ',');) alpha.push_back(n.guard([&] { return std::stod(tok); }));
      if (alpha.empty() || alpha.size() > dim) n.error("power:<a_1,...,a_k> needs 1 to " + std::to_string(dim) + " exponents");
      std::vector<std::size_t> index(alpha.size());
      for (std::size_t j = 0; j < index.size(); ++j) index[j] = j;
      return fields::power(index, alpha);
    }
    if (s.rfind("const:", 0) == 0) return n.guard([&] { return fields::constant(std::stod(s.substr(6))); });
    n.error("unknown field '" + s + "' (expected zero, poly:<expr>, power:<a,...>, const:<c> or an object)");
  }
  const std::string type = n.at("type").string();
  if (type == "zero") return fields::zero(dim);
  if (type == "constant") return fields::constant(n.at("value").number());
  if (type == "poly") return n.guard([&] { return fields::polynomial(fields::parse_polynomial(n.at("expr").string())); });
  if (type == "bump" || type == "gauss") {
    auto center = n.at("center").numbers(dim);
    const double amp = n.number_or("amplitude", 1.0);
    if (type == "gauss") return n.guard([&] { return fields::gauss(center, n.at("sigma").number(), amp); });
    Node r = n.at("radius");
    auto radius = r.raw().is_array() ? r.numbers(dim) : std::vector<double>(dim, r.number());
    return n.guard([&] { return fields::bump(center, radius, amp); });
  }
  if (type == "power") {
    auto idx = n.at("index").numbers();
    auto alpha = n.at("alpha").numbers(idx.size());
    std::vector<std::size_t> index;
    for (double i : idx) {
      if (i < 1 || i > static_cast<double>(dim) || i != std::floor(i)) n.at("index").error("1-based coordinate expected");
      index.push_back(static_cast<std::size_t>(i) - 1);
    }
    return fields::power(index, alpha);
  }
  if (type == "product") {
    Node fs = n.at("factors");
    if (fs.size() == 0) fs.error("product needs at least one factor");
    ScalarField f = parse_field(fs.at(0), dim);
    for (std::size_t i = 1; i < fs.size(); ++i) f = fields::product(f, parse_field(fs.at(i), dim));
    return f;
  }
  n.at("type").error("unknown field type '" + type + "'");
}

inline std::vector<Point> parse_points(const Node& n, std::size_t dim) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(n.at(i).numbers(dim));
  return out;
}

/// {"cube": [lo, hi]} or {"box": {"lo": [...], "hi": [...]}}, plus "excise":
/// a list of {"type": t, "epsilon": e} with t one of hyperplanes (every x'_i),
/// hyperplane ("index": 1-based), point ("center": [...]), pairs or
/// singularities. A missing epsilon defaults to 0.05 of the smallest box half-width.
inline Domain parse_domain(const Node& n, const StratifiedGroup& g, const std::vector<Point>& singularities = {}) {
  const std::size_t d = g.dim();
  Domain dom;
  dom.label = n.string_or("label", "");
  if (n.has("cube")) {
    auto c = n.at("cube").numbers(2);
    dom.box = cube(d, c[0], c[1]);
  } else {
    Node b = n.at("box");
    dom.box = Box{b.at("lo").numbers(d), b.at("hi").numbers(d)};
  }
  for (std::size_t j = 0; j < d; ++j)
    if (!(dom.box.lo[j] < dom.box.hi[j])) n.error("box needs lo < hi on coordinate " + std::to_string(j + 1));
  double half = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < d; ++j) half = std::min(half, 0.5 * (dom.box.hi[j] - dom.box.lo[j]));
  if (n.has("excise")) {
    Node ex = n.at("excise");
    for (std::size_t i = 0; i < ex.size(); ++i) {
      Node e = ex.at(i);
      const std::string type = e.at("type").string();
      const double eps = e.number_or("epsilon", 0.05 * half);
      if (!(eps > 0.0)) e.at("epsilon").error("epsilon must be positive");
      if (type == "hyperplanes") {
        for (auto& h : excise_hyperplanes(g, eps)) dom.excisions.push_back(h);
      } else if (type == "hyperplane") {
        const std::size_t idx = e.at("index").count();
        if (idx < 1 || idx > g.first_dim()) e.at("index").error("1-based first-stratum index expected");
        dom.excisions.push_back(Excision::hyperplane(idx - 1, eps));
      } else if (type == "point") {
        auto a = e.at("center").numbers(d);
        dom.excisions.push_back(excise_point(g, a, eps));
      } else if (type == "singularities") {
        if (singularities.empty()) e.error("no singularities declared for this run");
        for (const auto& a : singularities) dom.excisions.push_back(excise_point(g, a, eps));
      } else if (type == "pairs") {
        if (g.kind() != StratifiedGroup::Kind::product) e.error("pair excision needs a many-particle run");
        for (auto& p : excise_pairs(g, eps)) dom.excisions.push_back(p);
      } else {
        e.at("type").error("unknown excision type '" + type + "'");
      }
    }
  }
  n.guard([&] { dom.validate(); });
  return dom;
}

inline QuadConfig parse_quadrature(const Node& run) {
  QuadConfig q;
  if (!run.has("quadrature")) return q;
  Node n = run.at("quadrature");
  const std::string method = n.string_or("method", "mc");
  if (method == "mc") q.method = QuadMethod::mc;
  else if (method == "gl") q.method = QuadMethod::gl;
  else n.at("method").error("method must be mc or gl");
  q.n = n.count_or("n", q.n);
  q.nodes = n.count_or("nodes", q.nodes);
  q.seed = n.count_or("seed", q.seed);
  if (q.method == QuadMethod::mc && q.n < 100) n.at("n").error("Monte Carlo needs n >= 100");
  return q;
}

inline json quadrature_echo(const QuadConfig& q) {
  if (q.method == QuadMethod::gl) return {{"method", "gl"}, {"n", q.nodes}, {"seed", q.seed}};
  return {{"method", "mc"}, {"n", q.n}, {"seed", q.seed}};
}

inline ExponentVector parse_exponents(const Node& n, std::size_t expected) {
  auto p = n.numbers(expected);
  return n.guard([&] { return ExponentVector(p); });
}

/// Identity checks reuse the report layout: lhs = tolerance, rhs = residual.
inline VerificationReport identity_as_report(const IdentityReport& r, std::string theorem) {
  VerificationReport out;
  out.theorem = std::move(theorem);
  out.relation = Relation::inequality;
  out.lhs = {r.tolerance, 0.0, r.sample_size, "pointwise"};
  out.rhs = {r.max_abs_residual, 0.0, r.sample_size, "pointwise"};
  out.margin = r.tolerance - r.max_abs_residual;
  out.verdict = r.verdict;
  out.diagnostics = to_json(r);
  out.notes = r.notes;
  return out;
}

inline std::vector<Point> sample_in(const Domain& dom, std::size_t count, std::uint64_t seed) {
  std::vector<Point> out;
  for (auto& x : halton_points(dom.box, count, seed))
    if (dom.contains(x)) out.push_back(std::move(x));
  return out;
}

/// A run checked against its verifier's signature, ready to execute.
struct PreparedRun {
  std::string theorem;
  json echo;  // group, params, domain, quadrature
  std::function<VerificationReport()> exec;
};

using RunBuilder = std::function<PreparedRun(const Node&)>;

inline PreparedRun make_run(const Node& run, const std::string& group, json quad,
                            std::function<VerificationReport()> f) {
  PreparedRun pr;
  pr.theorem = run.at("theorem").string();
  json params = run.raw();
  params.erase("theorem");
  params.erase("domain");
  params.erase("quadrature");
  pr.echo = {{"group", group},
             {"params", params},
             {"domain", run.has("domain") ? run.raw()["domain"] : json(nullptr)},
             {"quadrature", std::move(quad)}};
  pr.exec = std::move(f);
  return pr;
}

inline json pointwise_echo(std::size_t points, std::uint64_t seed) {
  return {{"method", "pointwise"}, {"n", points}, {"seed", seed}};
}

inline const std::map<std::string, RunBuilder>& suite_dispatch() {
  static const std::map<std::string, RunBuilder> table = {
      {"picone",
       [](const Node& run) {
         auto g = parse_group(run.at("group"));
         auto p = parse_exponents(run.at("p"), g.first_dim());
         auto u = parse_field(run.at("u"), g.dim());
         auto v = parse_field(run.at("v"), g.dim());
         auto dom = parse_domain(run.at("domain"), g);
         const std::size_t points = run.count_or("points", 10000);
         const std::uint64_t seed = run.count_or("seed", 1);
         const std::string order = run.string_or("order", "both");
         if (order != "first" && order != "second" && order != "both")
           run.at("order").error("order must be first, second or both");
         PiconeTolerance tol;
         if (run.has("tolerance")) {
           tol.residual = run.at("tolerance").number_or("residual", tol.residual);
           tol.nonneg = run.at("tolerance").number_or("nonneg", tol.nonneg);
         }
         return make_run(run, run.at("group").string(), pointwise_echo(points, seed), [=] {
           auto pts = sample_in(dom, points, seed);
           PiconePair pair{u, v};
           std::vector<IdentityReport> reps;
           if (order != "second") reps.push_back(check_picone(g, p, pair, pts, tol, PiconeOrder::first, seed));
           if (order != "first") reps.push_back(check_picone(g, p, pair, pts, tol, PiconeOrder::second, seed));
           IdentityReport all = reps.front();
           for (const auto& r : reps) {
             all.max_abs_residual = std::max(all.max_abs_residual, r.max_abs_residual);
             all.min_value = std::min(*all.min_value, *r.min_value);
             all.excluded_count = std::max(all.excluded_count, r.excluded_count);
             if (r.verdict != Verdict::pass) all.verdict = r.verdict;
           }
           auto rep = identity_as_report(all, "picone");
           rep.diagnostics = json::object();
           for (const auto& r : reps) rep.diagnostics[r.check] = to_json(r);
           return rep;
         });
       }},
      {"hardy",
       [](const Node& run) {
         auto g = parse_group(run.at("group"));
         auto p = parse_exponents(run.at("p"), g.first_dim());
         auto u = parse_field(run.at("u"), g.dim());
         auto dom = parse_domain(run.at("domain"), g);
         auto q = parse_quadrature(run);
         return make_run(run, run.at("group").string(), quadrature_echo(q), [=] { return verify_hardy_anisotropic(g, p, u, dom, q); });
       }},
      {"rellich",
       [](const Node& run) {
         auto g = parse_group(run.at("group"));
         auto p = parse_exponents(run.at("p"), g.first_dim());
         RellichParams rp{run.at("alpha").numbers(g.first_dim())};
         auto u = parse_field(run.at("u"), g.dim());
         auto dom = parse_domain(run.at("domain"), g);
         auto q = parse_quadrature(run);
         return make_run(run, run.at("group").string(), quadrature_echo(q), [=] { return verify_rellich(g, p, rp, u, dom, q); });
       }},
      {"hardy_multi",
       [](const Node& run) {
         auto g = parse_group(run.at("group"));
         auto pts = parse_points(run.at("singularities"), g.dim());
         auto sing = run.at("singularities").guard([&] { return SingularityList(g, pts); });
         auto u = parse_field(run.at("u"), g.dim());
         auto dom = parse_domain(run.at("domain"), g, pts);
         auto q = parse_quadrature(run);
         return make_run(run, run.at("group").string(), quadrature_echo(q),
                         [=] { return verify_hardy_multi_singular(g, sing, u, dom, q); });
       }},
      {"uncertainty",
       [](const Node& run) {
         auto g = parse_group(run.at("group"));
         auto pts = parse_points(run.at("singularities"), g.dim());
         auto sing = run.at("singularities").guard([&] { return SingularityList(g, pts); });
         auto u = parse_field(run.at("u"), g.dim());
         auto dom = parse_domain(run.at("domain"), g, pts);
         auto q = parse_quadrature(run);
         return make_run(run, run.at("group").string(), quadrature_echo(q), [=] { return verify_uncertainty(g, sing, u, dom, q); });
       }},
      {"harmonicity",
       [](const Node& run) {
         auto g = parse_group(run.at("group"));
         auto pts = parse_points(run.at("singularities"), g.dim());
         auto sing = run.at("singularities").guard([&] { return SingularityList(g, pts); });
         auto dom = parse_domain(run.at("domain"), g, pts);
         const std::size_t points = run.count_or("points", 1000);
         const std::uint64_t seed = run.count_or("seed", 1);
         const double tol = run.has("tolerance") ? run.at("tolerance").number_or("residual", 1e-7) : 1e-7;
         return make_run(run, run.at("group").string(), pointwise_echo(points, seed), [=] {
           return identity_as_report(check_harmonicity_of_w(g, sing, sample_in(dom, points, seed), tol, seed),
                                     "harmonicity");
         });
       }},
      {"lemma_3_1",
       [](const Node& run) {
         auto g = parse_group(run.at("group"));
         if (g.kind() != StratifiedGroup::Kind::euclidean) run.at("group").error("lemma_3_1 is stated on R^m");
         auto u = parse_field(run.at("u"), g.dim());
         Node fn = run.at("field");
         const std::string type = fn.at("type").string();
         HorizontalVectorField a;
         if (type == "constant") {
           a = vector_fields::constant(fn.at("value").numbers(g.dim()));
         } else if (type == "radial") {
           a = vector_fields::radial(fn.at("center").numbers(g.dim()));
         } else if (type == "log_gradient") {
           auto pts = parse_points(fn.at("singularities"), g.dim());
           a = fn.guard([&] { return vector_fields::log_gradient({g, SingularityList(g, pts)}); });
         } else {
           fn.at("type").error("field type must be constant, radial or log_gradient");
         }
         auto dom = parse_domain(run.at("domain"), g);
         auto q = parse_quadrature(run);
         return make_run(run, run.at("group").string(), quadrature_echo(q), [=] { return check_lemma_3_1(dom, a, u, q); });
       }},
      {"many_particle",
       [](const Node& run) {
         auto base = parse_group(run.at("group"));
         auto cfg = run.guard([&] { return ManyParticleConfig(base, run.at("particles").count()); });
         auto u = parse_field(run.at("u"), cfg.group().dim());
         auto dom = parse_domain(run.at("domain"), cfg.group());
         auto q = parse_quadrature(run);
         return make_run(run, run.at("group").string(), quadrature_echo(q), [=] { return verify_many_particle(cfg, u, dom, q); });
       }},
      {"rho_identities",
       [](const Node& run) {
         auto base = parse_group(run.at("group"));
         auto cfg = run.guard([&] { return ManyParticleConfig(base, run.at("particles").count()); });
         auto dom = parse_domain(run.at("domain"), cfg.group());
         const std::size_t points = run.count_or("points", 1000);
         const std::uint64_t seed = run.count_or("seed", 1);
         const double tol = run.has("tolerance") ? run.at("tolerance").number_or("residual", 1e-9) : 1e-9;
         return make_run(run, run.at("group").string(), pointwise_echo(points, seed), [=] {
           return identity_as_report(check_rho_identities(cfg, sample_in(dom, points, seed), tol, seed),
                                     "rho_identities");
         });
       }},
      {"ground_state",
       [](const Node& run) {
         auto g = parse_group(run.at("group"));
         GroundStateParams gp{g, parse_field(run.at("f"), g.dim()), run.at("alpha").number()};
         auto u = parse_field(run.at("u"), g.dim());
         auto dom = parse_domain(run.at("domain"), g);
         auto q = parse_quadrature(run);
         return make_run(run, run.at("group").string(), quadrature_echo(q), [=] { return verify_ground_state(gp, u, dom, q); });
       }},
      {"total_separation",
       [](const Node& run) {
         auto base = parse_group(run.at("group"));
         auto cfg = run.guard([&] { return ManyParticleConfig(base, run.at("particles").count()); });
         auto u = parse_field(run.at("u"), cfg.group().dim());
         auto dom = parse_domain(run.at("domain"), cfg.group());
         auto q = parse_quadrature(run);
         return make_run(run, run.at("group").string(), quadrature_echo(q), [=] { return verify_total_separation(cfg, u, dom, q); });
       }},
      {"exp_weight",
       [](const Node& run) {
         auto g = parse_group(run.at("group"));
         ExponentialWeightParams ep{run.at("x0").numbers(g.dim()), run.at("lambda").number()};
         auto u = parse_field(run.at("u"), g.dim());
         auto dom = parse_domain(run.at("domain"), g);
         auto q = parse_quadrature(run);
         return make_run(run, run.at("group").string(), quadrature_echo(q),
                         [=] { return verify_exponential_weight(g, ep, u, dom, q); });
       }},
      {"ibp_identity",
       [](const Node& run) {
         auto g = parse_group(run.at("group"));
         ExponentialWeightParams ep{run.at("x0").numbers(g.dim()), run.at("lambda").number()};
         auto u = parse_field(run.at("u"), g.dim());
         auto dom = parse_domain(run.at("domain"), g);
         auto q = parse_quadrature(run);
         return make_run(run, run.at("group").string(), quadrature_echo(q), [=] { return check_ibp_identity(g, ep, u, dom, q); });
       }},
      {"hardy_sharpness",
       [](const Node& run) {
         auto p = parse_exponents(run.at("p"), run.at("p").size());
         auto deltas = run.at("deltas").numbers();
         auto q = parse_quadrature(run);
         return make_run(run, "euclidean:" + std::to_string(p.size()), quadrature_echo(q), [=] {
           auto t = sharpness_probe("hardy", p, deltas, q);
           VerificationReport rep;
           rep.theorem = "hardy_sharpness";
           rep.verdict = t.verdict;
           json rows = json::array();
           double worst = std::numeric_limits<double>::infinity();
           for (const auto& r : t.rows) {
             rows.push_back({{"delta", r.delta}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"ratio", r.ratio},
                             {"ratio_error", r.ratio_error}});
             // margin in units of the ratio: ratio - 1
             if (r.ratio - 1.0 + sigma_rule * r.ratio_error < worst) {
               worst = r.ratio - 1.0 + sigma_rule * r.ratio_error;
               rep.margin = r.ratio - 1.0;
               rep.combined_error = r.ratio_error;
               rep.lhs = {r.ratio, r.ratio_error, q.n, "ratio"};
               rep.rhs = {1.0, 0.0, q.n, "ratio"};
             }
           }
           rep.diagnostics = {{"rows", rows}, {"trend", t.trend}};
           rep.notes.push_back("lhs is the smallest LHS/RHS ratio over the delta sweep");
           return rep;
         });
       }},
  };
  return table;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string format_row(const std::string& a, const std::string& b, const std::string& c, const std::string& d) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-18s | %14s | %12s | %s\n", a.c_str(), b.c_str(), c.c_str(), d.c_str());
  return buf;
}

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

}  // namespace detail

/// Parses suite text; syntax errors report line and column.
inline SuiteConfig parse_suite(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": JSON syntax error");
  }
  detail::Node root(doc, "suite");
  SuiteConfig cfg;
  cfg.name = root.string_or("name", "");
  detail::Node runs = root.at("runs");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    detail::Node r = runs.at(i);
    if (!r.raw().is_object()) r.error("each run must be an object");
    cfg.runs.push_back(r.raw());
  }
  return cfg;
}

inline SuiteConfig load_suite(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read suite file '" + file.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_suite(ss.str());
}

inline json to_json(const SuiteConfig& cfg) { return {{"name", cfg.name}, {"runs", cfg.runs}}; }

/// Type-checks every run against its verifier before anything is evaluated.
inline std::vector<detail::PreparedRun> prepare_suite(const SuiteConfig& cfg) {
  const auto& table = detail::suite_dispatch();
  std::vector<detail::PreparedRun> out;
  for (std::size_t i = 0; i < cfg.runs.size(); ++i) {
    detail::Node run(cfg.runs[i], "runs[" + std::to_string(i) + "]");
    const std::string tag = run.at("theorem").string();
    auto it = table.find(tag);
    if (it == table.end()) run.at("theorem").error("unknown theorem tag '" + tag + "'");
    out.push_back(it->second(run));
  }
  return out;
}

inline SuiteResult run_suite(const SuiteConfig& cfg, const SuiteOptions& opt = {}) {
  auto prepared = prepare_suite(cfg);
  SuiteResult res;
  res.runs.resize(prepared.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < prepared.size(); i = next++) {
      const auto& pr = prepared[i];
      RunOutcome& o = res.runs[i];
      o.index = i;
      o.theorem = pr.theorem;
      json rec = {{"theorem", pr.theorem}};
      rec.update(pr.echo);
      try {
        auto rep = pr.exec();
        rec["lhs"] = to_json(rep.lhs);
        rec["rhs"] = to_json(rep.rhs);
        rec["margin"] = rep.margin;
        rec["combined_error"] = rep.combined_error;
        rec["verdict"] = std::string(to_string(rep.verdict));
        rec["relation"] = rep.relation == Relation::equality ? "equality" : "inequality";
        rec["derived"] = rep.params;
        rec["diagnostics"] = rep.diagnostics;
        rec["notes"] = rep.notes;
        o.verdict = rep.verdict;
        o.margin = rep.margin;
        o.band = sigma_rule * rep.combined_error;
      } catch (const std::exception& e) {
        o.error = e.what();
        o.verdict = Verdict::fail;
        rec["verdict"] = "fail";
        rec["error"] = o.error;
        rec["notes"] = json::array();
      }
      o.record = std::move(rec);
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, prepared.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const std::string stamp = detail::utc_timestamp();
  std::string summary = detail::format_row("theorem", "margin", "3sigma", "verdict");
  bool ok = true;
  for (auto& o : res.runs) {
    o.record["timestamp"] = stamp;
    const bool passed = o.verdict == Verdict::pass || (opt.allow_inconclusive && o.verdict == Verdict::inconclusive);
    ok = ok && passed;
    std::string verdict(to_string(o.verdict));
    if (!o.error.empty()) verdict = "fail (error: " + o.error + ")";
    summary += detail::format_row(o.theorem, o.error.empty() ? detail::sci(o.margin) : "-",
                                  o.error.empty() ? detail::sci(o.band) : "-", verdict);
  }
  res.summary = summary;
  res.exit_code = ok ? 0 : 1;

  if (opt.write_files) {
    std::filesystem::create_directories(opt.out_dir);
    for (const auto& o : res.runs) {
      char name[64];
      std::snprintf(name, sizeof name, "%03zu_%s.json", o.index, o.theorem.c_str());
      std::ofstream(opt.out_dir / name) << o.record.dump(2) << "\n";
    }
    std::ofstream(opt.out_dir / "summary.txt") << summary;
  }
  return res;
}

// Built-in suites -------------------------------------------------------------

namespace detail {

inline json bump(std::vector<double> center, double radius) {
  return {{"type", "bump"}, {"center", center}, {"radius", radius}};
}

inline json cube_domain(double lo, double hi, json excise = json::array()) {
  return {{"cube", {lo, hi}}, {"excise", std::move(excise)}};
}

inline json mc(std::size_t n, std::uint64_t seed) { return {{"method", "mc"}, {"n", n}, {"seed", seed}}; }

inline std::map<std::string, json> builtin_runs() {
  std::map<std::string, json> r;
  r["picone"] = {{"theorem", "picone"},
                 {"group", "heisenberg:1"},
                 {"p", {1.5, 3.0}},
                 {"u", {{"type", "product"},
                        {"factors", {"poly:0.3 + x1^2 + 0.5*x2^2",
                                     {{"type", "gauss"}, {"center", {0.1, 0.0, 0.0}}, {"sigma", 0.8}}}}}},
                 {"v", "poly:2 - 0.1*x1^2 - 0.1*x2^2"},
                 {"domain", cube_domain(-1.0, 1.0)},
                 {"points", 10000},
                 {"seed", 3},
                 {"order", "both"},
                 {"tolerance", {{"residual", 1e-8}, {"nonneg", 1e-10}}}};
  r["hardy"] = {{"theorem", "hardy"},
                {"group", "euclidean:3"},
                {"p", {2.0, 2.0, 2.0}},
                {"u", bump({1, 1, 1}, 0.4)},
                {"domain", cube_domain(0.5, 1.5, {{{"type", "hyperplanes"}, {"epsilon", 0.1}}})},
                {"quadrature", mc(200000, 11)}};
  r["rellich"] = {{"theorem", "rellich"},
                  {"group", "euclidean:5"},
                  {"p", {2.0, 2.0, 2.0, 2.0, 2.0}},
                  {"alpha", {2.5, 2.5, 2.5, 2.5, 2.5}},
                  {"u", bump({1, 1, 1, 1, 1}, 0.4)},
                  {"domain", cube_domain(0.5, 1.5, {{{"type", "hyperplanes"}, {"epsilon", 0.1}}})},
                  {"quadrature", mc(200000, 12)}};
  r["hardy_multi"] = {{"theorem", "hardy_multi"},
                      {"group", "euclidean:3"},
                      {"singularities", {{0, 0, 0}, {1, 0, 0}}},
                      {"u", bump({0.5, 0.5, 0}, 0.3)},
                      {"domain", cube_domain(-1.0, 2.0, {{{"type", "singularities"}, {"epsilon", 0.1}}})},
                      {"quadrature", mc(200000, 13)}};
  r["uncertainty"] = {{"theorem", "uncertainty"},
                      {"group", "euclidean:3"},
                      {"singularities", {{0, 0, 0}}},
                      {"u", bump({0.5, 0.5, 0.5}, 0.4)},
                      {"domain", cube_domain(-1.0, 2.0, {{{"type", "singularities"}, {"epsilon", 0.1}}})},
                      {"quadrature", mc(200000, 14)}};
  r["harmonicity"] = {{"theorem", "harmonicity"},
                      {"group", "euclidean:3"},
                      {"singularities", {{0, 0, 0}, {1, 0.5, 0}, {-0.5, 1, 0.5}}},
                      {"domain", cube_domain(-2.0, 2.0, {{{"type", "singularities"}, {"epsilon", 0.05}}})},
                      {"points", 1000},
                      {"seed", 5}};
  r["lemma_3_1"] = {{"theorem", "lemma_3_1"},
                    {"group", "euclidean:3"},
                    {"field", {{"type", "radial"}, {"center", {0, 0, 0}}}},
                    {"u", bump({0.5, 0.5, 0}, 0.3)},
                    {"domain", cube_domain(-1.0, 1.0, {{{"type", "point"}, {"center", {0, 0, 0}}, {"epsilon", 0.1}}})},
                    {"quadrature", mc(200000, 15)}};
  r["many_particle"] = {{"theorem", "many_particle"},
                        {"group", "euclidean:3"},
                        {"particles", 3},
                        {"u", bump({0, 0, 0, 1, 0, 0, 0, 1, 0}, 0.3)},
                        {"domain", cube_domain(-0.5, 1.5, {{{"type", "pairs"}, {"epsilon", 0.1}}})},
                        {"quadrature", mc(200000, 16)}};
  r["rho_identities"] = {{"theorem", "rho_identities"},
                         {"group", "heisenberg:1"},
                         {"particles", 3},
                         {"domain", cube_domain(-1.0, 1.0)},
                         {"points", 1000},
                         {"seed", 6}};
  r["ground_state"] = {{"theorem", "ground_state"},
                       {"group", "euclidean:3"},
                       {"f", "poly:1 + x1^2 + x2^2 + x3^2"},
                       {"alpha", 0.7},
                       {"u", bump({0.3, 0.2, 0.1}, 0.5)},
                       {"domain", cube_domain(-1.0, 1.5)},
                       {"quadrature", mc(500000, 17)}};
  r["total_separation"] = {{"theorem", "total_separation"},
                           {"group", "euclidean:2"},
                           {"particles", 3},
                           {"u", bump({0, 0, 1, 0, 0, 1}, 0.3)},
                           {"domain", cube_domain(-0.5, 1.5, {{{"type", "pairs"}, {"epsilon", 0.1}}})},
                           {"quadrature", mc(500000, 18)}};
  r["exp_weight"] = {{"theorem", "exp_weight"},
                     {"group", "euclidean:3"},
                     {"x0", {1, 1, 1}},
                     {"lambda", 1.0},
                     {"u", bump({1, 1, 1}, 0.4)},
                     {"domain", cube_domain(0.5, 1.5, {{{"type", "hyperplanes"}, {"epsilon", 0.1}}})},
                     {"quadrature", mc(200000, 19)}};
  r["ibp_identity"] = {{"theorem", "ibp_identity"},
                       {"group", "euclidean:3"},
                       {"x0", {1, 1, 1}},
                       {"lambda", 0.25},
                       {"u", bump({1, 1, 1}, 0.4)},
                       {"domain", cube_domain(0.5, 1.5)},
                       {"quadrature", mc(200000, 20)}};
  return r;
}

}  // namespace detail

inline std::vector<std::string> builtin_suite_names() { return {"paper-full", "identities-only", "smoke"}; }

inline SuiteConfig emit_builtin_suite(const std::string& name) {
  auto runs = detail::builtin_runs();
  std::vector<std::string> tags;
  if (name == "paper-full") {
    tags = {"picone",         "hardy",        "rellich",          "hardy_multi", "uncertainty",
            "harmonicity",    "lemma_3_1",    "many_particle",    "rho_identities",
            "ground_state",   "total_separation", "exp_weight",   "ibp_identity"};
  } else if (name == "identities-only") {
    tags = {"picone", "rho_identities", "ground_state", "total_separation", "ibp_identity"};
  } else if (name == "smoke") {
    tags = {"picone", "hardy", "rho_identities"};
    runs["picone"]["points"] = 1000;
    runs["hardy"]["quadrature"]["n"] = 50000;
  } else {
    throw ConfigError("unknown built-in suite '" + name + "'");
  }
  SuiteConfig cfg{name, {}};
  for (const auto& t : tags) cfg.runs.push_back(runs.at(t));
  return cfg;
}

}  // namespace strata
