#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "strata/dual.hpp"
#include "strata/error.hpp"

namespace strata {

enum class Smoothness { c1, c2 };
enum class SignClass { unrestricted, nonnegative, positive };

/// Axis-aligned box; used for domains and for declared field supports.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const { return lo.size(); }
  double volume() const {
    double v = 1.0;
    for (std::size_t j = 0; j < lo.size(); ++j) v *= std::max(0.0, hi[j] - lo[j]);
    return v;
  }
  bool empty() const {
    for (std::size_t j = 0; j < lo.size(); ++j)
      if (!(lo[j] < hi[j])) return true;
    return false;
  }
  bool contains(const Box& inner) const {
    for (std::size_t j = 0; j < lo.size(); ++j)
      if (inner.lo[j] < lo[j] || inner.hi[j] > hi[j]) return false;
    return true;
  }
  Box intersect(const Box& o) const {
    Box b = *this;
    for (std::size_t j = 0; j < lo.size(); ++j) {
      b.lo[j] = std::max(lo[j], o.lo[j]);
      b.hi[j] = std::min(hi[j], o.hi[j]);
    }
    return b;
  }
  std::vector<double> center() const {
    std::vector<double> c(lo.size());
    for (std::size_t j = 0; j < lo.size(); ++j) c[j] = 0.5 * (lo[j] + hi[j]);
    return c;
  }
};

/// Element type of a span-like argument inside generic field lambdas.
template <class S>
using scalar_of = std::remove_cvref_t<decltype(std::declval<S>()[0])>;

/// A pure map R^d -> R evaluable on doubles and on first/second-order jets.
class ScalarField {
 public:
  struct Info {
    std::string name;
    Smoothness smoothness = Smoothness::c2;
    SignClass sign = SignClass::unrestricted;
    std::optional<Box> support;  // closed box outside which the field vanishes
    int max_depth = 2;           // deepest jet level the field accepts
  };

  ScalarField() = default;

  /// Wraps a generic callable `f(std::span<const T>) -> T`.
  template <class F>
  static ScalarField make(Info info, F f) {
    auto impl = std::make_shared<Impl>();
    impl->info = std::move(info);
    impl->info.max_depth = 2;
    impl->f0 = [f](std::span<const double> x) { return f(x); };
    impl->f1 = [f](std::span<const Jet1> x) { return f(x); };
    impl->f2 = [f](std::span<const Jet2> x) { return f(x); };
    return ScalarField(std::move(impl));
  }

  /// As make(), for callables that themselves differentiate once internally.
  template <class F>
  static ScalarField make_depth1(Info info, F f) {
    auto impl = std::make_shared<Impl>();
    impl->info = std::move(info);
    impl->info.max_depth = 1;
    impl->f0 = [f](std::span<const double> x) { return f(x); };
    impl->f1 = [f](std::span<const Jet1> x) { return f(x); };
    impl->f2 = [name = impl->info.name](std::span<const Jet2>) -> Jet2 {
      fail(ErrorKind::unsupported, "field '" + name + "' supports only first-order jets");
    };
    return ScalarField(std::move(impl));
  }

  double operator()(std::span<const double> x) const { return impl().f0(x); }
  Jet1 operator()(std::span<const Jet1> x) const { return impl().f1(x); }
  Jet2 operator()(std::span<const Jet2> x) const { return impl().f2(x); }

  template <class T>
  T eval(std::span<const T> x) const {
    return (*this)(x);
  }

  const Info& info() const { return impl().info; }
  const std::string& name() const { return impl().info.name; }
  Smoothness smoothness() const { return impl().info.smoothness; }
  SignClass sign() const { return impl().info.sign; }
  const std::optional<Box>& support() const { return impl().info.support; }
  int max_depth() const { return impl().info.max_depth; }
  bool valid() const { return static_cast<bool>(impl_); }

 private:
  struct Impl {
    Info info;
    std::function<double(std::span<const double>)> f0;
    std::function<Jet1(std::span<const Jet1>)> f1;
    std::function<Jet2(std::span<const Jet2>)> f2;
  };

  explicit ScalarField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  const Impl& impl() const {
    require(valid(), ErrorKind::invalid_argument, "empty scalar field");
    return *impl_;
  }

  std::shared_ptr<const Impl> impl_;
};

/// Components (V_1, ..., V_N) of a horizontal vector field.
using HorizontalVectorField = std::vector<ScalarField>;

// Catalog --------------------------------------------------------------------

namespace fields {

inline ScalarField zero(std::size_t dim) {
  return ScalarField::make({"zero", Smoothness::c2, SignClass::nonnegative, Box{std::vector<double>(dim, 0.0),
                                                                               std::vector<double>(dim, 0.0)}},
                           [](auto x) { return scalar_of<decltype(x)>(0.0); });
}

inline ScalarField constant(double c) {
  return ScalarField::make({"constant", Smoothness::c2, c > 0 ? SignClass::positive : SignClass::unrestricted},
                           [c](auto x) { return scalar_of<decltype(x)>(c); });
}

/// amplitude * exp(-1/(1-s)), s = sum ((x_j - c_j)/r_j)^2, extended by zero.
inline ScalarField bump(std::vector<double> center, std::vector<double> radius, double amplitude = 1.0) {
  require(center.size() == radius.size(), ErrorKind::dimension_mismatch, "bump center/radius size mismatch");
  for (double r : radius) require(r > 0.0, ErrorKind::invalid_argument, "bump radius must be positive");
  Box support{center, center};
  for (std::size_t j = 0; j < center.size(); ++j) {
    support.lo[j] -= radius[j];
    support.hi[j] += radius[j];
  }
  return ScalarField::make(
      {"bump", Smoothness::c2, SignClass::nonnegative, support},
      [center = std::move(center), radius = std::move(radius), amplitude](auto x) {
        using T = scalar_of<decltype(x)>;
        T s(0.0);
        for (std::size_t j = 0; j < center.size(); ++j) {
          T z = (x[j] - center[j]) / radius[j];
          s += z * z;
        }
        if (value_of(s) >= 1.0) return T(0.0);
        T g = 1.0 / (1.0 - s);
        // exp(-700) is below every derivative scale we evaluate
        if (value_of(g) > 700.0) return T(0.0);
        return amplitude * exp(-g);
      });
}

inline ScalarField bump(std::vector<double> center, double radius, double amplitude = 1.0) {
  std::vector<double> r(center.size(), radius);
  return bump(std::move(center), std::move(r), amplitude);
}

inline ScalarField gauss(std::vector<double> center, double sigma, double amplitude = 1.0) {
  require(sigma > 0.0, ErrorKind::invalid_argument, "gauss sigma must be positive");
  return ScalarField::make({"gauss", Smoothness::c2, SignClass::positive},
                           [center = std::move(center), sigma, amplitude](auto x) {
                             using T = scalar_of<decltype(x)>;
                             T s(0.0);
                             for (std::size_t j = 0; j < center.size(); ++j) {
                               T z = x[j] - center[j];
                               s += z * z;
                             }
                             return amplitude * exp(-s / (2.0 * sigma * sigma));
                           });
}

/// prod_j |x_{index_j}|^{alpha_j}; smooth off the coordinate hyperplanes.
inline ScalarField power(std::vector<std::size_t> index, std::vector<double> alpha) {
  require(index.size() == alpha.size(), ErrorKind::dimension_mismatch, "power field index/alpha mismatch");
  return ScalarField::make({"power", Smoothness::c2, SignClass::nonnegative},
                           [index = std::move(index), alpha = std::move(alpha)](auto x) {
                             using T = scalar_of<decltype(x)>;
                             T v(1.0);
                             for (std::size_t j = 0; j < index.size(); ++j) v *= abs_power(x[index[j]], alpha[j]);
                             return v;
                           });
}

/// Pointwise product; the support is the intersection of the declared ones.
inline ScalarField product(const ScalarField& a, const ScalarField& b) {
  std::optional<Box> support = a.support();
  if (b.support()) support = support ? support->intersect(*b.support()) : *b.support();
  const bool c2 = a.smoothness() == Smoothness::c2 && b.smoothness() == Smoothness::c2;
  SignClass sign = SignClass::unrestricted;
  if (a.sign() != SignClass::unrestricted && b.sign() != SignClass::unrestricted)
    sign = a.sign() == SignClass::positive && b.sign() == SignClass::positive ? SignClass::positive
                                                                              : SignClass::nonnegative;
  return ScalarField::make({a.name() + "*" + b.name(), c2 ? Smoothness::c2 : Smoothness::c1, sign, support},
                           [a, b](auto x) {
                             using T = scalar_of<decltype(x)>;
                             return a.eval<T>(x) * b.eval<T>(x);
                           });
}

/// Polynomial as a list of monomials coef * prod x_j^{e_j}.
struct Monomial {
  double coef = 0.0;
  std::vector<std::pair<std::size_t, unsigned>> factors;  // (coordinate, exponent)
};

inline ScalarField polynomial(std::vector<Monomial> terms, std::string name = "poly") {
  return ScalarField::make({std::move(name), Smoothness::c2, SignClass::unrestricted},
                           [terms = std::move(terms)](auto x) {
                             using T = scalar_of<decltype(x)>;
                             T sum(0.0);
                             for (const auto& m : terms) {
                               T t(m.coef);
                               for (auto [j, e] : m.factors)
                                 for (unsigned r = 0; r < e; ++r) t *= x[j];
                               sum += t;
                             }
                             return sum;
                           });
}

/// Parses "c*x1^2*x3 + c2*x2 - 3": 1-based coordinate indices.
inline std::vector<Monomial> parse_polynomial(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ') s.push_back(ch);
  require(!s.empty(), ErrorKind::invalid_argument, "empty polynomial");
  std::vector<Monomial> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    double sign = 1.0;
    if (s[pos] == '+' || s[pos] == '-') {
      if (s[pos] == '-') sign = -1.0;
      ++pos;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') {
      // allow exponents like 1e-3 inside coefficients
      if ((s[end] == 'e' || s[end] == 'E') && end + 1 < s.size() && (s[end + 1] == '-' || s[end + 1] == '+')) ++end;
      ++end;
    }
    std::string term = s.substr(pos, end - pos);
    require(!term.empty(), ErrorKind::invalid_argument, "malformed polynomial '" + std::string(text) + "'");
    Monomial m;
    m.coef = sign;
    std::size_t q = 0;
    while (q <= term.size()) {
      std::size_t star = term.find('*', q);
      std::string fac = term.substr(q, star == std::string::npos ? std::string::npos : star - q);
      require(!fac.empty(), ErrorKind::invalid_argument, "malformed polynomial '" + std::string(text) + "'");
      if (fac[0] == 'x') {
        std::size_t caret = fac.find('^');
        std::size_t idx = std::stoul(fac.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
        unsigned e = caret == std::string::npos ? 1u : static_cast<unsigned>(std::stoul(fac.substr(caret + 1)));
        require(idx >= 1, ErrorKind::invalid_argument, "polynomial coordinates are 1-based");
        m.factors.emplace_back(idx - 1, e);
      } else {
        m.coef *= std::stod(fac);
      }
      if (star == std::string::npos) break;
      q = star + 1;
    }
    out.push_back(std::move(m));
    pos = end;
  }
  return out;
}

}  // namespace fields
}  // namespace strata
