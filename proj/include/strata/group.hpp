#pragma once

// Stratified groups in exponential coordinates: Euclidean R^N, Heisenberg H^n
// and n-fold products. Coordinates are grouped stratum by stratum; in a
// product group stratum l is the concatenation of the factors' l-th strata.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "strata/error.hpp"

namespace strata {

using Point = std::vector<double>;

class StratifiedGroup {
 public:
  enum class Kind { euclidean, heisenberg, product };

  Kind kind() const { return kind_; }
  const std::string& spec() const { return spec_; }

  std::size_t dim() const { return dim_; }
  std::size_t step() const { return strata_.size(); }
  const std::vector<std::size_t>& strata_sizes() const { return strata_; }
  /// N, the first-stratum dimension.
  std::size_t first_dim() const { return strata_.front(); }
  std::size_t homogeneous_dim() const {
    std::size_t q = 0;
    for (std::size_t l = 0; l < strata_.size(); ++l) q += (l + 1) * strata_[l];
    return q;
  }
  std::size_t stratum_offset(std::size_t l) const {
    return std::accumulate(strata_.begin(), strata_.begin() + static_cast<std::ptrdiff_t>(l), std::size_t{0});
  }

  /// Factor count for product groups, 1 otherwise.
  std::size_t factors() const { return kind_ == Kind::product ? copies_ : 1; }
  /// The repeated factor of a product group (the group itself otherwise).
  const StratifiedGroup& factor() const { return kind_ == Kind::product ? *base_ : *this; }

  // Construction -------------------------------------------------------------

  static StratifiedGroup euclidean(std::size_t n) {
    require(n >= 1, ErrorKind::invalid_argument, "euclidean group needs N >= 1");
    StratifiedGroup g;
    g.kind_ = Kind::euclidean;
    g.dim_ = n;
    g.strata_ = {n};
    g.spec_ = "euclidean:" + std::to_string(n);
    return g;
  }

  static StratifiedGroup heisenberg(std::size_t n) {
    require(n >= 1, ErrorKind::invalid_argument, "heisenberg group needs n >= 1");
    StratifiedGroup g;
    g.kind_ = Kind::heisenberg;
    g.half_ = n;
    g.dim_ = 2 * n + 1;
    g.strata_ = {2 * n, 1};
    g.spec_ = "heisenberg:" + std::to_string(n);
    return g;
  }

  static StratifiedGroup product(const StratifiedGroup& base, std::size_t n) {
    require(n >= 1, ErrorKind::invalid_argument, "product group needs n >= 1");
    StratifiedGroup g;
    g.kind_ = Kind::product;
    g.base_ = std::make_shared<const StratifiedGroup>(base);
    g.copies_ = n;
    g.dim_ = base.dim() * n;
    for (std::size_t s : base.strata_sizes()) g.strata_.push_back(s * n);
    g.spec_ = "product:" + base.spec() + ":" + std::to_string(n);
    return g;
  }

  /// Parses "euclidean:N", "heisenberg:n" or "product:<inner>:n".
  static StratifiedGroup parse(std::string_view spec) {
    auto parse_count = [&](std::string_view s) {
      std::size_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      require(ec == std::errc() && ptr == s.data() + s.size(), ErrorKind::invalid_argument,
              "bad integer '" + std::string(s) + "' in group spec '" + std::string(spec) + "'");
      return v;
    };
    if (spec.starts_with("euclidean:")) return euclidean(parse_count(spec.substr(10)));
    if (spec.starts_with("heisenberg:")) return heisenberg(parse_count(spec.substr(11)));
    if (spec.starts_with("product:")) {
      auto rest = spec.substr(8);
      auto colon = rest.rfind(':');
      require(colon != std::string_view::npos, ErrorKind::invalid_argument,
              "product spec needs ':<n>' suffix: '" + std::string(spec) + "'");
      return product(parse(rest.substr(0, colon)), parse_count(rest.substr(colon + 1)));
    }
    fail(ErrorKind::invalid_argument, "unknown group spec '" + std::string(spec) + "'");
  }

  // Coordinates of product factors ------------------------------------------

  /// Global index of coordinate m of stratum l belonging to factor i.
  std::size_t factor_coord(std::size_t i, std::size_t l, std::size_t m) const {
    if (kind_ != Kind::product) return stratum_offset(l) + m;
    return stratum_offset(l) + i * base_->strata_sizes()[l] + m;
  }

  template <class T>
  std::vector<T> factor_point(std::span<const T> x, std::size_t i) const {
    if (kind_ != Kind::product) return {x.begin(), x.end()};
    std::vector<T> out(base_->dim());
    std::size_t pos = 0;
    const auto& bs = base_->strata_sizes();
    for (std::size_t l = 0; l < bs.size(); ++l)
      for (std::size_t m = 0; m < bs[l]; ++m) out[pos++] = x[factor_coord(i, l, m)];
    return out;
  }

  template <class T>
  void set_factor_point(std::span<T> x, std::size_t i, std::span<const T> part) const {
    if (kind_ != Kind::product) {
      std::copy(part.begin(), part.end(), x.begin());
      return;
    }
    std::size_t pos = 0;
    const auto& bs = base_->strata_sizes();
    for (std::size_t l = 0; l < bs.size(); ++l)
      for (std::size_t m = 0; m < bs[l]; ++m) x[factor_coord(i, l, m)] = part[pos++];
  }

  Point assemble(std::span<const Point> parts) const {
    require(parts.size() == factors(), ErrorKind::dimension_mismatch, "factor count mismatch");
    Point x(dim_);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      require(parts[i].size() == factor().dim(), ErrorKind::dimension_mismatch, "factor point has wrong size");
      set_factor_point<double>(x, i, parts[i]);
    }
    return x;
  }

  // Vector fields ------------------------------------------------------------

  /// Coefficients c_k(x) with X_k = sum_j c_k(x)_j d/dx_j.
  template <class T>
  void field_coeffs(std::size_t k, std::span<const T> x, std::span<T> out) const {
    for (auto& c : out) c = T(0.0);
    switch (kind_) {
      case Kind::euclidean:
        out[k] = T(1.0);
        return;
      case Kind::heisenberg: {
        const std::size_t n = half_;
        out[k] = T(1.0);
        if (k < n)
          out[2 * n] = -0.5 * x[n + k];  // X_i = d_xi - (y_i/2) d_t
        else
          out[2 * n] = 0.5 * x[k - n];  // Y_i = d_yi + (x_i/2) d_t
        return;
      }
      case Kind::product: {
        const std::size_t nb = base_->first_dim();
        const std::size_t i = k / nb;
        auto part = factor_point<T>(x, i);
        std::vector<T> c(base_->dim());
        base_->field_coeffs<T>(k % nb, part, c);
        set_factor_point<T>(out, i, c);
        return;
      }
    }
  }

  std::vector<double> field_coeffs(std::size_t k, std::span<const double> x) const {
    check_point(x);
    require(k < first_dim(), ErrorKind::invalid_argument, "field index out of range");
    std::vector<double> out(dim_);
    field_coeffs<double>(k, x, out);
    return out;
  }

  // Group law ----------------------------------------------------------------

  template <class T>
  void multiply(std::span<const T> a, std::span<const T> b, std::span<T> out) const {
    switch (kind_) {
      case Kind::euclidean:
        for (std::size_t j = 0; j < dim_; ++j) out[j] = a[j] + b[j];
        return;
      case Kind::heisenberg: {
        const std::size_t n = half_;
        T t = a[2 * n] + b[2 * n];
        for (std::size_t i = 0; i < n; ++i) t += 0.5 * (a[i] * b[n + i] - a[n + i] * b[i]);
        for (std::size_t j = 0; j < 2 * n; ++j) out[j] = a[j] + b[j];
        out[2 * n] = t;
        return;
      }
      case Kind::product: {
        std::vector<T> c(base_->dim());
        for (std::size_t i = 0; i < copies_; ++i) {
          auto pa = factor_point<T>(a, i);
          auto pb = factor_point<T>(b, i);
          base_->multiply<T>(pa, pb, c);
          set_factor_point<T>(out, i, c);
        }
        return;
      }
    }
  }

  template <class T>
  void invert(std::span<const T> a, std::span<T> out) const {
    switch (kind_) {
      case Kind::euclidean:
      case Kind::heisenberg:
        for (std::size_t j = 0; j < dim_; ++j) out[j] = -a[j];
        return;
      case Kind::product: {
        std::vector<T> c(base_->dim());
        for (std::size_t i = 0; i < copies_; ++i) {
          auto pa = factor_point<T>(a, i);
          base_->invert<T>(pa, c);
          set_factor_point<T>(out, i, c);
        }
        return;
      }
    }
  }

  Point product(const Point& a, const Point& b) const {
    check_point(a);
    check_point(b);
    Point out(dim_);
    multiply<double>(a, b, out);
    return out;
  }

  Point inverse(const Point& a) const {
    check_point(a);
    Point out(dim_);
    invert<double>(a, out);
    return out;
  }

  Point identity() const { return Point(dim_, 0.0); }

  /// delta_lambda: stratum l coordinates scale by lambda^l.
  Point dilate(double lambda, const Point& a) const {
    check_point(a);
    Point out(a);
    std::size_t off = 0;
    for (std::size_t l = 0; l < strata_.size(); ++l) {
      const double s = std::pow(lambda, static_cast<double>(l + 1));
      for (std::size_t m = 0; m < strata_[l]; ++m) out[off + m] *= s;
      off += strata_[l];
    }
    return out;
  }

  template <class T>
  std::span<const T> first_stratum(std::span<const T> x) const {
    return x.first(first_dim());
  }
  std::vector<double> first_stratum(const Point& x) const {
    check_point(x);
    return {x.begin(), x.begin() + static_cast<std::ptrdiff_t>(first_dim())};
  }

  void check_point(std::span<const double> x) const {
    require(x.size() == dim_, ErrorKind::dimension_mismatch,
            "point of size " + std::to_string(x.size()) + " given to " + spec_ + " (dim " + std::to_string(dim_) + ")");
  }

 private:
  StratifiedGroup() = default;

  Kind kind_ = Kind::euclidean;
  std::string spec_;
  std::size_t dim_ = 0;
  std::vector<std::size_t> strata_;
  std::size_t half_ = 0;
  std::shared_ptr<const StratifiedGroup> base_;
  std::size_t copies_ = 0;
};

inline StratifiedGroup make_euclidean(std::size_t n) { return StratifiedGroup::euclidean(n); }
inline StratifiedGroup make_heisenberg(std::size_t n) { return StratifiedGroup::heisenberg(n); }
inline StratifiedGroup make_product_group(const StratifiedGroup& g, std::size_t n) {
  return StratifiedGroup::product(g, n);
}
inline Point group_inverse(const StratifiedGroup& g, const Point& a) { return g.inverse(a); }

/// First-stratum part of x * a^{-1}, evaluated through the group law.
template <class T>
std::vector<T> right_difference_first(const StratifiedGroup& g, std::span<const T> x, std::span<const double> a) {
  std::vector<T> ainv(g.dim()), at(a.begin(), a.end()), prod(g.dim());
  g.invert<T>(at, ainv);
  g.multiply<T>(x, ainv, prod);
  prod.resize(g.first_dim());
  return prod;
}

}  // namespace strata
