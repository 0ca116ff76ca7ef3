#pragma once

// Forward-mode jets. Dual<T> carries a value and one directional derivative;
// nesting Dual<Dual<double>> yields exact second directional derivatives.

#include <cmath>
#include <type_traits>

namespace strata {

template <class T>
struct Dual {
  T val{};
  T eps{};

  constexpr Dual() = default;
  constexpr Dual(double c) : val(c), eps(0.0) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(const T& v, const T& e) : val(v), eps(e) {}
  constexpr Dual(const T& v)  // NOLINT(google-explicit-constructor)
    requires(!std::is_same_v<T, double>)
      : val(v), eps(0.0) {}
};

using Jet1 = Dual<double>;
using Jet2 = Dual<Jet1>;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

/// Innermost real value of a (possibly nested) jet.
constexpr double value_of(double x) { return x; }
template <class T>
constexpr double value_of(const Dual<T>& x) {
  return value_of(x.val);
}

// Arithmetic -----------------------------------------------------------------

template <class T>
constexpr Dual<T> operator+(const Dual<T>& a) {
  return a;
}
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a) {
  return {-a.val, -a.eps};
}
template <class T>
constexpr Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.val + b.val, a.eps + b.eps};
}
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.val - b.val, a.eps - b.eps};
}
template <class T>
constexpr Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.val * b.val, a.eps * b.val + a.val * b.eps};
}
template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T inv = 1.0 / b.val;
  T q = a.val * inv;
  return {q, (a.eps - q * b.eps) * inv};
}

template <class T>
constexpr Dual<T> operator+(const Dual<T>& a, double b) {
  return {a.val + b, a.eps};
}
template <class T>
constexpr Dual<T> operator+(double a, const Dual<T>& b) {
  return {a + b.val, b.eps};
}
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a, double b) {
  return {a.val - b, a.eps};
}
template <class T>
constexpr Dual<T> operator-(double a, const Dual<T>& b) {
  return {a - b.val, -b.eps};
}
template <class T>
constexpr Dual<T> operator*(const Dual<T>& a, double b) {
  return {a.val * b, a.eps * b};
}
template <class T>
constexpr Dual<T> operator*(double a, const Dual<T>& b) {
  return {a * b.val, a * b.eps};
}
template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, double b) {
  return {a.val / b, a.eps / b};
}
template <class T>
constexpr Dual<T> operator/(double a, const Dual<T>& b) {
  return Dual<T>(a) / b;
}

template <class T, class U>
constexpr Dual<T>& operator+=(Dual<T>& a, const U& b) {
  return a = a + b;
}
template <class T, class U>
constexpr Dual<T>& operator-=(Dual<T>& a, const U& b) {
  return a = a - b;
}
template <class T, class U>
constexpr Dual<T>& operator*=(Dual<T>& a, const U& b) {
  return a = a * b;
}
template <class T, class U>
constexpr Dual<T>& operator/=(Dual<T>& a, const U& b) {
  return a = a / b;
}

// Elementary functions -------------------------------------------------------
// Each overload differentiates one level and recurses through T.

using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;
using std::tanh;

template <class T>
Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.val);
  return {e, e * a.eps};
}
template <class T>
Dual<T> log(const Dual<T>& a) {
  return {log(a.val), a.eps / a.val};
}
template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  T s = sqrt(a.val);
  return {s, a.eps / (2.0 * s)};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  return {sin(a.val), cos(a.val) * a.eps};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  return {cos(a.val), -sin(a.val) * a.eps};
}
template <class T>
Dual<T> tanh(const Dual<T>& a) {
  T t = tanh(a.val);
  return {t, (1.0 - t * t) * a.eps};
}

/// x^q for x > 0 (or integer-valued q); chain rule applied directly.
inline double pow(double x, double q) { return std::pow(x, q); }
template <class T>
Dual<T> pow(const Dual<T>& a, double q) {
  if (q == 0.0) return Dual<T>(1.0);
  return {pow(a.val, q), q * pow(a.val, q - 1.0) * a.eps};
}

inline double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

template <class T>
T abs(const T& a)
  requires is_dual<T>::value
{
  return sign_of(value_of(a)) < 0.0 ? -a : a;
}
inline double abs(double a) { return std::fabs(a); }

// |s|^e and sgn(s)|s|^e. Their derivatives feed each other, so nested jets stay
// finite at s = 0 whenever the exponent exceeds the nesting depth.
inline double abs_power(double s, double e) {
  if (e == 0.0) return 1.0;
  if (s == 0.0) return 0.0;
  return std::pow(std::fabs(s), e);
}
inline double signed_power(double s, double e) {
  if (s == 0.0) return 0.0;
  return sign_of(s) * (e == 0.0 ? 1.0 : std::pow(std::fabs(s), e));
}
template <class T>
Dual<T> signed_power(const Dual<T>& s, double e);

template <class T>
Dual<T> abs_power(const Dual<T>& s, double e) {
  if (e == 0.0) return Dual<T>(1.0);
  return {abs_power(s.val, e), e * signed_power(s.val, e - 1.0) * s.eps};
}
template <class T>
Dual<T> signed_power(const Dual<T>& s, double e) {
  return {signed_power(s.val, e), e * abs_power(s.val, e - 1.0) * s.eps};
}

/// |s|^{p-2} s, the flux nonlinearity of the p-Laplacian.
template <class T>
T p_flux(const T& s, double p) {
  return signed_power(s, p - 1.0);
}

}  // namespace strata
