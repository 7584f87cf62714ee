#pragma once

// Forward-mode dual numbers. Nesting (Dual<Dual<double>>) gives mixed second
// derivatives, which the opponent-shaping objectives need when the opponent
// lookahead itself depends on our strategy.

#include <cmath>
#include <type_traits>

namespace welfare {

template <class T>
struct Dual {
  T v{};
  T d{};

  Dual() = default;
  Dual(double c) : v(c), d(0.0) {}  // NOLINT(google-explicit-constructor)
  Dual(T value, T tangent) : v(value), d(tangent) {}

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return {a.v * b.v, a.v * b.d + a.d * b.v};
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const T inv = T(1.0) / b.v;
    const T q = a.v * inv;
    return {q, (a.d - q * b.d) * inv};
  }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }

  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual1>;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};

/// Primal value of a (possibly nested) dual number.
inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) {
  return primal(x.v);
}

// Comparisons look only at the primal value.
template <class A, class B>
bool less(const A& a, const B& b) {
  return primal(a) < primal(b);
}

/// Branching absolute value; the derivative at zero is taken from the + side.
template <class T>
T abs_branch(const T& x) {
  return primal(x) < 0.0 ? -x : x;
}

/// min(a, b) with ties resolved toward `a`.
template <class T>
T min_branch(const T& a, const T& b) {
  return primal(b) < primal(a) ? b : a;
}

/// Clamp to [lo, hi]; clamped values carry zero tangent.
template <class T>
T clamp_branch(const T& x, double lo, double hi) {
  const double p = primal(x);
  if (p < lo) return T(lo);
  if (p > hi) return T(hi);
  return x;
}

/// Logistic function 1 / (1 + exp(-x)), evaluated without overflow.
inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}
template <class T>
Dual<T> sigmoid(const Dual<T>& x) {
  const T s = sigmoid(x.v);
  return {s, x.d * s * (T(1.0) - s)};
}

/// Seeds a constant of type Dual<T> whose outermost tangent is `tangent`.
template <class T>
Dual<T> seed(const T& value, double tangent) {
  return Dual<T>(value, T(tangent));
}

}  // namespace welfare
