#pragma once

#include <array>
#include <cmath>

namespace eulerstab {

/// Forward-mode dual number with N derivative lanes. Used to differentiate
/// the stabilized residual exactly (seeded per graph color).
template <int N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}  // NOLINT: implicit promotion is intended

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int k = 0; k < N; ++k) d[k] += o.d[k];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int k = 0; k < N; ++k) d[k] -= o.d[k];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int k = 0; k < N; ++k) d[k] = d[k] * o.v + v * o.d[k];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    const double q = v * inv;
    for (int k = 0; k < N; ++k) d[k] = (d[k] - q * o.d[k]) * inv;
    v = q;
    return *this;
  }
  Dual& operator*=(double s) {
    v *= s;
    for (auto& x : d) x *= s;
    return *this;
  }
};

template <int N>
Dual<N> operator-(Dual<N> a) {
  a.v = -a.v;
  for (auto& x : a.d) x = -x;
  return a;
}
template <int N>
Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <int N>
Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <int N>
Dual<N> operator*(Dual<N> a, const Dual<N>& b) { return a *= b; }
template <int N>
Dual<N> operator/(Dual<N> a, const Dual<N>& b) { return a /= b; }

template <int N>
Dual<N> operator+(Dual<N> a, double b) { a.v += b; return a; }
template <int N>
Dual<N> operator+(double b, Dual<N> a) { a.v += b; return a; }
template <int N>
Dual<N> operator-(Dual<N> a, double b) { a.v -= b; return a; }
template <int N>
Dual<N> operator-(double b, const Dual<N>& a) { return -a + b; }
template <int N>
Dual<N> operator*(Dual<N> a, double b) { return a *= b; }
template <int N>
Dual<N> operator*(double b, Dual<N> a) { return a *= b; }
template <int N>
Dual<N> operator/(Dual<N> a, double b) { return a *= (1.0 / b); }
template <int N>
Dual<N> operator/(double a, const Dual<N>& b) { return Dual<N>(a) / b; }

template <int N>
bool operator<(const Dual<N>& a, const Dual<N>& b) { return a.v < b.v; }
template <int N>
bool operator>(const Dual<N>& a, const Dual<N>& b) { return a.v > b.v; }
template <int N>
bool operator<(const Dual<N>& a, double b) { return a.v < b; }
template <int N>
bool operator>(const Dual<N>& a, double b) { return a.v > b; }
template <int N>
bool operator<=(const Dual<N>& a, double b) { return a.v <= b; }
template <int N>
bool operator>=(const Dual<N>& a, double b) { return a.v >= b; }

template <int N>
Dual<N> sqrt(const Dual<N>& a) {
  Dual<N> r;
  r.v = std::sqrt(a.v);
  const double g = r.v > 0.0 ? 0.5 / r.v : 0.0;
  for (int k = 0; k < N; ++k) r.d[k] = g * a.d[k];
  return r;
}

template <int N>
Dual<N> abs(const Dual<N>& a) {
  return a.v < 0.0 ? -a : a;
}

template <int N>
Dual<N> pow(const Dual<N>& a, double e) {
  Dual<N> r;
  r.v = std::pow(a.v, e);
  const double g = (a.v == 0.0) ? (e == 1.0 ? 1.0 : 0.0) : e * std::pow(a.v, e - 1.0);
  for (int k = 0; k < N; ++k) r.d[k] = g * a.d[k];
  return r;
}

inline double value_of(double x) { return x; }
template <int N>
double value_of(const Dual<N>& x) { return x.v; }

}  // namespace eulerstab
