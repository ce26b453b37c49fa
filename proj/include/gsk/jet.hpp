#pragma once
// Truncated Taylor arithmetic. A Jet<T, N> holds f(x0), f'(x0), f''(x0)/2!, ...
// up to order N; arithmetic on jets propagates exact derivatives through
// compositions, which is how the smooth weights expose phi^{(j)}.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace gsk {

template <class T, int N>
struct Jet {
  static_assert(N >= 0);
  std::array<T, N + 1> c{};

  static Jet constant(T v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  /// The identity function expanded at x0.
  static Jet variable(T x0) {
    Jet j;
    j.c[0] = x0;
    if constexpr (N >= 1) j.c[1] = T(1);
    return j;
  }

  T value() const { return c[0]; }

  /// k-th derivative at the expansion point.
  T derivative(int k) const {
    T f = c[static_cast<std::size_t>(k)];
    for (int m = 2; m <= k; ++m) f *= static_cast<double>(m);
    return f;
  }

  template <class U>
  Jet<U, N> cast() const {
    Jet<U, N> out;
    for (int k = 0; k <= N; ++k) out.c[k] = U(c[k]);
    return out;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= N; ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= N; ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator*=(T s) {
    for (auto& x : c) x *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= T(-1); }
  friend Jet operator+(Jet a, T s) {
    a.c[0] += s;
    return a;
  }
  friend Jet operator+(T s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, T s) {
    a.c[0] -= s;
    return a;
  }
  friend Jet operator-(T s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, T s) { return a *= s; }
  friend Jet operator*(T s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= N; ++k) {
      T acc{};
      for (int j = 0; j <= k; ++j) acc += a.c[j] * b.c[k - j];
      r.c[k] = acc;
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(Jet a, T s) { return a *= (T(1) / s); }
};

template <class T, int N>
Jet<T, N> reciprocal(const Jet<T, N>& a) {
  Jet<T, N> b;
  const T inv0 = T(1) / a.c[0];
  b.c[0] = inv0;
  for (int k = 1; k <= N; ++k) {
    T acc{};
    for (int j = 1; j <= k; ++j) acc += a.c[j] * b.c[k - j];
    b.c[k] = -inv0 * acc;
  }
  return b;
}

template <class T, int N>
Jet<T, N> exp(const Jet<T, N>& a) {
  using std::exp;
  Jet<T, N> e;
  e.c[0] = exp(a.c[0]);
  for (int k = 1; k <= N; ++k) {
    T acc{};
    for (int j = 1; j <= k; ++j) acc += static_cast<double>(j) * a.c[j] * e.c[k - j];
    e.c[k] = acc / static_cast<double>(k);
  }
  return e;
}

template <class T, int N>
Jet<T, N> log(const Jet<T, N>& a) {
  using std::log;
  Jet<T, N> l;
  l.c[0] = log(a.c[0]);
  for (int k = 1; k <= N; ++k) {
    T acc{};
    for (int j = 1; j < k; ++j) acc += static_cast<double>(j) * l.c[j] * a.c[k - j];
    l.c[k] = (a.c[k] - acc / static_cast<double>(k)) / a.c[0];
  }
  return l;
}

/// f(u) given the Taylor coefficients of f at u.value().
template <class T, int N, class Coeffs>
Jet<T, N> compose(const Coeffs& f_coeffs, const Jet<T, N>& u) {
  Jet<T, N> delta = u;
  delta.c[0] = T{};
  Jet<T, N> r = Jet<T, N>::constant(f_coeffs[N]);
  for (int k = N - 1; k >= 0; --k) r = r * delta + f_coeffs[k];
  return r;
}

}  // namespace gsk
