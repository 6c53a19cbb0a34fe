#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "rslab/euler.hpp"
#include "rslab/scalar.hpp"

namespace rslab {

struct Partition3 {
  int l1 = 0, l2 = 0, l3 = 0;

  Partition3() = default;
  Partition3(int a, int b, int c) : l1(a), l2(b), l3(c) {
    if (!(a >= b && b >= c && c >= 0))
      throw std::invalid_argument("Partition3: need l1 >= l2 >= l3 >= 0, got (" + std::to_string(a) + "," +
                                  std::to_string(b) + "," + std::to_string(c) + ")");
  }
  int size() const { return l1 + l2 + l3; }
  int operator[](int i) const { return i == 0 ? l1 : (i == 1 ? l2 : l3); }
  friend bool operator==(const Partition3&, const Partition3&) = default;
};

// Partitions of k with at most three parts, in reverse lexicographic order.
inline std::vector<Partition3> partitions3_of(int k) {
  std::vector<Partition3> out;
  for (int a = k; a >= 0; --a)
    for (int b = std::min(a, k - a); b >= 0; --b) {
      const int c = k - a - b;
      if (c <= b && c >= 0) out.emplace_back(a, b, c);
    }
  return out;
}

template <FieldScalar T>
using Triple = std::array<T, 3>;

// h_0..h_kmax of the given variables.
template <FieldScalar T>
std::vector<T> complete_homogeneous(const std::vector<T>& x, int kmax) {
  std::vector<T> h(static_cast<std::size_t>(std::max(kmax, 0)) + 1, T(0));
  h[0] = T(1);
  for (const auto& v : x) {
    if (is_zero(v)) continue;
    for (int k = 1; k <= kmax; ++k) h[k] = h[k] + v * h[k - 1];
  }
  return h;
}

namespace detail {

template <FieldScalar T>
T det3(const std::array<std::array<T, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <FieldScalar T>
bool distinct(const Triple<T>& x) {
  if constexpr (is_exact_v<T>) {
    return !(x[0] == x[1] || x[0] == x[2] || x[1] == x[2]);
  } else {
    double scale = 1.0;
    for (const auto& v : x) scale = std::max(scale, magnitude(v));
    constexpr double kSeparation = 1e-4;
    return magnitude(x[0] - x[1]) > kSeparation * scale && magnitude(x[0] - x[2]) > kSeparation * scale &&
           magnitude(x[1] - x[2]) > kSeparation * scale;
  }
}

}  // namespace detail

// det(x_j^{l_i + 3 - i}) / det(x_j^{3 - i}); the variables must be distinct.
template <FieldScalar T>
T schur_bialternant(const Partition3& l, const Triple<T>& x) {
  std::array<std::array<T, 3>, 3> num;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) num[i][j] = power(x[j], static_cast<unsigned long>(l[i] + 2 - i));
  const T vandermonde = (x[0] - x[1]) * (x[0] - x[2]) * (x[1] - x[2]);
  if (is_zero(vandermonde)) throw std::domain_error("schur_bialternant: coincident variables");
  return detail::det3(num) / vandermonde;
}

// det(h_{l_i - i + j}).
template <FieldScalar T>
T schur_jacobi_trudi(const Partition3& l, const Triple<T>& x) {
  const auto h = complete_homogeneous<T>({x[0], x[1], x[2]}, l.l1 + 2);
  auto H = [&](int k) { return k < 0 ? T(0) : h[static_cast<std::size_t>(k)]; };
  std::array<std::array<T, 3>, 3> m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = H(l[i] - i + j);
  return detail::det3(m);
}

inline constexpr int kTableauMaxRow = 12;

namespace detail {

template <FieldScalar T>
void fill_tableaux(const Partition3& l, std::array<std::array<int, kTableauMaxRow>, 3>& t, int cell,
                   const Triple<T>& x, std::array<int, 3>& content, T& total) {
  const int rows[3] = {l.l1, l.l2, l.l3};
  int r = 0, c = cell;
  while (r < 3 && c >= rows[r]) {
    c -= rows[r];
    ++r;
  }
  if (r == 3) {
    T mono(1);
    for (int v = 0; v < 3; ++v) mono = mono * power(x[v], static_cast<unsigned long>(content[v]));
    total = total + mono;
    return;
  }
  int lo = 1;
  if (c > 0) lo = std::max(lo, t[r][c - 1]);
  if (r > 0) lo = std::max(lo, t[r - 1][c] + 1);
  for (int v = lo; v <= 3; ++v) {
    t[r][c] = v;
    ++content[v - 1];
    fill_tableaux(l, t, cell + 1, x, content, total);
    --content[v - 1];
  }
}

}  // namespace detail

// Sum of x^content over semistandard tableaux of shape l with entries in {1,2,3}.
template <FieldScalar T>
T schur_tableau(const Partition3& l, const Triple<T>& x) {
  if (l.l1 > kTableauMaxRow)
    throw std::invalid_argument("schur_tableau: l1 = " + std::to_string(l.l1) + " exceeds enumeration bound");
  std::array<std::array<int, kTableauMaxRow>, 3> t{};
  std::array<int, 3> content{0, 0, 0};
  T total(0);
  detail::fill_tableaux(l, t, 0, x, content, total);
  return total;
}

// Bialternant at distinct points, Jacobi-Trudi otherwise.
template <FieldScalar T>
T schur3(const Partition3& l, const Triple<T>& x) {
  if (detail::distinct(x)) return schur_bialternant(l, x);
  return schur_jacobi_trudi(l, x);
}

// (a^{f+1} - b^{f+1}) / (a - b), with limit (f+1) a^f at a = b.
template <FieldScalar T>
T schur_gl2(int f, const T& a, const T& b) {
  if (f < 0) throw std::invalid_argument("schur_gl2: f < 0");
  const auto e = static_cast<unsigned long>(f);
  if (a == b) return T(static_cast<long>(f + 1)) * power(a, e);
  return (power(a, e + 1) - power(b, e + 1)) / (a - b);
}

struct Residual {
  double max_abs = 0.0;
  bool exact_zero = true;
  int worst_degree = -1;

  template <FieldScalar T>
  void record(const T& diff, int degree) {
    if (!is_zero(diff)) exact_zero = false;
    const double m = magnitude(diff);
    if (m > max_abs || (worst_degree < 0 && !is_zero(diff))) {
      max_abs = m;
      worst_degree = degree;
    }
  }
};

// prod 1/(1 - a_i g_j X) against sum over l of s_l(a) s_l(g), graded by |l| up to K.
template <FieldScalar T>
Residual cauchy_check(const Triple<T>& a, const Triple<T>& g, int K) {
  EulerFactorPoly<T> p;
  for (const auto& x : a)
    for (const auto& y : g) p = poly_mul(p, EulerFactorPoly<T>::linear(x * y));
  const auto lhs = expand_inverse(p, K);
  Residual res;
  for (int k = 0; k <= K; ++k) {
    T rhs(0);
    for (const auto& l : partitions3_of(k)) rhs = rhs + schur3(l, a) * schur3(l, g);
    res.record(lhs[k] - rhs, k);
  }
  return res;
}

// The two-row grading sum_{2k1+k2=k} s_{k1+k2,k1,0}(a) s_{k1+k2,k1,0}(g1,g2,0).
template <FieldScalar T>
T two_row_pair_sum(const Triple<T>& a, const T& g1, const T& g2, int k) {
  T s(0);
  for (int k1 = 0; 2 * k1 <= k; ++k1) {
    const Partition3 l(k - k1, k1, 0);
    s = s + schur3(l, a) * schur3(l, Triple<T>{g1, g2, T(0)});
  }
  return s;
}

template <FieldScalar T>
Residual cauchy_two_row(const Triple<T>& a, const T& g1, const T& g2, int K) {
  EulerFactorPoly<T> p;
  for (const auto& x : a)
    for (const auto& y : {g1, g2}) p = poly_mul(p, EulerFactorPoly<T>::linear(x * y));
  const auto lhs = expand_inverse(p, K);
  Residual res;
  for (int k = 0; k <= K; ++k) res.record(lhs[k] - two_row_pair_sum(a, g1, g2, k), k);
  return res;
}

}  // namespace rslab
