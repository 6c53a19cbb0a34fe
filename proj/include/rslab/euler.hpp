#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rslab/arith.hpp"
#include "rslab/scalar.hpp"

namespace rslab {

// Polynomial in X = p^{-s}, constant term first, no trailing exact zeros.
template <FieldScalar T>
class EulerFactorPoly {
 public:
  EulerFactorPoly() : c_{T(1)} {}
  explicit EulerFactorPoly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  EulerFactorPoly(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  static EulerFactorPoly zero() {
    EulerFactorPoly z;
    z.c_.clear();
    return z;
  }

  // 1 - a X.
  static EulerFactorPoly linear(const T& a) { return EulerFactorPoly({T(1), T(0) - a}); }

  const std::vector<T>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  T operator[](std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }
  T constant() const { return (*this)[0]; }
  bool is_one() const { return c_.size() == 1 && c_[0] == T(1); }

  double max_magnitude() const {
    double m = 0;
    for (const auto& x : c_) m = std::max(m, magnitude(x));
    return m;
  }

  friend bool operator==(const EulerFactorPoly& a, const EulerFactorPoly& b) { return a.c_ == b.c_; }

  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "; " : "") << scalar_traits<T>::str(c_[i]);
    os << "]";
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && rslab::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<T> c_;
};

template <FieldScalar T>
EulerFactorPoly<T> poly_mul(const EulerFactorPoly<T>& a, const EulerFactorPoly<T>& b) {
  if (a.is_zero() || b.is_zero()) return EulerFactorPoly<T>::zero();
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<T> out(x.size() + y.size() - 1, T(0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (rslab::is_zero(x[i])) continue;
    for (std::size_t j = 0; j < y.size(); ++j) out[i + j] += x[i] * y[j];
  }
  return EulerFactorPoly<T>(std::move(out));
}

template <FieldScalar T>
EulerFactorPoly<T> poly_product(const std::vector<EulerFactorPoly<T>>& factors) {
  EulerFactorPoly<T> acc;
  for (const auto& f : factors) acc = poly_mul(acc, f);
  return acc;
}

// Coefficients c_0..c_kmax of 1/p(X); requires p(0) = 1.
template <FieldScalar T>
std::vector<T> expand_inverse(const EulerFactorPoly<T>& p, int kmax) {
  if (kmax < 0) throw std::invalid_argument("expand_inverse: kmax < 0");
  if (!(p.constant() == T(1))) throw std::invalid_argument("expand_inverse: constant term is not 1");
  const auto& a = p.coeffs();
  std::vector<T> c(static_cast<std::size_t>(kmax) + 1, T(0));
  c[0] = T(1);
  for (int k = 1; k <= kmax; ++k) {
    T s(0);
    const int top = std::min<int>(k, p.degree());
    for (int j = 1; j <= top; ++j) {
      if (rslab::is_zero(a[j])) continue;
      s += a[j] * c[k - j];
    }
    c[k] = T(0) - s;
  }
  return c;
}

// Relative tolerance for float-mode exact division.
inline constexpr double kFloatDivisionTolerance = 1e-10;

template <FieldScalar T>
struct DivisionOutcome {
  std::optional<EulerFactorPoly<T>> quotient;
  // num - quotient_candidate * den; zero on success.
  EulerFactorPoly<T> residual;
  bool divisible() const { return quotient.has_value(); }
};

template <FieldScalar T>
DivisionOutcome<T> poly_divide_exact(const EulerFactorPoly<T>& num, const EulerFactorPoly<T>& den) {
  if (den.is_zero()) throw std::invalid_argument("poly_divide_exact: zero divisor");
  std::vector<T> r = num.coeffs();
  const auto& d = den.coeffs();
  const int dn = den.degree();
  const int nn = num.degree();
  if (nn < dn) {
    if (num.is_zero()) return {EulerFactorPoly<T>::zero(), EulerFactorPoly<T>::zero()};
    return {std::nullopt, num};
  }
  std::vector<T> q(static_cast<std::size_t>(nn - dn) + 1, T(0));
  const T lead = d.back();
  for (int i = nn - dn; i >= 0; --i) {
    const T coef = r[i + dn] / lead;
    q[i] = coef;
    if (rslab::is_zero(coef)) continue;
    for (int j = 0; j <= dn; ++j) r[i + j] -= coef * d[j];
  }
  r.resize(static_cast<std::size_t>(dn));
  EulerFactorPoly<T> residual(r);
  bool ok;
  if constexpr (is_exact_v<T>) {
    ok = residual.is_zero();
  } else {
    const double scale = std::max({num.max_magnitude(), den.max_magnitude(), 1e-300});
    ok = residual.max_magnitude() <= kFloatDivisionTolerance * scale;
  }
  if (!ok) return {std::nullopt, residual};
  return {EulerFactorPoly<T>(std::move(q)), residual};
}

class NotDivisible : public std::runtime_error {
 public:
  NotDivisible(const std::string& residual)
      : std::runtime_error("polynomial not divisible; residual " + residual), residual_(residual) {}
  const std::string& residual() const { return residual_; }

 private:
  std::string residual_;
};

// Throwing form of poly_divide_exact.
template <FieldScalar T>
EulerFactorPoly<T> poly_divide_or_throw(const EulerFactorPoly<T>& num, const EulerFactorPoly<T>& den) {
  auto out = poly_divide_exact(num, den);
  if (!out.divisible()) throw NotDivisible(out.residual.str());
  return *out.quotient;
}

// Truncated Dirichlet series a(1..N).
template <FieldScalar T>
class DirichletSeries {
 public:
  DirichletSeries(u64 bound, std::vector<T> values) : bound_(bound), a_(std::move(values)) {
    if (a_.size() != bound_ + 1) throw std::invalid_argument("DirichletSeries: size mismatch");
  }

  u64 bound() const { return bound_; }
  const T& operator()(u64 n) const {
    if (n == 0 || n > bound_) throw std::out_of_range("DirichletSeries: index " + std::to_string(n));
    return a_[n];
  }
  const std::vector<T>& raw() const { return a_; }

 private:
  u64 bound_;
  std::vector<T> a_;
};

inline constexpr u64 kDefaultTruncation = 10000;

// a(n) = prod a_p(k) over p^k || n. local[p][k] must exist for every p <= N and k <= log_p N.
template <FieldScalar T>
DirichletSeries<T> assemble_global(const std::map<u64, std::vector<T>>& local, u64 N = kDefaultTruncation) {
  if (N == 0) throw std::invalid_argument("assemble_global: N = 0");
  for (u64 p : primes_up_to(N)) {
    auto it = local.find(p);
    if (it == local.end()) throw std::invalid_argument("assemble_global: missing prime " + std::to_string(p));
    int kmax = 1;
    for (u64 pk = p; pk <= N / p; pk *= p) ++kmax;
    if (it->second.size() < static_cast<std::size_t>(kmax) + 1)
      throw std::invalid_argument("assemble_global: too few local coefficients at " + std::to_string(p));
  }
  auto spf = smallest_prime_factors(N);
  std::vector<T> a(N + 1, T(0));
  a[1] = T(1);
  for (u64 n = 2; n <= N; ++n) {
    const u64 p = spf[n];
    u64 m = n;
    int k = 0;
    while (m % p == 0) {
      m /= p;
      ++k;
    }
    a[n] = a[m] * local.at(p)[static_cast<std::size_t>(k)];
  }
  return DirichletSeries<T>(N, std::move(a));
}

}  // namespace rslab
