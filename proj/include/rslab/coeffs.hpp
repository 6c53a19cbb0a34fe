#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "rslab/arith.hpp"
#include "rslab/euler.hpp"
#include "rslab/langlands.hpp"
#include "rslab/symfunc.hpp"

namespace rslab {

namespace detail {

inline int max_exponent(u64 p, u64 N) {
  int k = 0;
  for (u64 pk = 1; pk <= N / p; pk *= p) ++k;
  return k;
}

template <FieldScalar T>
Triple<T> triple_of(const LocalData<T>& d) {
  if (d.params.size() != 3) throw std::invalid_argument("expected a degree-3 representation");
  return {d.params[0], d.params[1], d.params[2]};
}

template <FieldScalar T>
std::pair<T, T> pair_of(const LocalData<T>& d) {
  if (d.params.size() != 2) throw std::invalid_argument("expected a degree-2 representation");
  return {d.params[0], d.params[1]};
}

}  // namespace detail

// lambda_pi(p^k1, p^k2) = s_{k1+k2,k1,0}(alpha_p).
template <FieldScalar T>
T lambda_double_local(const LocalData<T>& d, int k1, int k2) {
  return schur3(Partition3(k1 + k2, k1, 0), detail::triple_of(d));
}

template <FieldScalar T>
T lambda_double(const GlobalRep<T>& pi, u64 m1, u64 m2) {
  if (pi.degree() != 3) throw std::invalid_argument("lambda_double: degree must be 3");
  T acc(1);
  std::map<u64, std::pair<int, int>> exps;
  if (m1 > 1)
    for (auto [p, k] : factorize(m1)) exps[p].first = k;
  if (m2 > 1)
    for (auto [p, k] : factorize(m2)) exps[p].second = k;
  for (auto [p, e] : exps) acc = acc * lambda_double_local(pi.local(p), e.first, e.second);
  return acc;
}

// Local coefficients h_0..h_kmax of L(s, rho_p), via the inverse Euler factor.
template <FieldScalar T>
std::vector<T> local_std_coeffs(const LocalData<T>& d, int kmax) {
  return expand_inverse(local_L_inverse(d), kmax);
}

template <FieldScalar T>
T lambda_std(const GlobalRep<T>& rho, u64 n) {
  T acc(1);
  if (n == 1) return acc;
  for (auto [p, k] : factorize(n)) acc = acc * local_std_coeffs(rho.local(p), k)[static_cast<std::size_t>(k)];
  return acc;
}

template <FieldScalar T>
DirichletSeries<T> lambda_std_series(const GlobalRep<T>& rho, u64 N) {
  std::map<u64, std::vector<T>> local;
  for (u64 p : primes_up_to(N)) local[p] = local_std_coeffs(rho.local(p), detail::max_exponent(p, N));
  return assemble_global(local, N);
}

// chi_{omega_tau}(p): gamma_1 gamma_2 at unramified p, the stored value otherwise.
template <FieldScalar T>
T central_char_local(const LocalData<T>& d) {
  if (d.conductor_exp == 0) {
    T v(1);
    for (const auto& a : d.params) v = v * a;
    return v;
  }
  if (!d.central_value)
    throw std::invalid_argument("central_char: ramified prime " + std::to_string(d.prime) + " has no supplied value");
  return *d.central_value;
}

template <FieldScalar T>
T central_char(const GlobalRep<T>& tau, u64 m) {
  T acc(1);
  if (m == 1) return acc;
  for (auto [p, k] : factorize(m)) acc = acc * power(central_char_local(tau.local(p)), static_cast<unsigned long>(k));
  return acc;
}

// Values lambda_pi(m1, m2) for m1^2 m2 <= N, built from per-prime Schur values.
template <FieldScalar T>
class DoubleCoeffTable {
 public:
  DoubleCoeffTable(const GlobalRep<T>& pi, u64 N) : N_(N) {
    if (pi.degree() != 3) throw std::invalid_argument("DoubleCoeffTable: degree must be 3");
    for (u64 p : primes_up_to(N)) {
      const int kmax = detail::max_exponent(p, N);
      auto& tab = local_[p];
      tab.assign(static_cast<std::size_t>(kmax / 2) + 1, {});
      for (int k1 = 0; 2 * k1 <= kmax; ++k1)
        for (int k2 = 0; 2 * k1 + k2 <= kmax; ++k2) tab[k1].push_back(lambda_double_local(pi.local(p), k1, k2));
    }
    spf_ = smallest_prime_factors(N);
    for (u64 m1 = 1; m1 * m1 <= N; ++m1)
      for (u64 m2 = 1; m1 * m1 * m2 <= N; ++m2) values_.emplace(std::pair{m1, m2}, compute(m1, m2));
  }

  u64 bound() const { return N_; }
  const T& operator()(u64 m1, u64 m2) const {
    auto it = values_.find({m1, m2});
    if (it == values_.end()) throw std::out_of_range("DoubleCoeffTable: (m1, m2) outside m1^2 m2 <= N");
    return it->second;
  }
  const std::map<std::pair<u64, u64>, T>& values() const { return values_; }

 private:
  T compute(u64 m1, u64 m2) const {
    T acc(1);
    u64 a = m1, b = m2;
    while (a > 1 || b > 1) {
      const u64 p = std::min(a > 1 ? spf_[a] : b, b > 1 ? spf_[b] : a);
      int k1 = 0, k2 = 0;
      while (a % p == 0) {
        a /= p;
        ++k1;
      }
      while (b % p == 0) {
        b /= p;
        ++k2;
      }
      acc = acc * local_.at(p)[k1][k2];
    }
    return acc;
  }

  u64 N_;
  std::map<u64, std::vector<std::vector<T>>> local_;
  std::vector<u64> spf_;
  std::map<std::pair<u64, u64>, T> values_;
};

// Coefficients of L(s, pi x tau) from the naive local products, with no Schur functions involved.
template <FieldScalar T>
DirichletSeries<T> lambda_rs_series(const GlobalRep<T>& pi, const GlobalRep<T>& tau, u64 N) {
  std::map<u64, std::vector<T>> local;
  for (u64 p : primes_up_to(N))
    local[p] = expand_inverse(rs_naive_local(pi.local(p), tau.local(p)), detail::max_exponent(p, N));
  return assemble_global(local, N);
}

template <FieldScalar T>
T lambda_rs(const GlobalRep<T>& pi, const GlobalRep<T>& tau, u64 n) {
  T acc(1);
  if (n == 1) return acc;
  for (auto [p, k] : factorize(n))
    acc = acc * expand_inverse(rs_naive_local(pi.local(p), tau.local(p)), k)[static_cast<std::size_t>(k)];
  return acc;
}

// c_{pi,tau}(n) = sum_{m1^2 m2 = n} lambda_pi(m1, m2) lambda_tau(m2) chi_{omega_tau}(m1), for n <= N.
template <FieldScalar T>
class DoubleSum {
 public:
  DoubleSum(const GlobalRep<T>& pi, const GlobalRep<T>& tau, u64 N)
      : table_(pi, N), tau_coeffs_(lambda_std_series(tau, N)), c_(N + 1, T(0)) {
    if (tau.degree() != 2) throw std::invalid_argument("DoubleSum: tau must have degree 2");
    std::vector<T> chi(1, T(0));
    for (u64 m1 = 1; m1 * m1 <= N; ++m1) chi.push_back(central_char(tau, m1));
    for (const auto& [key, lam] : table_.values()) {
      const auto [m1, m2] = key;
      c_[m1 * m1 * m2] += lam * tau_coeffs_(m2) * chi[m1];
    }
  }

  u64 bound() const { return table_.bound(); }
  const T& operator()(u64 n) const {
    if (n == 0 || n > bound()) throw std::out_of_range("DoubleSum: index " + std::to_string(n));
    return c_[n];
  }
  const DoubleCoeffTable<T>& table() const { return table_; }

  // Replaces c(n); used to probe that checks detect corruption.
  void corrupt(u64 n, const T& v) { c_.at(n) = v; }

 private:
  DoubleCoeffTable<T> table_;
  DirichletSeries<T> tau_coeffs_;
  std::vector<T> c_;
};

template <FieldScalar T>
T c_pi_tau(const GlobalRep<T>& pi, const GlobalRep<T>& tau, u64 n) {
  T acc(0);
  for (u64 m1 = 1; m1 * m1 <= n; ++m1) {
    if (n % (m1 * m1) != 0) continue;
    const u64 m2 = n / (m1 * m1);
    acc = acc + lambda_double(pi, m1, m2) * lambda_std(tau, m2) * central_char(tau, m1);
  }
  return acc;
}

struct CheckOutcome {
  bool ok = true;
  std::optional<u64> first_failure;
  std::string expected;
  std::string actual;
  explicit operator bool() const { return ok; }
};

template <FieldScalar T>
CheckOutcome compare_series(const std::function<T(u64)>& lhs, const std::function<T(u64)>& rhs, u64 N,
                            double tol = 0.0) {
  for (u64 n = 1; n <= N; ++n) {
    const T a = lhs(n), b = rhs(n);
    bool equal;
    if constexpr (is_exact_v<T>) {
      equal = (a == b);
    } else {
      equal = magnitude(a - b) <= tol * std::max(1.0, magnitude(b));
    }
    if (!equal) return {false, n, scalar_traits<T>::str(b), scalar_traits<T>::str(a)};
  }
  return {};
}

// c_{pi,tau}(n) = lambda_{pi x tau}(n) for all n <= N.
template <FieldScalar T>
CheckOutcome doublesum_check(const DoubleSum<T>& c, const DirichletSeries<T>& rs, double tol = 0.0) {
  const u64 N = std::min(c.bound(), rs.bound());
  return compare_series<T>([&](u64 n) { return c(n); }, [&](u64 n) { return rs(n); }, N, tol);
}

template <FieldScalar T>
CheckOutcome doublesum_check(const GlobalRep<T>& pi, const GlobalRep<T>& tau, u64 N, double tol = 0.0) {
  return doublesum_check(DoubleSum<T>(pi, tau, N), lambda_rs_series(pi, tau, N), tol);
}

// lambda_pi(1, n) = lambda_pi(n) for all n <= N.
template <FieldScalar T>
CheckOutcome standardcoeff_check(const GlobalRep<T>& pi, u64 N) {
  const DoubleCoeffTable<T> table(pi, N);
  const auto std_series = lambda_std_series(pi, N);
  return compare_series<T>([&](u64 n) { return table(1, n); }, [&](u64 n) { return std_series(n); }, N);
}

// Completely multiplicative extension of unramified twist values.
template <FieldScalar T>
T twist_value(const std::function<T(u64)>& chi, u64 n) {
  T acc(1);
  if (n == 1) return acc;
  for (auto [p, k] : factorize(n)) acc = acc * power(chi(p), static_cast<unsigned long>(k));
  return acc;
}

// c_{pi, tau x omega}(n) = c_{pi,tau}(n) chi_omega(n).
template <FieldScalar T>
CheckOutcome ctwist_check(const GlobalRep<T>& pi, const GlobalRep<T>& tau, const std::function<T(u64)>& chi, u64 N,
                          double tol = 0.0) {
  const DoubleSum<T> base(pi, tau, N);
  const DoubleSum<T> twisted(pi, twist_unramified(tau, chi), N);
  return compare_series<T>([&](u64 n) { return twisted(n); }, [&](u64 n) { return base(n) * twist_value(chi, n); },
                           N, tol);
}

// sum_{2k1+k2=k} s_{k1+k2,k1,0}(alpha_p) s_{k1+k2,k1,0}(gamma_p, 0).
template <FieldScalar T>
T rscauchy_coeff(const GlobalRep<T>& pi, const GlobalRep<T>& tau, u64 p, int k) {
  const auto [g1, g2] = detail::pair_of(tau.local(p));
  return two_row_pair_sum(detail::triple_of(pi.local(p)), g1, g2, k);
}

template <FieldScalar T>
void write_csv(std::ostream& os, const DirichletSeries<T>& s) {
  os << "n,value\n";
  for (u64 n = 1; n <= s.bound(); ++n) {
    const std::string v = scalar_traits<T>::str(s(n));
    os << n << ',' << (v.find(',') == std::string::npos ? v : '"' + v + '"') << '\n';
  }
}

}  // namespace rslab
