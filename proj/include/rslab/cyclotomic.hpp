#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rslab/arith.hpp"
#include "rslab/scalar.hpp"

namespace rslab {

// e^{2 pi i k / N}, stored with 0 <= k < N.
struct RootOfUnity {
  i64 k = 0;
  u64 n = 1;

  static RootOfUnity make(i64 k, u64 n) {
    if (n == 0) throw std::invalid_argument("RootOfUnity: order 0");
    RootOfUnity r{static_cast<i64>(mod_reduce(k, n)), n};
    r.normalize();
    return r;
  }

  void normalize() {
    const u64 g = std::gcd(static_cast<u64>(k), n);
    if (k == 0) {
      n = 1;
      return;
    }
    k /= static_cast<i64>(g);
    n /= g;
  }

  Complex value() const {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    return {std::cos(t), std::sin(t)};
  }

  RootOfUnity conj() const { return make(-k, n); }

  friend RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
    const u64 l = lcm_u64(a.n, b.n);
    return make(a.k * static_cast<i64>(l / a.n) + b.k * static_cast<i64>(l / b.n), l);
  }
  friend bool operator==(const RootOfUnity& a, const RootOfUnity& b) { return a.k == b.k && a.n == b.n; }
};

namespace detail {

inline std::vector<i64> poly_exact_div_int(std::vector<i64> num, const std::vector<i64>& den) {
  const std::size_t dn = den.size() - 1;
  std::vector<i64> q(num.size() - dn, 0);
  for (std::size_t i = q.size(); i-- > 0;) {
    const i64 c = num[i + dn] / den[dn];
    q[i] = c;
    for (std::size_t j = 0; j <= dn; ++j) num[i + j] -= c * den[j];
  }
  return q;
}

}  // namespace detail

// Integer coefficients of the N-th cyclotomic polynomial, constant term first, monic.
inline const std::vector<i64>& cyclotomic_polynomial(u64 n) {
  static std::mutex mu;
  static std::map<u64, std::vector<i64>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  std::vector<i64> num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (u64 d : divisors(n)) {
    if (d == n) continue;
    num = detail::poly_exact_div_int(num, cyclotomic_polynomial(d));
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(n, std::move(num)).first->second;
}

// Element of Q(zeta_N) in the power basis 1, z, ..., z^{phi(N)-1}.
class Cyclotomic {
 public:
  Cyclotomic() : n_(1), c_{Rational(0)} {}
  Cyclotomic(const Rational& r) : n_(1), c_{r} {}  // NOLINT(google-explicit-constructor)
  template <std::integral I>
  Cyclotomic(I v) : Cyclotomic(Rational(v)) {}  // NOLINT(google-explicit-constructor)

  static Cyclotomic root_of_unity(const RootOfUnity& z) { return monomial(Rational(1), z.k, z.n); }

  static Cyclotomic monomial(const Rational& coef, i64 k, u64 n) {
    std::vector<Rational> v(n, Rational(0));
    v[mod_reduce(k, n)] = coef;
    return from_group_ring(n, std::move(v));
  }

  // Reduces sum v[k] z^k, k < N, into canonical form.
  static Cyclotomic from_group_ring(u64 n, std::vector<Rational> v) {
    if (v.size() != n) throw std::invalid_argument("Cyclotomic: group ring size mismatch");
    const auto& phi = cyclotomic_polynomial(n);
    const std::size_t deg = phi.size() - 1;
    for (std::size_t i = n; i-- > deg;) {
      if (v[i].sign() == 0) continue;
      const Rational c = v[i];
      for (std::size_t j = 0; j < deg; ++j) {
        if (phi[j] != 0) v[i - deg + j] -= c * Rational(phi[j]);
      }
      v[i] = Rational(0);
    }
    v.resize(deg);
    Cyclotomic out;
    out.n_ = n;
    out.c_ = std::move(v);
    return out;
  }

  u64 order() const { return n_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x.sign() != 0) return false;
    return true;
  }

  // Same element viewed in Q(zeta_M); M must be a multiple of N.
  Cyclotomic lift(u64 m) const {
    if (m % n_ != 0) throw std::invalid_argument("Cyclotomic::lift: order does not divide target");
    if (m == n_) return *this;
    const u64 step = m / n_;
    std::vector<Rational> v(m, Rational(0));
    for (std::size_t k = 0; k < c_.size(); ++k) v[(k * step) % m] += c_[k];
    return from_group_ring(m, std::move(v));
  }

  Cyclotomic conj() const {
    std::vector<Rational> v(n_, Rational(0));
    for (std::size_t k = 0; k < c_.size(); ++k) v[(n_ - k) % n_] += c_[k];
    return from_group_ring(n_, std::move(v));
  }

  Complex to_complex() const {
    Complex s(0.0, 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k].sign() == 0) continue;
      const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_);
      s += c_[k].to_double() * Complex(std::cos(t), std::sin(t));
    }
    return s;
  }

  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) { return combine(a, b, false); }
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) { return combine(a, b, true); }
  friend Cyclotomic operator-(const Cyclotomic& a) { return Cyclotomic(0) - a; }
  Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
  Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
  Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.n_ == 1) return b.scaled(a.c_[0]);
    if (b.n_ == 1) return a.scaled(b.c_[0]);
    const u64 l = lcm_u64(a.n_, b.n_);
    const Cyclotomic x = a.lift(l), y = b.lift(l);
    std::vector<Rational> v(l, Rational(0));
    for (std::size_t i = 0; i < x.c_.size(); ++i) {
      if (x.c_[i].sign() == 0) continue;
      for (std::size_t j = 0; j < y.c_.size(); ++j) {
        if (y.c_[j].sign() == 0) continue;
        v[(i + j) % l] += x.c_[i] * y.c_[j];
      }
    }
    return from_group_ring(l, std::move(v));
  }

  friend Cyclotomic operator/(const Cyclotomic& a, const Rational& r) { return a.scaled(Rational(1) / r); }

  Cyclotomic scaled(const Rational& r) const {
    Cyclotomic out = *this;
    for (auto& x : out.c_) x *= r;
    return out;
  }

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) { return (a - b).is_zero(); }
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const Cyclotomic& x) { return os << x.str(); }

  std::string str() const {
    std::string s = "Q(z" + std::to_string(n_) + ")[";
    for (std::size_t k = 0; k < c_.size(); ++k) s += (k ? " " : "") + c_[k].str();
    return s + "]";
  }

 private:
  static Cyclotomic combine(const Cyclotomic& a, const Cyclotomic& b, bool subtract) {
    const u64 l = lcm_u64(a.n_, b.n_);
    Cyclotomic x = a.lift(l);
    const Cyclotomic y = b.lift(l);
    for (std::size_t k = 0; k < x.c_.size(); ++k) {
      if (subtract)
        x.c_[k] -= y.c_[k];
      else
        x.c_[k] += y.c_[k];
    }
    return x;
  }

  u64 n_;
  std::vector<Rational> c_;
};

// Accumulates sum coef * z^k in Q(zeta_N), reducing once at the end.
class CyclotomicAccumulator {
 public:
  explicit CyclotomicAccumulator(u64 n) : n_(n), v_(n, Rational(0)) {}
  void add(const Rational& coef, i64 k) { v_[mod_reduce(k, n_)] += coef; }
  void add_one(i64 k) { v_[mod_reduce(k, n_)] += Rational(1); }
  Cyclotomic finish() const { return Cyclotomic::from_group_ring(n_, v_); }
  u64 order() const { return n_; }

 private:
  u64 n_;
  std::vector<Rational> v_;
};

// Images of Q(zeta_L) in F_l under all zeta_L -> w^j, j prime to L, for primes l = 1 mod L whose product exceeds
// the bound. An algebraic integer whose complex conjugates all have modulus <= bound is zero iff every image is
// zero: otherwise each l^phi(L) divides a nonzero norm of absolute value <= bound^phi(L). Rationals map through
// their reduction, so an element with denominator D is certified when D times it satisfies the bound.
class ModularEmbeddings {
 public:
  using Image = std::vector<u64>;

  ModularEmbeddings(u64 order, u64 bound) : ModularEmbeddings(order, mpz_class(static_cast<unsigned long>(bound))) {}

  ModularEmbeddings(u64 order, const mpz_class& bound) : n_(order) {
    if (order == 0) throw std::invalid_argument("ModularEmbeddings: order 0");
    if (order > (1ULL << 30)) throw std::invalid_argument("ModularEmbeddings: order too large");
    const auto factors = order == 1 ? Factorization{} : factorize(order);
    for (u64 j = 1; j <= order; ++j)
      if (std::gcd(j, order) == 1) units_.push_back(j % order);
    mpz_class covered = 1;
    // Small bounds take the least admissible prime; large ones use primes near 2^61.
    u64 t = bound < mpz_class(1UL << 40) ? bound.get_ui() / order + 1 : (1ULL << 61) / order;
    while (covered <= bound) {
      while (!is_prime_u64(1 + t * order)) ++t;
      const u64 ell = 1 + t * order;
      ++t;
      u64 w = 0;
      for (u64 g = 2;; ++g) {
        w = powmod(g, (ell - 1) / order, ell);
        bool primitive = true;
        for (auto [r, e] : factors)
          if (powmod(w, order / r, ell) == 1) primitive = false;
        if (primitive) break;
      }
      Lane lane{ell, {}, {}};
      for (u64 j : units_) lane.roots.push_back(powmod(w, j, ell));
      if (order <= 4096) {
        lane.powers.resize(order);
        u64 x = 1;
        for (u64 k = 0; k < order; ++k) {
          lane.powers[k] = x;
          x = mulmod(x, w, ell);
        }
      }
      lanes_.push_back(std::move(lane));
      covered *= mpz_class(static_cast<unsigned long>(ell));
    }
  }

  u64 order() const { return n_; }
  u64 modulus() const { return lanes_.front().ell; }
  std::size_t lanes() const { return lanes_.size(); }
  std::size_t count() const { return units_.size(); }

  Image zero() const { return Image(lanes_.size() * units_.size(), 0); }

  Image integer(i64 c) const {
    Image x = zero();
    for (std::size_t l = 0; l < lanes_.size(); ++l)
      for (std::size_t i = 0; i < units_.size(); ++i) x[l * units_.size() + i] = mod_reduce(c, lanes_[l].ell);
    return x;
  }

  Image rational(const Rational& r) const {
    Image x = zero();
    for (std::size_t l = 0; l < lanes_.size(); ++l) {
      const u64 v = reduce(r, lanes_[l].ell);
      for (std::size_t i = 0; i < units_.size(); ++i) x[l * units_.size() + i] = v;
    }
    return x;
  }

  // zeta_L^k.
  Image root(i64 k) const {
    Image x = zero();
    add_monomial(x, Rational(1), k);
    return x;
  }

  // Adds c * zeta_L^k to x.
  void add_monomial(Image& x, const Rational& c, i64 k) const {
    const u64 kk = mod_reduce(k, n_);
    for (std::size_t l = 0; l < lanes_.size(); ++l) {
      const auto& lane = lanes_[l];
      const u64 cc = reduce(c, lane.ell);
      if (cc == 0) continue;
      for (std::size_t i = 0; i < units_.size(); ++i) {
        const u64 z = lane.powers.empty() ? powmod(lane.roots[i], kk, lane.ell)
                                          : lane.powers[mulmod(units_[i], kk, n_)];
        u64& slot = x[l * units_.size() + i];
        slot = (slot + mulmod(cc, z, lane.ell)) % lane.ell;
      }
    }
  }
  void add_monomial(Image& x, i64 c, i64 k) const { add_monomial(x, Rational(c), k); }

  Image add(const Image& a, const Image& b) const { return pointwise(a, b, [](u64 u, u64 v, u64 m) { return (u + v) % m; }); }
  Image sub(const Image& a, const Image& b) const {
    return pointwise(a, b, [](u64 u, u64 v, u64 m) { return (u + m - v) % m; });
  }
  Image mul(const Image& a, const Image& b) const { return pointwise(a, b, [](u64 u, u64 v, u64 m) { return mulmod(u, v, m); }); }

  // Complex conjugation: zeta -> zeta^{-1} permutes the embeddings j <-> -j.
  Image conj(const Image& a) const {
    Image out(a.size());
    for (std::size_t l = 0; l < lanes_.size(); ++l)
      for (std::size_t i = 0; i < units_.size(); ++i) out[l * units_.size() + i] = a[l * units_.size() + partner(i)];
    return out;
  }

  static bool is_zero(const Image& x) {
    for (u64 v : x)
      if (v != 0) return false;
    return true;
  }

 private:
  struct Lane {
    u64 ell;
    std::vector<u64> roots;
    std::vector<u64> powers;  // w^k for k < L when L is small
  };

  static u64 reduce(const Rational& r, u64 ell) {
    const mpz_class m(static_cast<unsigned long>(ell));
    mpz_class num = r.num() % m, den = r.den() % m;
    if (num < 0) num += m;
    if (den == 0) throw std::domain_error("ModularEmbeddings: denominator divisible by the auxiliary prime");
    return mulmod(num.get_ui(), inverse_mod(static_cast<i64>(den.get_ui()), ell), ell);
  }

  std::size_t partner(std::size_t i) const {
    const u64 target = (n_ - units_[i]) % n_;
    return static_cast<std::size_t>(std::lower_bound(units_.begin(), units_.end(), target) - units_.begin());
  }

  template <class Op>
  Image pointwise(const Image& a, const Image& b, Op op) const {
    Image out(a.size());
    for (std::size_t l = 0; l < lanes_.size(); ++l) {
      const u64 m = lanes_[l].ell;
      for (std::size_t i = 0; i < units_.size(); ++i) {
        const std::size_t s = l * units_.size() + i;
        out[s] = op(a[s], b[s], m);
      }
    }
    return out;
  }

  u64 n_;
  std::vector<u64> units_;
  std::vector<Lane> lanes_;
};

template <>
struct scalar_traits<Cyclotomic> {
  static constexpr bool exact = true;
  static constexpr const char* name = "cyclotomic";
  static double magnitude(const Cyclotomic& x) { return std::abs(x.to_complex()); }
  static bool is_zero(const Cyclotomic& x) { return x.is_zero(); }
  static Cyclotomic from_rational(const Rational& r) { return Cyclotomic(r); }
  static Complex to_complex(const Cyclotomic& x) { return x.to_complex(); }
  static std::string str(const Cyclotomic& x) { return x.str(); }
};

}  // namespace rslab
