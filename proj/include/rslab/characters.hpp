#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rslab/arith.hpp"
#include "rslab/cyclotomic.hpp"
#include "rslab/langlands.hpp"
#include "rslab/scalar.hpp"

namespace rslab {

// Cyclic factors of (Z/p^k)^x with discrete-log tables; 2^k for k >= 3 splits as <-1> x <5>.
struct CharComponent {
  u64 p = 0;
  int k = 0;
  u64 pk = 1;
  std::vector<u64> orders;
  std::vector<u64> gens;
  std::vector<std::vector<u64>> dlog;  // dlog[j][a mod pk], meaningful for a prime to p
};

class CharacterGroup {
 public:
  static std::shared_ptr<const CharacterGroup> of(u64 q) {
    if (q == 0) throw std::invalid_argument("CharacterGroup: modulus 0");
    static std::mutex mu;
    static std::map<u64, std::shared_ptr<const CharacterGroup>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
    auto g = std::shared_ptr<const CharacterGroup>(new CharacterGroup(q));
    cache.emplace(q, g);
    return g;
  }

  u64 modulus() const { return q_; }
  u64 size() const { return size_; }
  u64 exponent() const { return exponent_; }
  const std::vector<CharComponent>& components() const { return comps_; }
  std::size_t generator_count() const { return flat_.size(); }
  u64 generator_order(std::size_t j) const { return comps_[flat_[j].first].orders[flat_[j].second]; }

  // Integer congruent to generator j at its component and to 1 elsewhere.
  u64 global_generator(std::size_t j) const {
    const auto& c = comps_[flat_[j].first];
    const u64 rest = q_ / c.pk;
    if (rest == 1) return c.gens[flat_[j].second] % q_;
    // x = 1 + rest * t with x = g mod pk.
    const u64 g = c.gens[flat_[j].second];
    const u64 t = mulmod(mod_reduce(static_cast<i64>(g) - 1, c.pk), inverse_mod(static_cast<i64>(rest % c.pk), c.pk), c.pk);
    return (1 + rest * t) % q_;
  }

  // Sum of e_j dlog_j(a) (E / order_j) mod E, for a prime to q.
  u64 raw_exponent(const std::vector<u64>& e, i64 a) const {
    u64 k = 0;
    std::size_t j = 0;
    for (const auto& c : comps_) {
      const u64 r = mod_reduce(a, c.pk);
      for (std::size_t i = 0; i < c.orders.size(); ++i, ++j) {
        if (e[j] == 0) continue;
        k = (k + mulmod(mulmod(e[j], c.dlog[i][r], exponent_), exponent_ / c.orders[i], exponent_)) % exponent_;
      }
    }
    return k;
  }

 private:
  explicit CharacterGroup(u64 q) : q_(q), size_(euler_phi(q)) {
    exponent_ = 1;
    for (auto [p, k] : factorize_or_empty(q)) {
      CharComponent c;
      c.p = p;
      c.k = k;
      c.pk = ipow(p, k);
      if (p != 2) {
        const u64 g = primitive_root_prime_power(p, k);
        const u64 order = c.pk / p * (p - 1);
        c.orders = {order};
        c.gens = {g};
        c.dlog.assign(1, std::vector<u64>(c.pk, 0));
        u64 x = 1;
        for (u64 j = 0; j < order; ++j) {
          c.dlog[0][x] = j;
          x = mulmod(x, g, c.pk);
        }
      } else if (k == 2) {
        c.orders = {2};
        c.gens = {3};
        c.dlog.assign(1, std::vector<u64>(4, 0));
        c.dlog[0][3] = 1;
      } else if (k >= 3) {
        const u64 order5 = c.pk / 4;
        c.orders = {2, order5};
        c.gens = {c.pk - 1, 5};
        c.dlog.assign(2, std::vector<u64>(c.pk, 0));
        u64 x = 1;
        for (u64 j = 0; j < order5; ++j) {
          c.dlog[0][x] = 0;
          c.dlog[1][x] = j;
          c.dlog[0][c.pk - x] = 1;
          c.dlog[1][c.pk - x] = j;
          x = mulmod(x, 5, c.pk);
        }
      }
      for (std::size_t i = 0; i < c.orders.size(); ++i) {
        flat_.emplace_back(comps_.size(), i);
        exponent_ = lcm_u64(exponent_, c.orders[i]);
      }
      comps_.push_back(std::move(c));
    }
  }

  static Factorization factorize_or_empty(u64 q) { return q == 1 ? Factorization{} : factorize(q); }

  u64 q_;
  u64 size_;
  u64 exponent_ = 1;
  std::vector<CharComponent> comps_;
  std::vector<std::pair<std::size_t, std::size_t>> flat_;
};

class DirichletCharacter {
 public:
  static DirichletCharacter trivial(u64 q) {
    auto g = CharacterGroup::of(q);
    return DirichletCharacter(g, std::vector<u64>(g->generator_count(), 0));
  }

  // Mixed-radix index over generator exponents; index 0 is trivial.
  static DirichletCharacter from_index(u64 q, u64 index) {
    auto g = CharacterGroup::of(q);
    if (index >= g->size())
      throw std::out_of_range("character index " + std::to_string(index) + " out of range for modulus " +
                              std::to_string(q));
    std::vector<u64> e(g->generator_count());
    for (std::size_t j = 0; j < e.size(); ++j) {
      e[j] = index % g->generator_order(j);
      index /= g->generator_order(j);
    }
    return DirichletCharacter(g, std::move(e));
  }

  static DirichletCharacter from_exponents(u64 q, std::vector<u64> e) {
    auto g = CharacterGroup::of(q);
    if (e.size() != g->generator_count()) throw std::invalid_argument("DirichletCharacter: exponent count");
    for (std::size_t j = 0; j < e.size(); ++j) e[j] %= g->generator_order(j);
    return DirichletCharacter(g, std::move(e));
  }

  // Character mod q whose value at generator j is vals[j].
  static DirichletCharacter from_generator_values(u64 q, const std::vector<RootOfUnity>& vals) {
    auto g = CharacterGroup::of(q);
    if (vals.size() != g->generator_count()) throw std::invalid_argument("DirichletCharacter: value count");
    std::vector<u64> e(vals.size());
    for (std::size_t j = 0; j < vals.size(); ++j) {
      const u64 o = g->generator_order(j);
      if (o % vals[j].n != 0) throw std::invalid_argument("DirichletCharacter: value order does not divide generator order");
      e[j] = static_cast<u64>(vals[j].k) * (o / vals[j].n) % o;
    }
    return DirichletCharacter(g, std::move(e));
  }

  u64 modulus() const { return g_->modulus(); }
  const std::vector<u64>& exponents() const { return e_; }
  const CharacterGroup& group() const { return *g_; }

  u64 index() const {
    u64 idx = 0, radix = 1;
    for (std::size_t j = 0; j < e_.size(); ++j) {
      idx += e_[j] * radix;
      radix *= g_->generator_order(j);
    }
    return idx;
  }

  bool coprime(i64 a) const { return std::gcd(mod_reduce(a, modulus()), modulus()) == 1; }

  std::optional<RootOfUnity> value_root(i64 a) const {
    if (!coprime(a)) return std::nullopt;
    return RootOfUnity::make(static_cast<i64>(g_->raw_exponent(e_, a)), g_->exponent());
  }

  // chi(a) = zeta_E^k with E = group exponent, for a prime to q.
  u64 raw_exponent(i64 a) const { return g_->raw_exponent(e_, a); }

  Complex value(i64 a) const {
    auto r = value_root(a);
    return r ? r->value() : Complex(0.0, 0.0);
  }

  Cyclotomic value_exact(i64 a) const {
    auto r = value_root(a);
    return r ? Cyclotomic::root_of_unity(*r) : Cyclotomic(0);
  }

  bool is_trivial() const {
    for (u64 x : e_)
      if (x != 0) return false;
    return true;
  }

  // 0 if chi(-1) = 1, 1 if chi(-1) = -1.
  int parity() const {
    const auto r = value_root(-1);
    return r->k == 0 ? 0 : 1;
  }

  DirichletCharacter conj() const {
    std::vector<u64> e(e_.size());
    for (std::size_t j = 0; j < e.size(); ++j) e[j] = (g_->generator_order(j) - e_[j]) % g_->generator_order(j);
    return DirichletCharacter(g_, std::move(e));
  }

  friend DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b) {
    if (a.modulus() != b.modulus()) throw std::invalid_argument("character product: modulus mismatch");
    std::vector<u64> e(a.e_.size());
    for (std::size_t j = 0; j < e.size(); ++j) e[j] = (a.e_[j] + b.e_[j]) % a.g_->generator_order(j);
    return DirichletCharacter(a.g_, std::move(e));
  }

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus() == b.modulus() && a.e_ == b.e_;
  }

  // Read off from the exponent of each cyclic factor.
  u64 conductor() const {
    u64 c = 1;
    std::size_t j = 0;
    for (const auto& comp : g_->components()) {
      const std::size_t n = comp.orders.size();
      c *= ipow(comp.p, component_conductor_exp(comp, j));
      j += n;
    }
    return c;
  }

  bool is_primitive() const { return conductor() == modulus(); }

  // Conductor exponent at p (0 if p does not divide q).
  int conductor_exp(u64 p) const {
    std::size_t j = 0;
    for (const auto& comp : g_->components()) {
      if (comp.p == p) return component_conductor_exp(comp, j);
      j += comp.orders.size();
    }
    return 0;
  }

  // The character mod m inducing this one, for conductor | m | q.
  DirichletCharacter reduce_to(u64 m) const {
    if (modulus() % m != 0 || m % conductor() != 0)
      throw std::invalid_argument("reduce_to: need conductor | m | modulus");
    auto h = CharacterGroup::of(m);
    std::vector<RootOfUnity> vals;
    for (std::size_t j = 0; j < h->generator_count(); ++j) {
      u64 a = h->global_generator(j);
      while (std::gcd(a, modulus()) != 1) a += m;
      vals.push_back(*value_root(static_cast<i64>(a)));
    }
    return from_generator_values(m, vals);
  }

  DirichletCharacter primitive() const { return reduce_to(conductor()); }

  // The character mod M (a multiple of q) given by a -> chi(a mod q).
  DirichletCharacter lift(u64 M) const {
    if (M % modulus() != 0) throw std::invalid_argument("lift: target must be a multiple of the modulus");
    auto h = CharacterGroup::of(M);
    std::vector<RootOfUnity> vals;
    for (std::size_t j = 0; j < h->generator_count(); ++j)
      vals.push_back(*value_root(static_cast<i64>(h->global_generator(j) % modulus())));
    return from_generator_values(M, vals);
  }

  // The p-primary factor chi_p, a character mod p^k.
  DirichletCharacter component(u64 p) const {
    std::size_t j = 0;
    for (const auto& comp : g_->components()) {
      if (comp.p == p) {
        std::vector<u64> e(e_.begin() + static_cast<std::ptrdiff_t>(j),
                           e_.begin() + static_cast<std::ptrdiff_t>(j + comp.orders.size()));
        return from_exponents(comp.pk, std::move(e));
      }
      j += comp.orders.size();
    }
    return trivial(1);
  }

 private:
  DirichletCharacter(std::shared_ptr<const CharacterGroup> g, std::vector<u64> e) : g_(std::move(g)), e_(std::move(e)) {}

  int component_conductor_exp(const CharComponent& comp, std::size_t j) const {
    if (comp.p != 2) {
      const u64 e = e_[j];
      if (e == 0) return 0;
      int c = 1;
      while (e % ipow(comp.p, comp.k - c) != 0) ++c;
      return c;
    }
    if (comp.k <= 1) return 0;
    if (comp.k == 2) return e_[j] == 0 ? 0 : 2;
    const u64 a = e_[j], b = e_[j + 1];
    if (b == 0) return a == 0 ? 0 : 2;
    int c = 3;
    while (b % ipow(2, comp.k - c) != 0) ++c;
    return c;
  }

  std::shared_ptr<const CharacterGroup> g_;
  std::vector<u64> e_;
};

inline std::vector<DirichletCharacter> char_group(u64 q) {
  std::vector<DirichletCharacter> out;
  const u64 n = CharacterGroup::of(q)->size();
  out.reserve(n);
  for (u64 i = 0; i < n; ++i) out.push_back(DirichletCharacter::from_index(q, i));
  return out;
}

inline Complex additive_character(const Rational& x) {
  // e(x) = exp(2 pi i x), reduced mod 1 first.
  const mpz_class n = x.num(), d = x.den();
  mpz_class r = n % d;
  if (r < 0) r += d;
  const double t = 2.0 * std::numbers::pi * (mpq_class(r, d).get_d());
  return {std::cos(t), std::sin(t)};
}

// sum_{d mod q, (d,q)=1} chi(d) e(d beta).
inline Complex gauss_beta(const DirichletCharacter& chi, const Rational& beta) {
  const u64 q = chi.modulus();
  Complex s(0.0, 0.0);
  for (u64 d = 0; d < q; ++d) {
    if (std::gcd(d, q) != 1) continue;
    s += chi.value(static_cast<i64>(d)) * additive_character(Rational(static_cast<long>(d)) * beta);
  }
  return s;
}

inline Cyclotomic gauss_beta_exact(const DirichletCharacter& chi, const Rational& beta) {
  const u64 q = chi.modulus();
  const u64 E = chi.group().exponent();
  if (!beta.den().fits_ulong_p()) throw std::invalid_argument("gauss_beta_exact: denominator too large");
  const u64 b = beta.den().get_ui();
  mpz_class rz = beta.num() % beta.den();
  if (rz < 0) rz += beta.den();
  const u64 r = rz.get_ui();
  const u64 L = lcm_u64(E, b);
  CyclotomicAccumulator acc(L);
  for (u64 d = 0; d < q; ++d) {
    if (std::gcd(d, q) != 1) continue;
    const u64 k = chi.raw_exponent(static_cast<i64>(d)) * (L / E) + mulmod(d % b, r, b) * (L / b);
    acc.add_one(static_cast<i64>(k % L));
  }
  return acc.finish();
}

// q = 1 gives 1 by the trivial-group convention.
inline Complex gauss_classical(const DirichletCharacter& chi) {
  return gauss_beta(chi, Rational(1, static_cast<long>(chi.modulus())));
}

inline Cyclotomic gauss_classical_exact(const DirichletCharacter& chi) {
  return gauss_beta_exact(chi, Rational(1, static_cast<long>(chi.modulus())));
}

// c | q2 | lcm(c, rad q) with q2 | q.
inline bool in_nonvanishing_window(const DirichletCharacter& chi, u64 q2) {
  const u64 q = chi.modulus();
  const u64 c = chi.conductor();
  return q % q2 == 0 && q2 % c == 0 && lcm_u64(c, radical(q)) % q2 == 0;
}

// Exact image of tau_q(chi, r/b) in Q(zeta_L), L = lcm(E, b), under every embedding of emb.
inline ModularEmbeddings::Image gauss_beta_image(const ModularEmbeddings& emb, const DirichletCharacter& chi, u64 r,
                                                 u64 b) {
  const u64 q = chi.modulus(), E = chi.group().exponent(), L = emb.order();
  if (L % E != 0 || L % b != 0) throw std::invalid_argument("gauss_beta_image: embedding order mismatch");
  auto x = emb.zero();
  for (u64 d = 0; d < q; ++d) {
    if (std::gcd(d, q) != 1) continue;
    const u64 k = chi.raw_exponent(static_cast<i64>(d)) * (L / E) + mulmod(d % b, r % b, b) * (L / b);
    emb.add_monomial(x, 1, static_cast<i64>(k % L));
  }
  return x;
}

// Exact zero test for tau_q(chi, r/b); every conjugate is bounded by phi(q).
inline bool gauss_beta_is_zero(const DirichletCharacter& chi, u64 r, u64 b) {
  const ModularEmbeddings emb(lcm_u64(chi.group().exponent(), b), chi.modulus());
  return ModularEmbeddings::is_zero(gauss_beta_image(emb, chi, r, b));
}

// Float magnitudes above this are certainly nonzero; below it the exact test decides.
inline constexpr double kGaussZeroScreen = 1e-6;

struct WindowReport {
  bool in_window = false;
  bool ok = true;  // false only if a zero occurs inside the window
  std::vector<u64> zero_numerators;
};

// Inside the window asserts tau_q(chi, r/q2) != 0 for all r prime to q2; outside it only records zeros.
inline WindowReport nonvanishing_window_check(const DirichletCharacter& chi, u64 q2) {
  if (q2 == 0 || chi.modulus() % q2 != 0) throw std::invalid_argument("nonvanishing_window_check: q2 must divide q");
  WindowReport rep;
  rep.in_window = in_nonvanishing_window(chi, q2);
  for (u64 r = 1; r <= q2; ++r) {
    if (std::gcd(r, q2) != 1) continue;
    const Rational beta(static_cast<long>(r), static_cast<long>(q2));
    if (std::abs(gauss_beta(chi, beta)) > kGaussZeroScreen) continue;
    if (gauss_beta_is_zero(chi, r, q2)) rep.zero_numerators.push_back(r % q2);
  }
  rep.ok = !(rep.in_window && !rep.zero_numerators.empty());
  return rep;
}

// (1/q1) sum_{b mod q1} e(gamma b / q1), evaluated in Q(zeta_q1).
inline Rational orthogonality_avg(i64 gamma, u64 q1) {
  if (q1 == 0) throw std::invalid_argument("orthogonality_avg: q1 = 0");
  CyclotomicAccumulator acc(q1);
  for (u64 b = 0; b < q1; ++b) acc.add_one(static_cast<i64>(mulmod(mod_reduce(gamma, q1), b, q1)));
  const Cyclotomic s = acc.finish();
  for (std::size_t k = 1; k < s.coeffs().size(); ++k)
    if (s.coeffs()[k].sign() != 0) throw std::logic_error("orthogonality_avg: non-rational sum");
  return s.coeffs()[0] / Rational(static_cast<long>(q1));
}

struct AddToMultOutcome {
  bool ok = false;
  Complex lhs;
  Complex rhs;
  bool exact = false;
};

inline void require_primitive(const DirichletCharacter& chi, const char* where) {
  if (!chi.is_primitive()) throw std::invalid_argument(std::string(where) + ": character is not primitive");
}

// sum_{a mod q} chibar(-a) e(a n / q).
inline Complex addtomult_sum(const DirichletCharacter& chibar, i64 n) {
  const u64 q = chibar.modulus();
  Complex s(0.0, 0.0);
  for (u64 a = 0; a < q; ++a)
    s += chibar.value(-static_cast<i64>(a)) *
         additive_character(Rational(static_cast<long>(mulmod(a, mod_reduce(n, q), q)), static_cast<long>(q)));
  return s;
}

// (tau(chi)/q) sum_a conj(chi)(-a) e(a n / q) = chi(n).
inline AddToMultOutcome addtomult_check(const DirichletCharacter& chi, i64 n, bool exact = true, double tol = 1e-10) {
  require_primitive(chi, "addtomult_check");
  const u64 q = chi.modulus();
  const auto chibar = chi.conj();
  AddToMultOutcome out;
  out.exact = exact;
  if (exact) {
    // tau * S - q chi(n) in Z[zeta_L]; conjugates are bounded by q^2 + q.
    const u64 E = chi.group().exponent();
    const u64 L = lcm_u64(E, q);
    const ModularEmbeddings emb(L, q * q + q);
    auto S = emb.zero();
    for (u64 a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const u64 k = chibar.raw_exponent(-static_cast<i64>(a)) * (L / E) + mulmod(a, mod_reduce(n, q), q) * (L / q);
      emb.add_monomial(S, 1, static_cast<i64>(k % L));
    }
    auto chin = emb.zero();
    if (chi.coprime(n)) emb.add_monomial(chin, static_cast<i64>(q), static_cast<i64>(chi.raw_exponent(n) * (L / E)));
    out.ok = ModularEmbeddings::is_zero(emb.sub(emb.mul(gauss_beta_image(emb, chi, 1, q), S), chin));
    out.lhs = gauss_classical(chi) * addtomult_sum(chibar, n) / static_cast<double>(q);
    out.rhs = chi.value(n);
    return out;
  }
  out.lhs = gauss_classical(chi) * addtomult_sum(chibar, n) / static_cast<double>(q);
  out.rhs = chi.value(n);
  out.ok = std::abs(out.lhs - out.rhs) <= tol;
  return out;
}

// epsilon_p = tau(chi_p) chi_p(q / p^k) / sqrt(p^k); the product over p is tau(chi) / sqrt(q).
inline Complex local_root_number(const DirichletCharacter& chi, u64 p) {
  require_primitive(chi, "local_root_number");
  const u64 q = chi.modulus();
  if (q % p != 0) return {1.0, 0.0};
  const auto cp = chi.component(p);
  const u64 pk = cp.modulus();
  return gauss_classical(cp) * cp.value(static_cast<i64>(q / pk)) / std::sqrt(static_cast<double>(pk));
}

// GL(1) representation attached to a primitive character: parameters chi(p) at p not dividing q.
inline GlobalRep<Complex> gl1_rep(const DirichletCharacter& chi, u64 pmax) {
  require_primitive(chi, "gl1_rep");
  std::map<u64, LocalData<Complex>> locals;
  std::vector<u64> primes = primes_up_to(pmax);
  for (auto [p, k] : chi.modulus() == 1 ? Factorization{} : factorize(chi.modulus()))
    if (p > pmax) primes.push_back(p);
  for (u64 p : primes) {
    LocalData<Complex> d;
    d.prime = p;
    if (chi.modulus() % p == 0) {
      d.params = {Complex(0.0, 0.0)};
      d.conductor_exp = chi.conductor_exp(p);
      d.root_number = local_root_number(chi, p);
      d.central_value = Complex(0.0, 0.0);
    } else {
      d.params = {chi.value(static_cast<i64>(p))};
      d.central_value = d.params[0];
    }
    locals.emplace(p, std::move(d));
  }
  return GlobalRep<Complex>(1, pmax, std::move(locals));
}

}  // namespace rslab
