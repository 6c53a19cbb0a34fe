#pragma once

#include <array>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rslab/arith.hpp"
#include "rslab/scalar.hpp"

namespace rslab {

template <int N>
class RatMat {
  static_assert(N == 2 || N == 3, "RatMat: dimension 2 or 3");

 public:
  RatMat() {
    for (auto& row : a_) row.fill(Rational(0));
  }

  RatMat(std::initializer_list<std::initializer_list<Rational>> rows) : RatMat() {
    if (rows.size() != N) throw std::invalid_argument("RatMat: wrong row count");
    int i = 0;
    for (const auto& row : rows) {
      if (row.size() != N) throw std::invalid_argument("RatMat: wrong column count");
      int j = 0;
      for (const auto& x : row) a_[i][j++] = x;
      ++i;
    }
  }

  static RatMat identity() {
    RatMat m;
    for (int i = 0; i < N; ++i) m.a_[i][i] = Rational(1);
    return m;
  }

  static RatMat diag(const std::array<Rational, N>& d) {
    RatMat m;
    for (int i = 0; i < N; ++i) m.a_[i][i] = d[i];
    return m;
  }

  Rational& operator()(int i, int j) { return a_.at(i).at(j); }
  const Rational& operator()(int i, int j) const { return a_.at(i).at(j); }

  friend RatMat operator*(const RatMat& x, const RatMat& y) {
    RatMat m;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Rational s(0);
        for (int k = 0; k < N; ++k) s += x.a_[i][k] * y.a_[k][j];
        m.a_[i][j] = s;
      }
    return m;
  }

  friend RatMat operator*(const Rational& c, const RatMat& x) {
    RatMat m = x;
    for (auto& row : m.a_)
      for (auto& v : row) v *= c;
    return m;
  }

  std::array<Rational, N> apply(const std::array<Rational, N>& v) const {
    std::array<Rational, N> out;
    for (int i = 0; i < N; ++i) {
      Rational s(0);
      for (int k = 0; k < N; ++k) s += a_[i][k] * v[k];
      out[i] = s;
    }
    return out;
  }

  Rational det() const {
    if constexpr (N == 2) {
      return a_[0][0] * a_[1][1] - a_[0][1] * a_[1][0];
    } else {
      return a_[0][0] * (a_[1][1] * a_[2][2] - a_[1][2] * a_[2][1]) -
             a_[0][1] * (a_[1][0] * a_[2][2] - a_[1][2] * a_[2][0]) +
             a_[0][2] * (a_[1][0] * a_[2][1] - a_[1][1] * a_[2][0]);
    }
  }

  // Adjugate over the determinant.
  RatMat inverse() const {
    const Rational d = det();
    if (d.sign() == 0) throw std::domain_error("RatMat::inverse: singular matrix");
    RatMat m;
    if constexpr (N == 2) {
      m.a_ = {{{a_[1][1], -a_[0][1]}, {-a_[1][0], a_[0][0]}}};
    } else {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
          m.a_[i][j] = a_[r0][c0] * a_[r1][c1] - a_[r0][c1] * a_[r1][c0];
        }
    }
    return (Rational(1) / d) * m;
  }

  bool is_integral() const {
    for (const auto& row : a_)
      for (const auto& v : row)
        if (v.den() != 1) return false;
    return true;
  }

  friend bool operator==(const RatMat& x, const RatMat& y) { return x.a_ == y.a_; }
  friend bool operator!=(const RatMat& x, const RatMat& y) { return !(x == y); }

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) s += (j ? "," : "") + a_[i][j].str();
      s += i + 1 < N ? ";" : ")";
    }
    return s;
  }

  friend std::ostream& operator<<(std::ostream& os, const RatMat& m) { return os << m.str(); }

  // Accepts "a,b;c,d" (rows separated by ';').
  static RatMat parse(const std::string& text) {
    RatMat m;
    std::stringstream rows(text);
    std::string row;
    int i = 0;
    while (std::getline(rows, row, ';')) {
      if (i >= N) throw std::invalid_argument("RatMat::parse: too many rows in '" + text + "'");
      std::stringstream cols(row);
      std::string cell;
      int j = 0;
      while (std::getline(cols, cell, ',')) {
        if (j >= N) throw std::invalid_argument("RatMat::parse: too many columns in '" + text + "'");
        m.a_[i][j++] = Rational::parse(cell);
      }
      if (j != N) throw std::invalid_argument("RatMat::parse: too few columns in '" + text + "'");
      ++i;
    }
    if (i != N) throw std::invalid_argument("RatMat::parse: too few rows in '" + text + "'");
    return m;
  }

 private:
  std::array<std::array<Rational, N>, N> a_;
};

using Mat2 = RatMat<2>;
using Mat3 = RatMat<3>;

// (1, 0; u/w, 1) = (1, w/u; 0, 1) (w, 0; 0, 1/w) (0, -1/u; u, w).
struct SuppDecomposition {
  Mat2 lhs;
  Mat2 rhs;
  bool ok = false;
};

inline SuppDecomposition verify_supp_decomposition(const Rational& u, const Rational& w) {
  if (u.sign() == 0 || w.sign() == 0) throw std::invalid_argument("verify_supp_decomposition: u, w must be nonzero");
  SuppDecomposition out;
  out.lhs = Mat2{{1, 0}, {u / w, 1}};
  out.rhs = Mat2{{1, w / u}, {0, 1}} * Mat2{{w, 0}, {0, Rational(1) / w}} * Mat2{{0, -Rational(1) / u}, {u, w}};
  out.ok = out.lhs == out.rhs;
  return out;
}

// Designated prime p, auxiliary modulus q' and prime p' with alpha = q' p' / p, so val_p(alpha) = -1.
struct CosetContext {
  u64 p = 2;
  u64 qprime = 1;
  u64 pprime = 3;

  CosetContext() = default;
  CosetContext(u64 p_, u64 qprime_, u64 pprime_) : p(p_), qprime(qprime_), pprime(pprime_) { validate(); }

  void validate() const {
    if (!is_prime(p) || !is_prime(pprime) || p == pprime)
      throw std::invalid_argument("CosetContext: p and p' must be distinct primes");
    if (qprime == 0 || std::gcd(p, qprime * pprime) != 1)
      throw std::invalid_argument("CosetContext: p must be prime to q' p'");
  }

  Rational alpha() const {
    return Rational(static_cast<unsigned long>(qprime * pprime), static_cast<unsigned long>(p));
  }
};

namespace detail {

// p-adic valuation of a nonzero rational.
inline int rational_valuation(const Rational& x, u64 p) {
  if (x.sign() == 0) throw std::domain_error("rational_valuation: zero");
  const mpz_class P(static_cast<unsigned long>(p));
  int v = 0;
  mpz_class n = x.num(), d = x.den();
  while (n % P == 0) {
    n /= P;
    ++v;
  }
  while (d % P == 0) {
    d /= P;
    --v;
  }
  return v;
}

struct MpzBezout {
  mpz_class g, s, t;  // g = s a + t b
};

inline MpzBezout mpz_egcd(const mpz_class& a, const mpz_class& b) {
  MpzBezout r;
  mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline mpz_class mpz_lcm(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace detail

// Positive generator of cZ + dZ with Bezout coefficients; (c, d) must not both vanish.
struct RowContent {
  Rational generator;
  mpz_class s, t;  // generator = s c + t d
};

inline RowContent row_content(const Rational& c, const Rational& d) {
  if (c.sign() == 0 && d.sign() == 0) throw std::domain_error("row_content: zero row");
  const mpz_class L = detail::mpz_lcm(c.den(), d.den());
  const mpz_class C = c.num() * (L / c.den()), D = d.num() * (L / d.den());
  auto b = detail::mpz_egcd(C, D);
  if (b.g < 0) {
    b.g = -b.g;
    b.s = -b.s;
    b.t = -b.t;
  }
  return {Rational(b.g, L), b.s, b.t};
}

// gamma_1 in p Z and gamma_2 in p^{-2} Z.
inline bool supp_support(const Rational& gamma1, const Rational& gamma2, const CosetContext& ctx) {
  if (gamma1.sign() == 0 || gamma2.sign() == 0) return false;
  auto in_scaled_lattice = [&](const Rational& x, int pexp) {
    // x in p^pexp Z: val_p(x) >= pexp and integral away from p.
    if (detail::rational_valuation(x, ctx.p) < pexp) return false;
    mpz_class d = x.den();
    const mpz_class P(static_cast<unsigned long>(ctx.p));
    while (d % P == 0) d /= P;
    return d == 1;
  };
  return in_scaled_lattice(gamma1, 1) && in_scaled_lattice(gamma2, -2);
}

struct CanonicalCoset {
  Rational gamma1;
  Rational gamma2;
  Mat2 u;  // upper unipotent
  Mat2 g;  // in GL_2(Z)
  int epsilon = 1;

  Mat2 canonical(const CosetContext& ctx) const {
    return Mat2::diag({gamma1 * gamma2, gamma1}) * Mat2{{1, 0}, {ctx.alpha(), 1}};
  }
};

// Follows the constructive proof: gamma_1 from I(M) = cZ + dZ = gamma_1 p^{-1} Z, g in GL_2(Z) with det g = eps
// moving the bottom row of gamma_1^{-1} M to (alpha, 1), then u clears the top-right entry.
inline CanonicalCoset clgp_reduce(const Mat2& M, const CosetContext& ctx) {
  ctx.validate();
  const Rational detM = M.det();
  if (detM.sign() == 0) throw std::invalid_argument("clgp_reduce: singular matrix");
  const Rational P(static_cast<unsigned long>(ctx.p));
  CanonicalCoset out;
  out.gamma1 = P * row_content(M(1, 0), M(1, 1)).generator;
  out.epsilon = detM.sign();
  // (C0, D0) = p * bottom row of gamma_1^{-1} M is a primitive integer vector.
  const Rational c0 = P * M(1, 0) / out.gamma1, d0 = P * M(1, 1) / out.gamma1;
  const auto b1 = detail::mpz_egcd(c0.num(), d0.num());
  if (b1.g != 1 && b1.g != -1) throw std::logic_error("clgp_reduce: bottom row not primitive");
  const Rational sgn1(b1.g.get_si());
  const Mat2 h1{{c0, d0}, {-Rational(b1.t) * sgn1, Rational(b1.s) * sgn1}};
  const mpz_class A0(static_cast<unsigned long>(ctx.qprime * ctx.pprime));
  const auto b2 = detail::mpz_egcd(A0, mpz_class(static_cast<unsigned long>(ctx.p)));
  const Mat2 h2{{Rational(A0), P}, {-Rational(b2.t), Rational(b2.s)}};
  out.g = h1.inverse() * Mat2::diag({Rational(1), Rational(out.epsilon)}) * h2;
  const Mat2 Nm = (Rational(1) / out.gamma1) * M * out.g;
  out.u = Mat2{{1, -Nm(0, 1)}, {0, 1}};
  out.gamma2 = (out.u * Nm)(0, 0);
  if (out.gamma2 != Rational(out.epsilon) * detM / (out.gamma1 * out.gamma1))
    throw std::logic_error("clgp_reduce: determinant relation failed");
  return out;
}

struct ClgpCheck {
  bool ok = false;
  bool factorization = false;  // u M g = diag(g1 g2, g1) (1, 0; alpha, 1)
  bool determinant = false;    // g2 = eps g1^{-2} det M
  bool positive = false;
  bool u_unipotent = false;
  bool g_unimodular = false;
};

inline ClgpCheck check_canonical(const Mat2& M, const CanonicalCoset& c, const CosetContext& ctx) {
  ClgpCheck r;
  r.factorization = c.u * M * c.g == c.canonical(ctx);
  r.determinant = c.gamma2 == Rational(c.epsilon) * M.det() / (c.gamma1 * c.gamma1);
  r.positive = c.gamma1.sign() > 0 && c.gamma2.sign() > 0;
  r.u_unipotent = c.u(0, 0) == Rational(1) && c.u(1, 1) == Rational(1) && c.u(1, 0).sign() == 0;
  const Rational dg = c.g.det();
  r.g_unimodular = c.g.is_integral() && (dg == Rational(1) || dg == Rational(-1)) && dg == Rational(c.epsilon);
  r.ok = r.factorization && r.determinant && r.positive && r.u_unipotent && r.g_unimodular;
  return r;
}

// Instance data for the 3x3 identity; gamma is given and kappa is solved from
// diag(n q / a_j, n q^2) = gamma diag(a_k, 1) kappa.
struct Main2Instance {
  Rational aj{1}, ak{1};
  u64 n = 1;
  u64 q = 1;
  Rational beta2{0};
  Rational u{0}, v{0};
  Mat2 gamma = Mat2::identity();
};

// r = q beta2 prime to q (or q = 1), v = -(n r)^{-1} mod q shifted by v_shift q, kappa_0 = (1, q^2 y; q^2 z, 1 + q^4 y z)
// and u = -q y v, so that beta_1' = 0; gamma is then read off the defining relation.
inline Main2Instance make_main2_instance(u64 n, u64 q, i64 r, i64 v_shift, i64 y, i64 z, const Rational& aj,
                                         const Rational& ak) {
  if (n == 0 || q == 0 || std::gcd(n, q) != 1) throw std::invalid_argument("make_main2_instance: need (n, q) = 1");
  if (q > 1 && std::gcd(mod_reduce(r, q), q) != 1) throw std::invalid_argument("make_main2_instance: r must be prime to q");
  Main2Instance in;
  in.aj = aj;
  in.ak = ak;
  in.n = n;
  in.q = q;
  const Rational Q(static_cast<unsigned long>(q)), Nn(static_cast<unsigned long>(n));
  in.beta2 = Rational(r) / Q;
  const i64 v0 = q == 1 ? 0
                        : static_cast<i64>(mod_reduce(-static_cast<i64>(inverse_mod(static_cast<i64>(mulmod(n % q, mod_reduce(r, q), q)), q)), q));
  in.v = Rational(v0) + Rational(v_shift) * Q;
  in.u = -Q * Rational(y) * in.v;
  const Rational q2 = Q * Q;
  const Mat2 kappa0{{1, q2 * Rational(y)}, {q2 * Rational(z), Rational(1) + q2 * q2 * Rational(y) * Rational(z)}};
  in.gamma = Mat2::diag({Nn * Q / aj, Nn * q2}) * kappa0.inverse() * Mat2::diag({ak, Rational(1)}).inverse();
  return in;
}

struct Main2Report {
  bool consistent = false;
  std::string inconsistency;
  Mat3 lhs, rhs;
  bool identity = false;
  Mat2 kappa;
  Rational beta1_prime, beta2_prime;
  bool beta_formulas_agree = false;  // n q gamma^{-1} (u / a_j, v) = diag(a_k, 1) kappa (u, v / q)
  bool beta1_zero = false;
  Rational det_gamma, det_kappa;
  bool det_relation = false;  // det gamma * a_j * a_k * det kappa = n^2 q^3
  bool kappa_unimodular = false;
  std::vector<u64> kappa_denominator_primes;
  bool kappa_integral_at_q = false;
  bool kappa_congruent_mod_q2 = false;  // kappa = 1 mod q^2 at primes dividing q
  bool inclusion_identity = false;      // gamma^{-1} diag(q / a_j, 1) factorization
  bool inclusion_in_k1_q4 = false;      // diag(q^-2, 1) kappa diag(q^2, 1) in K_1(q^4) at primes dividing q
  bool ok() const { return consistent && identity && beta_formulas_agree && beta1_zero && det_relation; }
};

namespace detail {

inline bool integral_at(const Rational& x, u64 p) {
  return x.sign() == 0 || rational_valuation(x, p) >= 0;
}

// x = 1 mod p^e locally at p (x assumed p-integral), i.e. val_p(x - target) >= e.
inline bool congruent_at(const Rational& x, const Rational& target, u64 p, int e) {
  const Rational d = x - target;
  return d.sign() == 0 || rational_valuation(d, p) >= e;
}

}  // namespace detail

inline Main2Report main2_identity_check(const Main2Instance& in) {
  Main2Report rep;
  const Rational Q(static_cast<unsigned long>(in.q)), Nn(static_cast<unsigned long>(in.n));
  const Rational r = Q * in.beta2;
  // Side conditions: r, u, v integral, (n r v + 1) / q integral, (n, q) = 1, gamma invertible.
  if (in.n == 0 || in.q == 0 || std::gcd(in.n, in.q) != 1) {
    rep.inconsistency = "n and q must be coprime positive integers";
    return rep;
  }
  if (r.den() != 1 || in.u.den() != 1 || in.v.den() != 1) {
    rep.inconsistency = "q beta2, u and v must be integral";
    return rep;
  }
  if (((Nn * r * in.v + Rational(1)) / Q).den() != 1) {
    rep.inconsistency = "(n r v + 1) / q is not integral";
    return rep;
  }
  if (in.gamma.det().sign() == 0 || in.aj.sign() == 0 || in.ak.sign() == 0) {
    rep.inconsistency = "gamma, a_j and a_k must be invertible";
    return rep;
  }
  rep.consistent = true;
  const Mat2 gamma_inv = in.gamma.inverse();
  rep.kappa = Mat2::diag({in.ak, Rational(1)}).inverse() * gamma_inv * Mat2::diag({Nn * Q / in.aj, Nn * Q * Q});
  const Mat2 K = Mat2::diag({in.ak, Rational(1)}) * rep.kappa;

  const auto b1 = (Nn * Q) * gamma_inv;
  const auto beta_a = b1.apply({in.u / in.aj, in.v});
  const auto beta_b = K.apply({in.u, in.v / Q});
  rep.beta_formulas_agree = beta_a == beta_b;
  rep.beta1_prime = beta_a[0];
  rep.beta2_prime = beta_a[1];
  rep.beta1_zero = rep.beta1_prime.sign() == 0;

  auto embed = [](const Mat2& m) {
    Mat3 e = Mat3::identity();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) e(i, j) = m(i, j);
    return e;
  };
  const Mat3 U{{1, 0, 0}, {0, 1, 0}, {0, in.beta2, 1}};
  rep.lhs = embed(gamma_inv) * U * Mat3::diag({Nn / in.aj, Nn, Rational(1)});
  const Mat3 T{{1, 0, -rep.beta1_prime}, {0, 1, -rep.beta2_prime}, {0, 0, 1}};
  const Rational nr = Nn * r;
  const Mat3 X{{1, nr * in.u, Q * in.u}, {0, (nr * in.v + Rational(1)) / Q, in.v}, {0, nr, Q}};
  rep.rhs = (Rational(1) / Q) * (T * Mat3::diag({in.ak, Rational(1), Rational(1)}) * embed(rep.kappa) * X);
  rep.identity = rep.lhs == rep.rhs;

  rep.det_gamma = in.gamma.det();
  rep.det_kappa = rep.kappa.det();
  rep.det_relation = rep.det_gamma * in.aj * in.ak * rep.det_kappa == Nn * Nn * Q * Q * Q;
  rep.kappa_unimodular = rep.kappa.is_integral() && (rep.det_kappa == Rational(1) || rep.det_kappa == Rational(-1));

  std::set<u64> den_primes;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      mpz_class d = rep.kappa(i, j).den();
      if (d != 1 && d.fits_ulong_p())
        for (auto [p, k] : factorize(d.get_ui())) den_primes.insert(p);
    }
  rep.kappa_denominator_primes.assign(den_primes.begin(), den_primes.end());

  const auto qf = in.q == 1 ? Factorization{} : factorize(in.q);
  rep.kappa_integral_at_q = true;
  rep.kappa_congruent_mod_q2 = true;
  rep.inclusion_in_k1_q4 = true;
  const Rational Q2 = Q * Q;
  const Mat2 conj = Mat2::diag({Rational(1) / Q2, Rational(1)}) * rep.kappa * Mat2::diag({Q2, Rational(1)});
  for (auto [p, e] : qf) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (!detail::integral_at(rep.kappa(i, j), p)) rep.kappa_integral_at_q = false;
        if (!detail::congruent_at(rep.kappa(i, j), Rational(i == j ? 1 : 0), p, 2 * e)) rep.kappa_congruent_mod_q2 = false;
        if (!detail::integral_at(conj(i, j), p)) rep.inclusion_in_k1_q4 = false;
      }
    if (!detail::congruent_at(conj(1, 0), Rational(0), p, 4 * e) || !detail::congruent_at(conj(1, 1), Rational(1), p, 4 * e))
      rep.inclusion_in_k1_q4 = false;
    if (rep.det_kappa.sign() == 0 || detail::rational_valuation(rep.det_kappa, p) != 0) rep.inclusion_in_k1_q4 = false;
  }
  const Mat2 incl_lhs = gamma_inv * Mat2::diag({Q / in.aj, Rational(1)});
  const Mat2 incl_rhs = (Rational(1) / (Nn * Q2)) * Mat2::diag({in.ak * Q2, Rational(1)}) * conj;
  rep.inclusion_identity = incl_lhs == incl_rhs;
  return rep;
}

}  // namespace rslab
