#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rslab/characters.hpp"
#include "rslab/coeffs.hpp"
#include "rslab/cyclotomic.hpp"

namespace rslab {

// Exact form of e_q(x, omega_inf^{-1}) at t = 0: plus * e(x) + minus * e(-x), with e(x) = zeta_den^num.
struct UnitAverage {
  u64 order = 1;  // denominator of x
  i64 k = 0;      // numerator of x reduced mod order
  Rational plus;
  Rational minus;

  Cyclotomic exact() const {
    return Cyclotomic::monomial(plus, k, order) + Cyclotomic::monomial(minus, -k, order);
  }
  Complex value() const {
    const Complex z = RootOfUnity::make(k, order).value();
    return plus.to_double() * z + minus.to_double() * std::conj(z);
  }
};

namespace detail {

inline int sign_of(const Rational& x) { return x.sign(); }

}  // namespace detail

// Over Q the units are {+1, -1} and Gamma_q = {1} for q > 2, Gamma_q = {+1, -1} for q <= 2.
// omega_inf = sign^a; sign(0)^1 is taken as 0, so x = 0 with a = 1 averages to 0.
inline UnitAverage eq_unit_average_exact(const Rational& x, u64 q, int a) {
  if (q == 0) throw std::invalid_argument("eq_unit_average: modulus 0");
  if (a != 0 && a != 1) throw std::invalid_argument("eq_unit_average: parity must be 0 or 1");
  UnitAverage out;
  if (!x.den().fits_ulong_p()) throw std::invalid_argument("eq_unit_average: denominator too large");
  out.order = x.den().get_ui();
  mpz_class r = x.num() % x.den();
  if (r < 0) r += x.den();
  out.k = static_cast<i64>(r.get_ui());
  const Rational s(a == 0 ? 1 : detail::sign_of(x));
  if (q <= 2) {
    out.plus = s;
    out.minus = Rational(0);
  } else {
    out.plus = s / Rational(2);
    out.minus = (a == 0 ? s : -s) / Rational(2);
  }
  return out;
}

// Float value; t != 0 multiplies by |x|^{-it} and is excluded from exact checks.
inline Complex eq_unit_average(const Rational& x, u64 q, int a, double t = 0.0) {
  const Complex v = eq_unit_average_exact(x, q, a).value();
  if (t == 0.0 || x.sign() == 0) return v;
  return v * std::polar(1.0, -t * std::log(std::abs(x.to_double())));
}

// coefficient(n) = lambda_pi(n) * e_q(n beta, omega_inf^{-1}), n <= N.
template <FieldScalar T>
class AdditiveTwistSeries {
 public:
  AdditiveTwistSeries(DirichletSeries<T> lambda, Rational beta, u64 modulus, int parity, double t)
      : lambda_(std::move(lambda)), beta_(std::move(beta)), q_(modulus), a_(parity), t_(t) {
    if (q_ == 0 || (beta_ * Rational(static_cast<unsigned long>(q_))).den() != 1)
      throw std::invalid_argument("AdditiveTwistSeries: q * beta must be integral");
  }

  u64 bound() const { return lambda_.bound(); }
  const Rational& beta() const { return beta_; }
  u64 modulus() const { return q_; }
  int parity() const { return a_; }
  double t() const { return t_; }
  const T& lambda(u64 n) const { return lambda_(n); }

  UnitAverage unit_average(u64 n) const {
    return eq_unit_average_exact(Rational(static_cast<unsigned long>(n)) * beta_, q_, a_);
  }

  Complex coefficient(u64 n) const {
    return to_complex(lambda_(n)) *
           eq_unit_average(Rational(static_cast<unsigned long>(n)) * beta_, q_, a_, t_);
  }

  Cyclotomic coefficient_exact(u64 n) const {
    static_assert(std::is_same_v<T, Rational>, "exact twist coefficients need rational parameters");
    if (t_ != 0.0) throw std::invalid_argument("AdditiveTwistSeries: t != 0 has no exact coefficients");
    return unit_average(n).exact().scaled(lambda_(n));
  }

 private:
  static Complex to_complex(const T& x) { return scalar_traits<T>::to_complex(x); }

  DirichletSeries<T> lambda_;
  Rational beta_;
  u64 q_;
  int a_;
  double t_;
};

// Twist modulus defaults to the reduced denominator of beta.
template <FieldScalar T>
AdditiveTwistSeries<T> gl31_twist(const GlobalRep<T>& pi, const Rational& beta, int parity, u64 N, u64 modulus = 0,
                                  double t = 0.0) {
  if (pi.degree() != 3) throw std::invalid_argument("gl31_twist: pi must have degree 3");
  if (modulus == 0) {
    if (!beta.den().fits_ulong_p()) throw std::invalid_argument("gl31_twist: denominator too large");
    modulus = beta.den().get_ui();
  }
  return AdditiveTwistSeries<T>(lambda_std_series(pi, N), beta, modulus, parity, t);
}

// c_r = (tau(chi)/q) conj(chi)(-r), r mod q.
inline std::vector<Complex> decomposition_coefficients(const DirichletCharacter& chi) {
  require_primitive(chi, "decomposition_coefficients");
  const u64 q = chi.modulus();
  const Complex g = gauss_classical(chi) / static_cast<double>(q);
  const auto chibar = chi.conj();
  std::vector<Complex> c(q);
  for (u64 r = 0; r < q; ++r) c[r] = g * chibar.value(-static_cast<i64>(r));
  return c;
}

struct DecompositionOutcome {
  bool ok = true;
  bool exact = false;
  std::optional<u64> first_failure;
  double max_residual = 0.0;
};

// lambda_pi(n) chi(n) = sum_r c_r * twist_r(n) for n <= N, twists at beta = r/q with modulus q.
// Float mode compares with relative tolerance tol; exact mode certifies each n through modular embeddings.
// coeff_chi supplies c_r; it equals chi except when probing that a mismatched decomposition is rejected.
template <FieldScalar T>
DecompositionOutcome gl31_decomposition_check(const GlobalRep<T>& pi, const DirichletCharacter& chi,
                                              const DirichletCharacter& coeff_chi, int parity, u64 N, bool exact,
                                              double tol = 1e-10) {
  require_primitive(chi, "gl31_decomposition_check");
  require_primitive(coeff_chi, "gl31_decomposition_check");
  if (chi.parity() != parity) throw std::invalid_argument("gl31_decomposition_check: parity must match chi(-1)");
  if (coeff_chi.modulus() != chi.modulus()) throw std::invalid_argument("gl31_decomposition_check: modulus mismatch");
  const u64 q = chi.modulus();
  std::vector<AdditiveTwistSeries<T>> twists;
  twists.reserve(q);
  const auto lambda = lambda_std_series(pi, N);
  for (u64 r = 0; r < q; ++r)
    twists.emplace_back(lambda, Rational(static_cast<unsigned long>(r), static_cast<unsigned long>(q)), q, parity, 0.0);
  DecompositionOutcome out;
  out.exact = exact;
  if (!exact) {
    const auto c = decomposition_coefficients(coeff_chi);
    for (u64 n = 1; n <= N; ++n) {
      Complex rhs(0.0, 0.0);
      for (u64 r = 0; r < q; ++r) rhs += c[r] * twists[r].coefficient(n);
      const Complex lhs = scalar_traits<T>::to_complex(lambda(n)) * chi.value(static_cast<i64>(n));
      const double res = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
      out.max_residual = std::max(out.max_residual, res);
      if (res > tol && out.ok) {
        out.ok = false;
        out.first_failure = n;
      }
    }
    return out;
  }
  if constexpr (std::is_same_v<T, Rational>) {
    // L = lcm(E, q) holds chi values and e(r/q); 2q * den(lambda(n)) times the residual is integral with
    // conjugates bounded by 2q |num(lambda(n))| (q + 1).
    const u64 E = chi.group().exponent(), L = lcm_u64(E, q);
    const auto chibar = coeff_chi.conj();
    mpz_class height = 1;
    for (u64 n = 1; n <= N; ++n) height = std::max(height, mpz_class(abs(lambda(n).num())));
    const ModularEmbeddings emb(L, height * 2 * q * (q + 1));
    const auto tau = gauss_beta_image(emb, coeff_chi, 1, q);
    std::vector<ModularEmbeddings::Image> c(q);
    for (u64 r = 0; r < q; ++r) {
      auto v = emb.zero();
      if (chibar.coprime(-static_cast<i64>(r)))
        emb.add_monomial(v, Rational(1, static_cast<long>(q)),
                         static_cast<i64>(chibar.raw_exponent(-static_cast<i64>(r)) * (L / E)));
      c[r] = emb.mul(tau, v);
    }
    for (u64 n = 1; n <= N; ++n) {
      auto rhs = emb.zero();
      for (u64 r = 0; r < q; ++r) {
        const UnitAverage ua = twists[r].unit_average(n);
        auto term = emb.zero();
        emb.add_monomial(term, ua.plus, ua.k * static_cast<i64>(L / ua.order));
        emb.add_monomial(term, ua.minus, -ua.k * static_cast<i64>(L / ua.order));
        rhs = emb.add(rhs, emb.mul(c[r], emb.mul(emb.rational(twists[r].lambda(n)), term)));
      }
      auto lhs = emb.zero();
      if (chi.coprime(static_cast<i64>(n)))
        emb.add_monomial(lhs, lambda(n), static_cast<i64>(chi.raw_exponent(static_cast<i64>(n)) * (L / E)));
      if (!ModularEmbeddings::is_zero(emb.sub(lhs, rhs))) {
        out.ok = false;
        out.first_failure = n;
        return out;
      }
    }
    return out;
  } else {
    throw std::invalid_argument("gl31_decomposition_check: exact mode needs rational parameters");
  }
}

template <FieldScalar T>
DecompositionOutcome gl31_decomposition_check(const GlobalRep<T>& pi, const DirichletCharacter& chi, int parity, u64 N,
                                              bool exact = false, double tol = 1e-10) {
  return gl31_decomposition_check(pi, chi, chi, parity, N, exact, tol);
}

// Prefactor sqrt(q^2 zeta) / lcm(q1 zeta, q2) * tau_q(chi, beta2) * lambda_tau(zeta) and the c_{pi,tau} table.
template <FieldScalar T>
struct Main1Rhs {
  Complex prefactor;
  Complex gauss;
  Rational norm_ratio;  // sqrt(q^2 zeta) / lcm(q1 zeta, q2); zeta is 1 or q^2 so the root is an integer
  T lambda_tau_zeta;
  DoubleSum<T> series;
};

struct Main1Window {
  u64 q = 1, q1 = 1, q2 = 1;
  Rational beta2;
  u64 zeta = 1;
};

class WindowViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// c | q2 | lcm(c, rad q), q | q1 (as ideals q1 | q) with prod_{p | q/q2} p^{ord_p q} | q1, beta2 = r / q2 with
// (r, q2) = 1, and zeta in {1, q^2} with zeta = 1 unless c = q.
inline void require_main1_window(const DirichletCharacter& chi, const Main1Window& w) {
  const u64 q = chi.modulus();
  if (w.q != q) throw WindowViolation("main1: q must equal the character modulus");
  if (!in_nonvanishing_window(chi, w.q2)) throw WindowViolation("main1: q2 outside c | q2 | lcm(c, rad q)");
  if (q % w.q1 != 0) throw WindowViolation("main1: q1 must divide q");
  u64 need = 1;
  for (auto [p, k] : q == 1 ? Factorization{} : factorize(q))
    if ((q / w.q2) % p == 0) need *= ipow(p, k);
  if (w.q1 % need != 0) throw WindowViolation("main1: q1 must be divisible by the q/q2-primary part of q");
  const Rational scaled = w.beta2 * Rational(static_cast<unsigned long>(w.q2));
  if (scaled.den() != 1 || std::gcd(mod_reduce(scaled.num().get_si(), w.q2), w.q2) != 1)
    throw WindowViolation("main1: beta2 must be r/q2 with r prime to q2");
  if (w.zeta != 1 && !(w.zeta == q * q && chi.conductor() == q))
    throw WindowViolation("main1: zeta must be 1, or q^2 when chi is primitive");
}

template <FieldScalar T>
Main1Rhs<T> main1_rhs(const GlobalRep<T>& pi, const GlobalRep<T>& tau, const DirichletCharacter& chi,
                      const Main1Window& w, u64 N) {
  require_main1_window(chi, w);
  const u64 root = w.zeta == 1 ? w.q : w.q * w.q;
  const Rational ratio(static_cast<unsigned long>(root), static_cast<unsigned long>(lcm_u64(w.q1 * w.zeta, w.q2)));
  const Complex g = gauss_beta(chi, w.beta2);
  const T lz = lambda_std(tau, w.zeta);
  return Main1Rhs<T>{g * ratio.to_double() * scalar_traits<T>::to_complex(lz), g, ratio, lz, DoubleSum<T>(pi, tau, N)};
}

struct Main2EpsilonInputs {
  Complex eps_pi{1.0, 0.0};
  Complex eps_tau{1.0, 0.0};
  Complex chi_omega_pi_q{1.0, 0.0};   // chi_{omega_pi}(q)
  Complex omega_tau_nq2{1.0, 0.0};    // omega_{tau_f}(n q^2)
  Complex lambda_dual_tau_q2{1.0, 0.0};
  Complex gauss_beta2{1.0, 0.0};
  Complex gauss_beta2_prime{1.0, 0.0};
  u64 n = 1;
  u64 q = 1;
};

// eps = eps_pi^2 eps_tau chi_{omega_pi}(q) omega_tau(n q^2) lambda_{dual tau}(q^2) conj(tau(beta2')) / tau(beta2).
inline Complex main2_epsilon(const Main2EpsilonInputs& in) {
  if (std::gcd(in.n, in.q) != 1) throw std::invalid_argument("main2_epsilon: n and q must be coprime");
  if (in.gauss_beta2 == Complex(0.0, 0.0) || in.gauss_beta2_prime == Complex(0.0, 0.0))
    throw std::domain_error("main2_epsilon: vanishing Gauss sum");
  const Complex inputs[] = {in.eps_pi, in.eps_tau, in.chi_omega_pi_q, in.omega_tau_nq2, in.lambda_dual_tau_q2};
  for (const auto& x : inputs)
    if (x == Complex(0.0, 0.0)) throw std::invalid_argument("main2_epsilon: inputs must be nonzero");
  return in.eps_pi * in.eps_pi * in.eps_tau * in.chi_omega_pi_q * in.omega_tau_nq2 * in.lambda_dual_tau_q2 *
         std::conj(in.gauss_beta2_prime) / in.gauss_beta2;
}

// Gauss sums taken from chi; an exactly vanishing one is reported as a window violation.
inline Main2EpsilonInputs with_gauss_sums(Main2EpsilonInputs in, const DirichletCharacter& chi, const Rational& beta2,
                                          const Rational& beta2_prime) {
  for (const Rational* b : {&beta2, &beta2_prime}) {
    const Rational scaled = *b * Rational(static_cast<unsigned long>(chi.modulus()));
    if (scaled.den() != 1) throw std::invalid_argument("main2_epsilon: beta must lie in q^{-1} Z");
    const u64 r = mod_reduce(scaled.num().get_si(), chi.modulus());
    if (gauss_beta_is_zero(chi, r, chi.modulus())) throw std::domain_error("main2_epsilon: vanishing Gauss sum");
  }
  in.gauss_beta2 = gauss_beta(chi, beta2);
  in.gauss_beta2_prime = gauss_beta(chi, beta2_prime);
  in.q = chi.modulus();
  return in;
}

struct ConductorCheck {
  bool ok = false;
  mpz_class composed;
  mpz_class expected;  // n^2 q^3
};

// Declared local exponents e_p against 2 ord_p(n) + 3 ord_p(q), and their product against n^2 q^3.
inline ConductorCheck conductor_exponent_check(const std::map<u64, int>& local_exponents, u64 n, u64 q) {
  if (n == 0 || q == 0 || std::gcd(n, q) != 1) throw std::invalid_argument("conductor_exponent_check: need (n, q) = 1");
  ConductorCheck out;
  out.expected = mpz_class(static_cast<unsigned long>(n)) * mpz_class(static_cast<unsigned long>(n));
  for (int i = 0; i < 3; ++i) out.expected *= mpz_class(static_cast<unsigned long>(q));
  out.composed = 1;
  bool local_ok = true;
  for (const auto& [p, e] : local_exponents) {
    if (!is_prime(p) || e < 0) throw std::invalid_argument("conductor_exponent_check: bad local exponent");
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, static_cast<unsigned long>(e));
    out.composed *= pe;
    if (e != 2 * valuation(n, p) + 3 * valuation(q, p)) local_ok = false;
  }
  for (u64 m : {n, q})
    if (m > 1)
      for (auto [p, k] : factorize(m))
        if (!local_exponents.count(p)) local_ok = false;
  out.ok = local_ok && out.composed == out.expected;
  return out;
}

// Composed conductor of an isobaric product of GL(1) pieces against n^2 q^3.
inline ConductorCheck conductor_exponent_check(const std::vector<u64>& piece_conductors, u64 n, u64 q) {
  std::map<u64, int> exps;
  for (u64 c : piece_conductors) {
    if (c == 0) throw std::invalid_argument("conductor_exponent_check: conductor 0");
    if (c > 1)
      for (auto [p, k] : factorize(c)) exps[p] += k;
  }
  return conductor_exponent_check(exps, n, q);
}

}  // namespace rslab
