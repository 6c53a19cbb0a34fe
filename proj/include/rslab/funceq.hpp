#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "rslab/characters.hpp"
#include "rslab/scalar.hpp"
#include "rslab/twists.hpp"

namespace rslab {

inline constexpr int kHurwitzShift = 30;
inline constexpr int kHurwitzTerms = 20;
inline constexpr int kStirlingShift = 20;
inline constexpr int kStirlingTerms = 15;

// B_0 .. B_n from sum_{k <= m} C(m + 1, k) B_k = 0 for m >= 1.
inline std::vector<Rational> bernoulli_numbers(int n) {
  if (n < 0) throw std::invalid_argument("bernoulli_numbers: negative index");
  std::vector<Rational> b(static_cast<std::size_t>(n) + 1);
  b[0] = Rational(1);
  for (int m = 1; m <= n; ++m) {
    Rational s(0);
    mpz_class binom = 1;  // C(m + 1, k)
    for (int k = 0; k < m; ++k) {
      s += Rational(binom) * b[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    b[m] = -s / Rational(m + 1);
  }
  return b;
}

namespace detail {

// B_{2k} / (2k)! for k = 1..kHurwitzTerms.
inline const std::vector<double>& hurwitz_coefficients() {
  static const std::vector<double> c = [] {
    const auto b = bernoulli_numbers(2 * kHurwitzTerms);
    std::vector<double> out;
    mpz_class fact = 1;
    for (int j = 1; j <= 2 * kHurwitzTerms; ++j) {
      fact *= j;
      if (j % 2 == 0) out.push_back((b[j] / Rational(fact)).to_double());
    }
    return out;
  }();
  return c;
}

// B_{2k} / (2k (2k - 1)) for k = 1..kStirlingTerms.
inline const std::vector<double>& stirling_coefficients() {
  static const std::vector<double> c = [] {
    const auto b = bernoulli_numbers(2 * kStirlingTerms);
    std::vector<double> out;
    for (int k = 1; k <= kStirlingTerms; ++k) out.push_back((b[2 * k] / Rational(2 * k * (2 * k - 1))).to_double());
    return out;
  }();
  return c;
}

inline bool is_nonpositive_integer(Complex z) {
  return z.real() <= 0.5 && std::abs(z.imag()) < 1e-14 && std::abs(z.real() - std::round(z.real())) < 1e-14;
}

}  // namespace detail

// log Gamma up to a multiple of 2 pi i; Stirling after shifting Re z past kStirlingShift.
inline Complex log_gamma(Complex z) {
  if (detail::is_nonpositive_integer(z)) throw std::domain_error("log_gamma: pole");
  Complex shift_log(0.0, 0.0);
  while (z.real() < kStirlingShift) {
    shift_log += std::log(z);
    z += 1.0;
  }
  const Complex inv = 1.0 / z, inv2 = inv * inv;
  Complex series(0.0, 0.0), p = inv;
  for (double c : detail::stirling_coefficients()) {
    series += c * p;
    p *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series - shift_log;
}

inline Complex gamma_complex(Complex z) { return std::exp(log_gamma(z)); }

namespace detail {

using ComplexL = std::complex<long double>;

// Euler-Maclaurin for zeta(s, a), optionally minus its polar part 1 / (s - 1); long double accumulation
// keeps the cancellation at negative Re s below the 1e-12 budget.
inline Complex hurwitz_em(Complex s_in, double a_in, bool drop_pole) {
  const ComplexL s(s_in.real(), s_in.imag());
  const long double a = a_in;
  ComplexL sum(0.0L, 0.0L);
  for (int n = 0; n < kHurwitzShift; ++n) sum += std::exp(-s * std::log(static_cast<long double>(n) + a));
  const long double x = kHurwitzShift + a, lx = std::log(x);
  const ComplexL xs = std::exp(-s * lx);  // x^{-s}
  if (drop_pole) {
    // (x^{1-s} - 1) / (s - 1) = -log x (e^w - 1) / w with w = (1 - s) log x.
    const ComplexL w = (1.0L - s) * lx;
    ComplexL ratio;
    if (std::abs(w) < 1e-4L)
      ratio = 1.0L + w / 2.0L + w * w / 6.0L + w * w * w / 24.0L;
    else
      ratio = (std::exp(w) - 1.0L) / w;
    sum += -lx * ratio;
  } else {
    sum += x * xs / (s - 1.0L);
  }
  sum += 0.5L * xs;
  ComplexL poch = s;     // s (s + 1) ... (s + 2k - 2)
  ComplexL pw = xs / x;  // x^{-s - 2k + 1}
  const auto& c = hurwitz_coefficients();
  for (int k = 1; k <= kHurwitzTerms; ++k) {
    if (k > 1) {
      poch *= (s + static_cast<long double>(2 * k - 3)) * (s + static_cast<long double>(2 * k - 2));
      pw /= x * x;
    }
    sum += static_cast<long double>(c[k - 1]) * poch * pw;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

}  // namespace detail

// zeta(s, a) = sum_{n >= 0} (n + a)^{-s} by Euler-Maclaurin with fixed shift and term count.
inline Complex hurwitz_zeta(Complex s, double a) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("hurwitz_zeta: a must lie in (0, 1]");
  if (std::abs(s - Complex(1.0, 0.0)) < 1e-15) throw std::domain_error("hurwitz_zeta: pole at s = 1");
  return detail::hurwitz_em(s, a, false);
}

// zeta(s, a) - 1 / (s - 1), entire in s.
inline Complex hurwitz_zeta_regular(Complex s, double a) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("hurwitz_zeta_regular: a must lie in (0, 1]");
  return detail::hurwitz_em(s, a, true);
}

inline Complex riemann_zeta(Complex s) { return hurwitz_zeta(s, 1.0); }

// L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a / q).
inline Complex dirichlet_L(Complex s, const DirichletCharacter& chi) {
  const u64 q = chi.modulus();
  if (chi.is_trivial() && std::abs(s - Complex(1.0, 0.0)) < 1e-15) throw std::domain_error("dirichlet_L: pole at s = 1");
  // For nontrivial chi the polar parts cancel since sum_a chi(a) = 0.
  const bool regular = !chi.is_trivial();
  Complex sum(0.0, 0.0);
  for (u64 a = 1; a <= q; ++a) {
    const Complex c = chi.value(static_cast<i64>(a));
    if (c == Complex(0.0, 0.0)) continue;
    const double x = double(a) / double(q);
    sum += c * (regular ? hurwitz_zeta_regular(s, x) : hurwitz_zeta(s, x));
  }
  return std::exp(-s * std::log(double(q))) * sum;
}

struct GammaFactor {
  enum class Kind { Real, Complex };
  struct Entry {
    Kind kind;
    rslab::Complex shift;
  };
  std::vector<Entry> entries;

  // One per Gamma_R, two per Gamma_C.
  int degree() const {
    int d = 0;
    for (const auto& e : entries) d += e.kind == Kind::Real ? 1 : 2;
    return d;
  }

  // Gamma_R(s) = pi^{-s/2} Gamma(s/2), Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s).
  rslab::Complex operator()(rslab::Complex s) const {
    rslab::Complex lg(0.0, 0.0);
    for (const auto& e : entries) {
      const rslab::Complex w = s + e.shift;
      if (e.kind == Kind::Real)
        lg += -0.5 * w * std::log(std::numbers::pi) + log_gamma(0.5 * w);
      else
        lg += std::log(2.0) - w * std::log(2.0 * std::numbers::pi) + log_gamma(w);
    }
    return std::exp(lg);
  }

  GammaFactor dual() const {
    GammaFactor g;
    for (const auto& e : entries) g.entries.push_back({e.kind, std::conj(e.shift)});
    return g;
  }
};

inline GammaFactor dirichlet_gamma_factor(const DirichletCharacter& chi) {
  return GammaFactor{{{GammaFactor::Kind::Real, Complex(double(chi.parity()), 0.0)}}};
}

// tau(chi) / (i^a sqrt(q)).
inline Complex dirichlet_epsilon(const DirichletCharacter& chi) {
  require_primitive(chi, "dirichlet_epsilon");
  const Complex ia = chi.parity() == 0 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
  return gauss_classical(chi) / (ia * std::sqrt(double(chi.modulus())));
}

// Lambda(s, chi) = (q / pi)^{(s + a) / 2} Gamma((s + a) / 2) L(s, chi).
inline Complex completed_dirichlet(Complex s, const DirichletCharacter& chi) {
  require_primitive(chi, "completed_dirichlet");
  const double q = double(chi.modulus());
  const Complex w = 0.5 * (s + double(chi.parity()));
  if (detail::is_nonpositive_integer(w)) throw std::domain_error("completed_dirichlet: Gamma pole");
  return std::exp(w * std::log(q / std::numbers::pi) + log_gamma(w)) * dirichlet_L(s, chi);
}

struct FeSample {
  Complex s;
  Complex lhs;
  Complex rhs;
  double residual = 0.0;
  bool skipped = false;
  std::string reason;
};

struct FeReport {
  Complex epsilon;
  mpz_class conductor;
  std::vector<FeSample> samples;
  double max_residual = 0.0;
  std::size_t skipped = 0;
};

// |Lambda(s, chi) - eps Lambda(1 - s, conj chi)| / |Lambda(s, chi)|.
inline FeReport dirichlet_fe_check(const DirichletCharacter& chi, const std::vector<Complex>& points) {
  FeReport rep;
  rep.epsilon = dirichlet_epsilon(chi);
  rep.conductor = static_cast<unsigned long>(chi.modulus());
  const auto dual = chi.conj();
  for (const auto& s : points) {
    FeSample smp{s, {}, {}, 0.0, false, {}};
    try {
      smp.lhs = completed_dirichlet(s, chi);
      smp.rhs = rep.epsilon * completed_dirichlet(1.0 - s, dual);
      smp.residual = std::abs(smp.lhs - smp.rhs) / std::abs(smp.lhs);
      rep.max_residual = std::max(rep.max_residual, smp.residual);
    } catch (const std::domain_error& e) {
      smp.skipped = true;
      smp.reason = e.what();
      ++rep.skipped;
    }
    rep.samples.push_back(smp);
  }
  return rep;
}

// pi = |.|^{it_1} + |.|^{it_2} + |.|^{it_3}, tau = chi |.|^{iu_1} + 1 (isobaric sums).
struct SyntheticRsData {
  std::array<double, 3> t{0.0, 0.0, 0.0};
  double u1 = 0.0;
};

struct SyntheticRsReport {
  FeReport fe;
  GammaFactor gamma;
  ConductorCheck conductor;
  double epsilon_modulus = 0.0;
};

// Lambda(s, pi x tau) without the conductor power: Gamma factors times six Dirichlet L-values.
inline Complex synthetic_rs_lambda(Complex s, const SyntheticRsData& d, const DirichletCharacter& chi, bool dual) {
  const auto chi_s = dual ? chi.conj() : chi;
  const double sg = dual ? -1.0 : 1.0;
  const auto triv = DirichletCharacter::trivial(1);
  Complex v(1.0, 0.0);
  for (double ti : d.t) {
    const Complex w1 = s + Complex(0.0, sg * (ti + d.u1)), w0 = s + Complex(0.0, sg * ti);
    const Complex g1 = 0.5 * (w1 + double(chi.parity())), g0 = 0.5 * w0;
    if (detail::is_nonpositive_integer(g1) || detail::is_nonpositive_integer(g0))
      throw std::domain_error("synthetic_rs_lambda: Gamma pole");
    v *= std::exp(-g1 * std::log(std::numbers::pi) + log_gamma(g1)) * dirichlet_L(w1, chi_s);
    v *= std::exp(-g0 * std::log(std::numbers::pi) + log_gamma(g0)) * dirichlet_L(w0, triv);
  }
  return v;
}

// Residual of Lambda(s) = eps N^{1/2 - s} Lambda~(1 - s) with N the composed conductor q^3.
inline SyntheticRsReport synthetic_rs_fe_check(const SyntheticRsData& d, const DirichletCharacter& chi,
                                               const std::vector<Complex>& points) {
  require_primitive(chi, "synthetic_rs_fe_check");
  const u64 q = chi.modulus();
  if (q <= 1) throw std::invalid_argument("synthetic_rs_fe_check: need q > 1");
  SyntheticRsReport rep;
  for (double ti : d.t) {
    rep.gamma.entries.push_back({GammaFactor::Kind::Real, Complex(double(chi.parity()), ti + d.u1)});
    rep.gamma.entries.push_back({GammaFactor::Kind::Real, Complex(0.0, ti)});
  }
  rep.conductor = conductor_exponent_check(std::vector<u64>{q, q, q, 1, 1, 1}, 1, q);
  // Each factor contributes eps(chi) q^{-i(t_i + u_1)} beyond the q^{1/2 - s} power.
  const Complex e = dirichlet_epsilon(chi);
  const double shift = d.t[0] + d.t[1] + d.t[2] + 3.0 * d.u1;
  rep.fe.epsilon = e * e * e * std::exp(Complex(0.0, -shift * std::log(double(q))));
  rep.fe.conductor = rep.conductor.composed;
  rep.epsilon_modulus = std::abs(rep.fe.epsilon);
  const double logN = std::log(rep.conductor.composed.get_d());
  for (const auto& s : points) {
    FeSample smp{s, {}, {}, 0.0, false, {}};
    try {
      smp.lhs = synthetic_rs_lambda(s, d, chi, false);
      smp.rhs = rep.fe.epsilon * std::exp((0.5 - s) * logN) * synthetic_rs_lambda(1.0 - s, d, chi, true);
      smp.residual = std::abs(smp.lhs - smp.rhs) / std::abs(smp.lhs);
      rep.fe.max_residual = std::max(rep.fe.max_residual, smp.residual);
    } catch (const std::domain_error& ex) {
      smp.skipped = true;
      smp.reason = ex.what();
      ++rep.fe.skipped;
    }
    rep.fe.samples.push_back(smp);
  }
  return rep;
}

inline std::vector<Complex> critical_line_points(const std::vector<double>& ts) {
  std::vector<Complex> out;
  for (double t : ts) out.emplace_back(0.5, t);
  return out;
}

}  // namespace rslab
