#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rslab/arith.hpp"
#include "rslab/euler.hpp"
#include "rslab/scalar.hpp"

namespace rslab {

template <FieldScalar T>
struct LocalData {
  u64 prime = 0;
  std::vector<T> params;
  int conductor_exp = 0;
  T root_number = T(1);
  // Central character value at p; required where the parameters do not determine it.
  std::optional<T> central_value;
};

class UncoveredPrime : public std::out_of_range {
 public:
  explicit UncoveredPrime(u64 p) : std::out_of_range("prime " + std::to_string(p) + " not covered"), prime_(p) {}
  u64 prime() const { return prime_; }

 private:
  u64 prime_;
};

template <FieldScalar T>
class GlobalRep {
 public:
  GlobalRep(int degree, u64 pmax, std::map<u64, LocalData<T>> locals)
      : degree_(degree), pmax_(pmax), locals_(std::move(locals)) {
    validate();
  }

  // Degree-0 representation, the identity for isobaric sums.
  static GlobalRep empty(u64 pmax) {
    std::map<u64, LocalData<T>> locals;
    for (u64 p : primes_up_to(pmax)) locals[p] = LocalData<T>{p, {}, 0, T(1), T(1)};
    return GlobalRep(0, pmax, std::move(locals));
  }

  int degree() const { return degree_; }
  u64 pmax() const { return pmax_; }
  const std::map<u64, LocalData<T>>& locals() const { return locals_; }

  const LocalData<T>& local(u64 p) const {
    auto it = locals_.find(p);
    if (it == locals_.end()) throw UncoveredPrime(p);
    return it->second;
  }

  bool covers(u64 p) const { return locals_.count(p) != 0; }

 private:
  void validate() const {
    for (u64 p : primes_up_to(pmax_))
      if (!locals_.count(p)) throw std::invalid_argument("GlobalRep: prime " + std::to_string(p) + " missing");
    for (const auto& [p, d] : locals_) {
      if (d.prime != p) throw std::invalid_argument("GlobalRep: prime label mismatch at " + std::to_string(p));
      if (!is_prime(p)) throw std::invalid_argument("GlobalRep: " + std::to_string(p) + " is not prime");
      if (static_cast<int>(d.params.size()) != degree_)
        throw std::invalid_argument("GlobalRep: wrong parameter count at " + std::to_string(p));
      if (d.conductor_exp < 0) throw std::invalid_argument("GlobalRep: negative conductor exponent");
      if (d.conductor_exp == 0) {
        for (const auto& a : d.params)
          if (is_zero(a)) throw std::invalid_argument("GlobalRep: zero parameter at unramified " + std::to_string(p));
        if (!(d.root_number == T(1)))
          throw std::invalid_argument("GlobalRep: nontrivial root number at unramified " + std::to_string(p));
      }
    }
  }

  int degree_;
  u64 pmax_;
  std::map<u64, LocalData<T>> locals_;
};

// prod (1 - alpha_i X) over nonzero parameters.
template <FieldScalar T>
EulerFactorPoly<T> local_L_inverse(const LocalData<T>& d) {
  EulerFactorPoly<T> acc;
  for (const auto& a : d.params)
    if (!is_zero(a)) acc = poly_mul(acc, EulerFactorPoly<T>::linear(a));
  return acc;
}

// prod (1 - alpha_i beta_j X).
template <FieldScalar T>
EulerFactorPoly<T> rs_naive_local(const LocalData<T>& a, const LocalData<T>& b) {
  if (a.prime != b.prime) throw std::invalid_argument("rs_naive_local: prime mismatch");
  EulerFactorPoly<T> acc;
  for (const auto& x : a.params) {
    if (is_zero(x)) continue;
    for (const auto& y : b.params)
      if (!is_zero(y)) acc = poly_mul(acc, EulerFactorPoly<T>::linear(x * y));
  }
  return acc;
}

template <FieldScalar T>
GlobalRep<T> isobaric_sum(const GlobalRep<T>& a, const GlobalRep<T>& b) {
  if (a.pmax() != b.pmax()) throw std::invalid_argument("isobaric_sum: P_max mismatch");
  std::map<u64, LocalData<T>> out;
  for (const auto& [p, x] : a.locals()) {
    const auto& y = b.local(p);
    LocalData<T> d{p, x.params, x.conductor_exp + y.conductor_exp, x.root_number * y.root_number, std::nullopt};
    d.params.insert(d.params.end(), y.params.begin(), y.params.end());
    if (x.central_value && y.central_value) d.central_value = *x.central_value * *y.central_value;
    out.emplace(p, std::move(d));
  }
  return GlobalRep<T>(a.degree() + b.degree(), a.pmax(), std::move(out));
}

template <FieldScalar T>
struct GlobalEpsilon {
  T root_number;
  mpz_class conductor;
};

template <FieldScalar T>
GlobalEpsilon<T> epsilon_global(const GlobalRep<T>& rep) {
  GlobalEpsilon<T> e{T(1), 1};
  for (const auto& [p, d] : rep.locals()) {
    e.root_number = e.root_number * d.root_number;
    for (int i = 0; i < d.conductor_exp; ++i) e.conductor *= static_cast<unsigned long>(p);
  }
  return e;
}

// Multiplies every parameter at p by chi(p).
template <FieldScalar T>
GlobalRep<T> twist_unramified(const GlobalRep<T>& rep, const std::function<T(u64)>& chi) {
  std::map<u64, LocalData<T>> out;
  for (const auto& [p, d] : rep.locals()) {
    const T t = chi(p);
    if (is_zero(t)) throw std::invalid_argument("twist_unramified: zero twist value at " + std::to_string(p));
    LocalData<T> e = d;
    for (auto& a : e.params) a = a * t;
    if (e.central_value) e.central_value = *e.central_value * power(t, static_cast<unsigned long>(rep.degree()));
    out.emplace(p, std::move(e));
  }
  return GlobalRep<T>(rep.degree(), rep.pmax(), std::move(out));
}

// Twist by |.|^{it}: chi(p) = p^{-it}.
inline GlobalRep<Complex> twist_unramified(const GlobalRep<Complex>& rep, double t) {
  return twist_unramified<Complex>(rep, [t](u64 p) { return std::exp(Complex(0.0, -t * std::log(double(p)))); });
}

template <FieldScalar T>
GlobalRep<T> contragredient_unramified(const GlobalRep<T>& rep) {
  std::map<u64, LocalData<T>> out;
  for (const auto& [p, d] : rep.locals()) {
    if (d.conductor_exp != 0)
      throw std::invalid_argument("contragredient_unramified: ramified prime " + std::to_string(p) +
                                  " needs explicit dual data");
    LocalData<T> e = d;
    for (auto& a : e.params) a = T(1) / a;
    if (e.central_value) e.central_value = T(1) / *e.central_value;
    out.emplace(p, std::move(e));
  }
  return GlobalRep<T>(rep.degree(), rep.pmax(), std::move(out));
}

// Character of GL(1) over Q_p. unit_class 0 means unramified; classes k and -k are mutually inverse on units.
template <FieldScalar T>
struct GL1Char {
  T value = T(1);
  int unit_class = 0;
  int conductor_exp = 0;

  static GL1Char unramified(const T& v) { return {v, 0, 0}; }
  static GL1Char ramified(int conductor_exp, int unit_class = 1, const T& v = T(1)) {
    if (conductor_exp < 1 || unit_class == 0) throw std::invalid_argument("GL1Char: ramified needs exponent and class");
    return {v, unit_class, conductor_exp};
  }
  bool is_ramified() const { return unit_class != 0; }
};

// sigma_b(eta) tensor chi with chi unramified, on GL(a b); only a = 1 is supported.
template <FieldScalar T>
struct EssSqIntSpec {
  int a = 1;
  int b = 1;
  GL1Char<T> eta;
  T chi = T(1);
};

class UnsupportedShape : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

template <FieldScalar T>
T inverse_prime_power(u64 p, int c) {
  return scalar_traits<T>::from_rational(Rational(1) / Rational(mpz_class(ipow(p, c))));
}

template <FieldScalar T>
void require_supported(const EssSqIntSpec<T>& s) {
  if (s.a != 1) throw UnsupportedShape("EssSqIntSpec: only a = 1 is supported, got a = " + std::to_string(s.a));
  if (s.b < 1) throw std::invalid_argument("EssSqIntSpec: b < 1");
}

}  // namespace detail

// Langlands parameters of sigma_b(eta) tensor chi at p: (eta(p) chi p^{-(b-1)}, 0, ...), all zero if eta is ramified.
template <FieldScalar T>
LocalData<T> ess_sq_int_local(const EssSqIntSpec<T>& s, u64 p) {
  detail::require_supported(s);
  LocalData<T> d;
  d.prime = p;
  d.params.assign(static_cast<std::size_t>(s.b), T(0));
  if (!s.eta.is_ramified()) {
    d.params[0] = s.eta.value * s.chi * detail::inverse_prime_power<T>(p, s.b - 1);
    d.conductor_exp = s.b - 1;
  } else {
    d.conductor_exp = s.b * s.eta.conductor_exp;
  }
  if (d.conductor_exp == 0) d.central_value = d.params[0];
  return d;
}

// Inverse of L(s, pi boxtimes tau) for pi = sigma_b(eta) chi on GL(b), tau = sigma_m(eta') chi' on GL(m).
template <FieldScalar T>
EulerFactorPoly<T> jpss_local(const EssSqIntSpec<T>& pi, const EssSqIntSpec<T>& tau, u64 p) {
  detail::require_supported(pi);
  detail::require_supported(tau);
  if (pi.eta.unit_class + tau.eta.unit_class != 0) return EulerFactorPoly<T>();
  const T mu = pi.eta.value * tau.eta.value * pi.chi * tau.chi;
  const int n = pi.b;
  const int b = pi.b;
  const int m = tau.b;
  EulerFactorPoly<T> acc;
  if (m <= n) {
    for (int j = 0; j <= m - 1; ++j)
      acc = poly_mul(acc, EulerFactorPoly<T>::linear(mu * detail::inverse_prime_power<T>(p, j + b - 1)));
  } else {
    for (int i = 0; i <= b - 1; ++i)
      acc = poly_mul(acc, EulerFactorPoly<T>::linear(mu * detail::inverse_prime_power<T>(p, m - 1 + i)));
  }
  return acc;
}

// P with inverse(boxtimes) = P * inverse(times).
template <FieldScalar T>
DivisionOutcome<T> lemma_aux_quotient(const LocalData<T>& pi, const LocalData<T>& tau,
                                      const EulerFactorPoly<T>& jpss) {
  return poly_divide_exact(jpss, rs_naive_local(pi, tau));
}

// A trivial boxtimes factor forces L(s, pi) = 1 or L(s, tau) = 1.
template <FieldScalar T>
bool degenerate_check(const LocalData<T>& pi, const LocalData<T>& tau, const EulerFactorPoly<T>& jpss) {
  if (!jpss.is_one()) return true;
  return local_L_inverse(pi).is_one() || local_L_inverse(tau).is_one();
}

// Text records "p m root_number a_1 ... a_n [w=central_value]"; "pmax N" sets the coverage bound and
// "* m root_number a_1 ... a_n" supplies every prime up to pmax not listed explicitly.
template <FieldScalar T>
GlobalRep<T> parse_rep(std::istream& in) {
  std::map<u64, LocalData<T>> locals;
  std::optional<LocalData<T>> fallback;
  std::optional<u64> pmax;
  int degree = -1;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("rep file line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] == "pmax") {
      if (tok.size() != 2) fail("pmax takes one value");
      try {
        pmax = std::stoull(tok[1]);
      } catch (const std::exception&) {
        fail("bad pmax");
      }
      continue;
    }
    if (tok.size() < 3) fail("expected 'p m root_number params...'");
    LocalData<T> d;
    try {
      d.conductor_exp = std::stoi(tok[1]);
      d.root_number = parse_scalar<T>(tok[2]);
      for (std::size_t i = 3; i < tok.size(); ++i) {
        if (tok[i].rfind("w=", 0) == 0) {
          if (d.central_value || i + 1 != tok.size()) fail("w= must be the last token");
          d.central_value = parse_scalar<T>(tok[i].substr(2));
        } else {
          d.params.push_back(parse_scalar<T>(tok[i]));
        }
      }
    } catch (const std::exception& e) {
      fail(e.what());
    }
    const int n = static_cast<int>(d.params.size());
    if (degree == -1) degree = n;
    if (n != degree) fail("parameter count differs from earlier records");
    if (tok[0] == "*") {
      fallback = d;
      continue;
    }
    u64 p = 0;
    try {
      p = std::stoull(tok[0]);
    } catch (const std::exception&) {
      fail("bad prime '" + tok[0] + "'");
    }
    if (!is_prime(p)) fail(tok[0] + " is not prime");
    d.prime = p;
    if (locals.count(p)) fail("duplicate prime " + tok[0]);
    locals.emplace(p, std::move(d));
  }
  if (degree < 0) throw std::invalid_argument("rep file: no records");
  const u64 bound = pmax ? *pmax : (locals.empty() ? 1 : locals.rbegin()->first);
  if (fallback) {
    for (u64 p : primes_up_to(bound)) {
      if (locals.count(p)) continue;
      LocalData<T> d = *fallback;
      d.prime = p;
      locals.emplace(p, std::move(d));
    }
  }
  return GlobalRep<T>(degree, bound, std::move(locals));
}

template <FieldScalar T>
GlobalRep<T> load_rep(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open rep file '" + path + "'");
  return parse_rep<T>(in);
}

}  // namespace rslab
