#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "rslab/arith.hpp"
#include "rslab/langlands.hpp"
#include "rslab/scalar.hpp"

namespace rslab {

using Rng = std::mt19937_64;

// Nonzero rational with numerator and denominator bounded by height.
inline Rational random_nonzero_rational(Rng& rng, int height) {
  std::uniform_int_distribution<int> num(1, height), den(1, height), sign(0, 1);
  Rational r(num(rng), den(rng));
  return sign(rng) ? -r : r;
}

inline Rational random_rational(Rng& rng, int height) {
  std::uniform_int_distribution<int> num(-height, height), den(1, height);
  return Rational(num(rng), den(rng));
}

inline Complex random_unit(Rng& rng) {
  std::uniform_real_distribution<double> t(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, t(rng));
}

template <FieldScalar T>
T random_param(Rng& rng, int height);

template <>
inline Rational random_param<Rational>(Rng& rng, int height) {
  return random_nonzero_rational(rng, height);
}

template <>
inline Complex random_param<Complex>(Rng& rng, int) {
  return random_unit(rng);
}

// Unramified at every prime up to pmax, nonzero random parameters.
template <FieldScalar T>
GlobalRep<T> random_unramified_rep(Rng& rng, int degree, u64 pmax, int height = 4) {
  std::map<u64, LocalData<T>> locals;
  for (u64 p : primes_up_to(pmax)) {
    LocalData<T> d;
    d.prime = p;
    for (int i = 0; i < degree; ++i) d.params.push_back(random_param<T>(rng, height));
    locals.emplace(p, std::move(d));
  }
  return GlobalRep<T>(degree, pmax, std::move(locals));
}

// Degree-2 data with the given primes ramified: parameters (gamma, 0), central value gamma * 0 = 0,
// the value of a character of modulus divisible by p.
template <FieldScalar T>
GlobalRep<T> random_gl2_rep(Rng& rng, u64 pmax, const std::vector<u64>& ramified, int height = 4) {
  auto base = random_unramified_rep<T>(rng, 2, pmax, height);
  std::map<u64, LocalData<T>> locals = base.locals();
  for (u64 p : ramified) {
    auto& d = locals.at(p);
    d.params[1] = T(0);
    d.conductor_exp = 1;
    d.central_value = T(0);
  }
  return GlobalRep<T>(2, pmax, std::move(locals));
}

// Same parameters at every prime.
template <FieldScalar T>
GlobalRep<T> constant_rep(const std::vector<T>& params, u64 pmax) {
  std::map<u64, LocalData<T>> locals;
  for (u64 p : primes_up_to(pmax)) locals.emplace(p, LocalData<T>{p, params, 0, T(1), std::nullopt});
  return GlobalRep<T>(static_cast<int>(params.size()), pmax, std::move(locals));
}

}  // namespace rslab
