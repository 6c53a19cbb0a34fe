#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace rslab {

// Arbitrary-precision rational, always canonical (lowest terms, positive denominator).
class Rational {
 public:
  Rational() = default;

  template <std::integral I>
  Rational(I v) : v_(to_mpz(v)) {}  // NOLINT(google-explicit-constructor)

  Rational(const mpz_class& v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  template <std::integral I, std::integral J>
  Rational(I num, J den) : v_(to_mpz(num), to_mpz(den)) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    v_.canonicalize();
  }

  Rational(const mpz_class& num, const mpz_class& den) : v_(num, den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    v_.canonicalize();
  }

  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  // Accepts "a", "-a", "a/b".
  static Rational parse(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    s = s.substr(i);
    if (s.empty()) throw std::invalid_argument("Rational::parse: empty");
    if (s.front() == '+') s.erase(0, 1);
    for (char c : s) {
      if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-'))
        throw std::invalid_argument("Rational::parse: bad character in '" + std::string(text) + "'");
    }
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rational::parse: '" + std::string(text) + "'");
    if (q.get_den() == 0) throw std::invalid_argument("Rational::parse: zero denominator");
    q.canonicalize();
    return Rational(q);
  }

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  double to_double() const { return v_.get_d(); }
  std::string str() const { return v_.get_str(); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.v_ == 0) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) != 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) >= 0; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.v_.get_str(); }

 private:
  template <std::integral I>
  static mpz_class to_mpz(I v) {
    if constexpr (std::is_signed_v<I>) {
      return mpz_class(static_cast<long>(v));
    } else {
      return mpz_class(static_cast<unsigned long>(v));
    }
  }

  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

using Complex = std::complex<double>;

// Scalar modes are compile-time: a computation is instantiated for exactly one field type,
// so mixing modes does not compile.
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static double magnitude(const Rational& x) { return std::fabs(x.to_double()); }
  static bool is_zero(const Rational& x) { return x.sign() == 0; }
  static Rational from_rational(const Rational& r) { return r; }
  static Complex to_complex(const Rational& x) { return {x.to_double(), 0.0}; }
  static std::string str(const Rational& x) { return x.str(); }
};

template <>
struct scalar_traits<Complex> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static double magnitude(const Complex& x) { return std::abs(x); }
  static bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
  static Complex from_rational(const Rational& r) { return {r.to_double(), 0.0}; }
  static Complex to_complex(const Complex& x) { return x; }
  static std::string str(const Complex& x) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", x.real(), x.imag());
    return buf;
  }
};

template <class T>
concept FieldScalar = requires(const T& a, const T& b) {
  { a + b } -> std::convertible_to<T>;
  { a - b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { scalar_traits<T>::magnitude(a) } -> std::convertible_to<double>;
  { scalar_traits<T>::is_zero(a) } -> std::convertible_to<bool>;
};

template <FieldScalar T>
bool is_zero(const T& x) {
  return scalar_traits<T>::is_zero(x);
}

template <FieldScalar T>
double magnitude(const T& x) {
  return scalar_traits<T>::magnitude(x);
}

template <FieldScalar T>
inline constexpr bool is_exact_v = scalar_traits<T>::exact;

template <FieldScalar T>
T power(T base, unsigned long e) {
  T result(1);
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

inline Rational rational_power(const Rational& base, long e) {
  if (e >= 0) return power(base, static_cast<unsigned long>(e));
  return Rational(1) / power(base, static_cast<unsigned long>(-e));
}

// Parses "a/b" into Rational and "re,im" (or a real literal) into Complex.
template <FieldScalar T>
T parse_scalar(std::string_view text);

template <>
inline Rational parse_scalar<Rational>(std::string_view text) {
  return Rational::parse(text);
}

template <>
inline Complex parse_scalar<Complex>(std::string_view text) {
  std::string s(text);
  auto to_d = [&](const std::string& part) {
    if (part.find('/') != std::string::npos) return Rational::parse(part).to_double();
    std::size_t used = 0;
    double v = std::stod(part, &used);
    if (used != part.size()) throw std::invalid_argument("parse_scalar: '" + s + "'");
    return v;
  };
  auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return {to_d(s), 0.0};
    return {to_d(s.substr(0, comma)), to_d(s.substr(comma + 1))};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("parse_scalar: '" + s + "'");
  }
}

}  // namespace rslab
