#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace rslab {

using u64 = std::uint64_t;
using i64 = std::int64_t;

struct PrimePower {
  u64 p;
  int k;
};

using Factorization = std::vector<PrimePower>;

inline std::vector<u64> primes_up_to(u64 n) {
  std::vector<u64> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (u64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

// spf[n] is the least prime factor of n for 2 <= n <= bound.
inline std::vector<u64> smallest_prime_factors(u64 bound) {
  std::vector<u64> spf(bound + 1, 0);
  for (u64 i = 2; i <= bound; ++i) {
    if (spf[i] != 0) continue;
    for (u64 j = i; j <= bound; j += i)
      if (spf[j] == 0) spf[j] = i;
  }
  return spf;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Prime factors in increasing order.
inline Factorization factorize(u64 n) {
  if (n == 0) throw std::domain_error("factorize(0)");
  Factorization f;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    f.push_back({p, k});
  }
  if (n > 1) f.push_back({n, 1});
  return f;
}

inline int valuation(u64 n, u64 p) {
  if (n == 0) throw std::domain_error("valuation(0)");
  int k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

inline u64 ipow(u64 b, int e) {
  u64 r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

inline u64 euler_phi(u64 n) {
  u64 r = n;
  for (auto [p, k] : factorize(n)) r = r / p * (p - 1);
  return r;
}

inline u64 radical(u64 n) {
  u64 r = 1;
  for (auto [p, k] : factorize(n)) r *= p;
  return r;
}

inline int moebius(u64 n) {
  int m = 1;
  for (auto [p, k] : factorize(n)) {
    if (k > 1) return 0;
    m = -m;
  }
  return m;
}

inline u64 lcm_u64(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

// Returns (g, x, y) with a x + b y = g = gcd(a, b) >= 0.
struct Bezout {
  i64 g, x, y;
};

inline Bezout extended_gcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    i64 q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
    std::tie(old_t, t) = std::pair{t, old_t - q * t};
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline u64 mod_reduce(i64 a, u64 m) {
  i64 r = a % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m); }

inline u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

inline u64 inverse_mod(i64 a, u64 m) {
  auto [g, x, y] = extended_gcd(static_cast<i64>(mod_reduce(a, m)), static_cast<i64>(m));
  (void)y;
  if (g != 1) throw std::domain_error("inverse_mod: not invertible");
  return mod_reduce(x, m);
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Least primitive root modulo an odd prime power p^k.
inline u64 primitive_root_prime_power(u64 p, int k) {
  if (p == 2) throw std::domain_error("primitive_root_prime_power: p = 2");
  const u64 order = p - 1;
  auto prime_factors = factorize(order);
  u64 g = 2;
  for (;; ++g) {
    bool ok = true;
    for (auto [r, e] : prime_factors) {
      if (powmod(g, order / r, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) break;
  }
  if (k >= 2 && powmod(g, p - 1, p * p) == 1) g += p;
  return g;
}

inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> d{1};
  for (auto [p, k] : factorize(n)) {
    const std::size_t base = d.size();
    u64 pk = 1;
    for (int i = 1; i <= k; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) d.push_back(d[j] * pk);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace rslab
