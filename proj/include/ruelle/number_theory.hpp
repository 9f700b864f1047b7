#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ruelle/errors.hpp"

namespace ruelle::nt {

using i64 = std::int64_t;

inline i64 mod(i64 a, i64 n) {
  i64 r = a % n;
  return r < 0 ? r + n : r;
}

inline i64 mulmod(i64 a, i64 b, i64 n) { return static_cast<i64>((static_cast<__int128>(a) * b) % n); }

inline i64 powmod(i64 a, i64 e, i64 n) {
  i64 r = 1 % n;
  a = mod(a, n);
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, n);
    a = mulmod(a, a, n);
    e >>= 1;
  }
  return r;
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

// (p, e) pairs, p ascending.
inline std::vector<std::pair<i64, int>> factorize(i64 n) {
  if (n < 1) throw InputError("factorize needs n >= 1");
  std::vector<std::pair<i64, int>> f;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

inline std::vector<i64> prime_divisors(i64 n) {
  std::vector<i64> v;
  for (auto [p, e] : factorize(n)) v.push_back(p);
  return v;
}

inline std::vector<i64> divisors(i64 n) {
  std::vector<i64> d;
  for (i64 i = 1; i * i <= n; ++i)
    if (n % i == 0) {
      d.push_back(i);
      if (i != n / i) d.push_back(n / i);
    }
  std::sort(d.begin(), d.end());
  return d;
}

inline int valuation(i64 n, i64 p) {
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline i64 ipow(i64 b, int e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

inline i64 carmichael(i64 n) {
  i64 l = 1;
  for (auto [p, e] : factorize(n)) {
    i64 pe = ipow(p, e);
    i64 v = (p == 2 && e >= 3) ? pe / 4 : pe / p * (p - 1);
    l = std::lcm(l, v);
  }
  return l;
}

// Multiplicative order of a mod n (gcd(a,n) = 1).
inline i64 order_mod(i64 a, i64 n) {
  if (n == 1) return 1;
  i64 x = mod(a, n), k = 1;
  while (x != 1) {
    x = mulmod(x, a, n);
    ++k;
  }
  return k;
}

// Least primitive root mod p^e, p odd.
inline i64 primitive_root(i64 p, int e) {
  i64 pe = ipow(p, e);
  i64 target = pe / p * (p - 1);
  for (i64 g = 2; g < pe; ++g)
    if (std::gcd(g, p) == 1 && order_mod(g, pe) == target) return g;
  throw std::logic_error("no primitive root");
}

// Kronecker-style symbols used for elliptic counts: (-1/p) and (-3/p), 0 at the ramified prime.
inline int legendre_minus_one(i64 p) {
  if (p == 2) return 0;
  return (p % 4 == 1) ? 1 : -1;
}
inline int legendre_minus_three(i64 p) {
  if (p == 3) return 0;
  if (p == 2) return -1;
  return (p % 3 == 1) ? 1 : -1;
}

// Smallest a' = a mod d with gcd(a', c) = 1 (exists when gcd(a, d, c) = 1).
inline i64 coprime_lift(i64 a, i64 d, i64 c) {
  if (d < 1) throw std::logic_error("coprime_lift needs d >= 1");
  i64 x = mod(a, d);
  for (int t = 0; t < 100000; ++t, x += d)
    if (std::gcd(x, c) == 1) return x;
  throw std::logic_error("coprime_lift failed");
}

}  // namespace ruelle::nt
