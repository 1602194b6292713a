#include "aplab/sieve.hpp"

#include <algorithm>
#include <bit>

namespace aplab {

u64 FactorTable::prime_count_up_to(u64 x) const {
  if (x > limit) throw std::domain_error("prime_count_up_to: beyond table");
  u64 count = 0;
  for (u64 n = 2; n <= x; ++n)
    count += (prime_bits[n >> 6] >> (n & 63)) & 1;
  return count;
}

void FactorTable::distinct_primes(u64 n, std::vector<u64>& out) const {
  if (n > limit) throw std::domain_error("distinct_primes: beyond table");
  out.clear();
  while (n > 1) {
    u64 p = spf[n];
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
}

FactorTable build_factor_table(u64 limit) {
  if (limit < 2 || limit > 100'000'000ULL)
    throw config_error("factor table limit must lie in [2, 1e8]");

  FactorTable t;
  t.limit = limit;
  t.spf.assign(limit + 1, 0);
  t.mobius.assign(limit + 1, 0);
  t.mobius[1] = 1;
  t.prime_bits.assign((limit >> 6) + 1, 0);

  // Linear sieve: each composite is crossed exactly once, by its smallest
  // prime factor, which is also what makes the Moebius recurrence valid.
  for (u64 i = 2; i <= limit; ++i) {
    if (t.spf[i] == 0) {
      t.spf[i] = static_cast<u32>(i);
      t.mobius[i] = -1;
      t.primes.push_back(static_cast<u32>(i));
    }
    for (u32 p : t.primes) {
      if (p > t.spf[i] || i * p > limit) break;
      t.spf[i * p] = p;
      // p == spf[i] means p^2 | i*p, killing the Moebius value.
      t.mobius[i * p] = (p == t.spf[i]) ? 0 : static_cast<std::int8_t>(-t.mobius[i]);
    }
  }
  for (u64 n = 2; n <= limit; ++n)
    if (t.spf[n] == n) t.prime_bits[n >> 6] |= u64{1} << (n & 63);
  return t;
}

u64 PrimeWindow::count() const {
  if (empty()) return 0;
  u64 c = 0;
  for (u64 word : bits) c += static_cast<u64>(std::popcount(word));
  return c;
}

PrimeWindow primes_in_range(u64 lo, u64 hi, const FactorTable& base) {
  if (lo < 2 || hi < lo)
    throw config_error("primes_in_range: need 2 <= lo <= hi");
  if (static_cast<u128>(base.limit) * base.limit < hi)
    throw config_error("primes_in_range: base table limit^2 < hi");

  PrimeWindow w;
  w.lo = lo;
  w.hi = hi;
  u64 len = hi - lo + 1;
  w.bits.assign((len + 63) >> 6, ~u64{0});
  // trim the slack bits in the last word so count() is exact
  if (len & 63) w.bits.back() = (u64{1} << (len & 63)) - 1;

  for (u32 p : base.primes) {
    u64 pp = static_cast<u64>(p);
    if (pp * pp > hi) break;
    // first multiple of p in the window, skipping p itself
    u64 start = std::max(pp * pp, ((lo + pp - 1) / pp) * pp);
    for (u64 m = start; m <= hi; m += pp)
      w.bits[(m - lo) >> 6] &= ~(u64{1} << ((m - lo) & 63));
  }
  return w;
}

Primorial primorial(int w) {
  if (w < 2 || w > 50)
    throw config_error("primorial: w must lie in [2, 50]");
  Primorial r{1, 1};
  for (int p = 2; p <= w; ++p) {
    bool prime = p >= 2;
    for (int d = 2; d * d <= p; ++d)
      if (p % d == 0) { prime = false; break; }
    if (!prime) continue;
    r.W *= static_cast<u64>(p);
    r.phi *= static_cast<u64>(p - 1);
  }
  return r;
}

u64 mod_inverse(u64 a, u64 m) {
  if (m < 2) throw std::domain_error("mod_inverse: modulus must be >= 2");
  a %= m;
  if (a == 0) throw std::domain_error("mod_inverse: zero has no inverse");
  // extended Euclid on (a, m); track only the coefficient of a
  i64 old_r = static_cast<i64>(a), r = static_cast<i64>(m);
  i64 old_s = 1, s = 0;
  while (r != 0) {
    i64 q = old_r / r;
    i64 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw std::domain_error("mod_inverse: arguments not coprime");
  i64 inv = old_s % static_cast<i64>(m);
  if (inv < 0) inv += static_cast<i64>(m);
  return static_cast<u64>(inv);
}

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  // This base set decides primality for every n < 3.3e24, hence all of u64.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace aplab
