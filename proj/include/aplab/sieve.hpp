#pragma once

// Exact integer substrate: linear sieve (smallest prime factor, Moebius,
// primality in one pass), segmented prime windows for ranges far beyond the
// table, primorials, and modular helpers. Everything is exact; no floating
// point is involved in any primality or factorization answer.

#include <vector>

#include "aplab/common.hpp"

namespace aplab {

// Sieve of [1, limit] built in one linear pass.
// spf[n] is the smallest prime factor (spf[0] = spf[1] = 0), mobius[n] the
// Moebius function with mobius[1] = 1, and primality is a packed bitset.
// Immutable after construction.
struct FactorTable {
  u64 limit = 0;
  std::vector<u32> spf;
  std::vector<std::int8_t> mobius;
  std::vector<u64> prime_bits;
  std::vector<u32> primes;  // ascending

  bool is_prime(u64 n) const {
    if (n < 2 || n > limit) return false;
    return (prime_bits[n >> 6] >> (n & 63)) & 1;
  }

  u64 prime_count_up_to(u64 x) const;

  // Distinct prime factors of n in ascending order, via repeated spf
  // division. Requires n <= limit.
  void distinct_primes(u64 n, std::vector<u64>& out) const;
};

// limit must lie in [2, 1e8]; the cap is a memory guard (~6.5 bytes/entry).
FactorTable build_factor_table(u64 limit);

// Primality flags for the inclusive range [lo, hi], sieved with the base
// table's primes. Exact, not probabilistic; requires base.limit^2 >= hi.
struct PrimeWindow {
  u64 lo = 1, hi = 0;  // hi < lo encodes an empty window
  std::vector<u64> bits;

  bool empty() const { return hi < lo; }
  bool covers(u64 n) const { return n >= lo && n <= hi; }
  bool is_prime(u64 n) const {
    return (bits[(n - lo) >> 6] >> ((n - lo) & 63)) & 1;
  }
  u64 count() const;
};

PrimeWindow primes_in_range(u64 lo, u64 hi, const FactorTable& base);

struct Primorial {
  u64 W;
  u64 phi;  // phi(W)
};

// W = product of primes <= w and its totient; w in [2, 50] keeps W well
// inside u64 (the product over primes <= 50 is ~6.1e17).
Primorial primorial(int w);

// Inverse of a modulo m (extended Euclid). Throws std::domain_error when
// a == 0 mod m or gcd(a, m) > 1. m may be composite; the primary use with a
// prime modulus is the special case.
u64 mod_inverse(u64 a, u64 m);

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);

// Deterministic Miller-Rabin over the 12-prime base set that is exhaustive
// for every 64-bit input. Used to certify configuration-level primality
// claims without building a table.
bool is_prime_u64(u64 n);

}  // namespace aplab
