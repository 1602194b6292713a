#pragma once

// Shared scalar types, error classes and small numeric helpers used across the
// library. Everything here is header-only and dependency-free.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

namespace aplab {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

// Bad run configuration (rejected inputs, overflow guards, size caps).
// Maps to process exit code 1 in the CLI.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Out-of-contract arguments to an otherwise valid configuration
// (e.g. a point outside the covered window). std::domain_error is reused.

inline u64 isqrt_u64(u64 n) {
  if (n == 0) return 0;
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  // sqrt on doubles can be off by one ulp near perfect squares; fix up.
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

// Compensated accumulation (Neumaier variant). Used wherever a long
// deterministic sum feeds a reported value, so results do not depend on
// clever-but-fragile reassociation and stay identical run to run.
struct KahanAcc {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// splitmix64; used only to derive independent sub-stream seeds from the
// user-facing seed so that check ordering inside a suite cannot entangle
// streams.
inline u64 derive_seed(u64 seed, u64 stream) {
  u64 z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 is fully specified by the standard, so draws are reproducible
// across platforms. The bounded draw avoids std::uniform_int_distribution,
// whose mapping is implementation-defined.
struct Rng {
  std::mt19937_64 gen;

  explicit Rng(u64 seed) : gen(seed) {}

  u64 below(u64 n) {
    // rejection sampling: accept the top 2^64 - (2^64 mod n) values
    u64 threshold = (0 - n) % n;
    for (;;) {
      u64 x = gen();
      if (x >= threshold) return x % n;
    }
  }

  double unit() {  // [0,1) with 53 random bits
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  }
};

// |a-b| <= tol * max(1, |a|, |b|): relative comparison with an absolute floor
// so that exact cancellations to zero remain comparable.
inline bool close_rel(double a, double b, double tol) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

}  // namespace aplab
