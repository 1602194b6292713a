#pragma once

// Exact k-term arithmetic progression accounting over Z_M.
//
// The headline quantity is E = (1/M^2) sum over (x, r) in Z_M^2 of
// prod_{i=0..k-1} f(x + i r), computed without sampling. A term is nonzero
// only when its first two elements land in the support of f, so the sum is
// driven by ordered support pairs (diagonal r = 0 handled separately); that
// is quadratic in the support size, not in M.
//
// Each qualifying nondegenerate pair is then classified: lifting r to its
// signed representative r' in (-M/2, M/2], does n_x + i r' stay inside the
// support interval for every i? If yes the cyclic progression is a genuine
// integer progression; if not it used the wrap-around of Z_M. Genuine
// progressions with r' > 0 are counted once each as integer progressions
// (the r' < 0 mate is the same set read backwards).

#include <optional>
#include <utility>
#include <vector>

#include "aplab/common.hpp"
#include "aplab/measures.hpp"

namespace aplab {

// Nonzero positions of a window function, with a membership bitmap.
struct SupportIndex {
  u64 M = 0;
  std::vector<u64> indices;  // ascending
  std::vector<u8> member;    // member[i] == 1 iff values[i] != 0

  bool contains(u64 i) const { return i < M && member[i] != 0; }
};

SupportIndex support_of(const WindowFn& wf);

// A progression start and cyclic step, both as window indices.
struct ApPair {
  u64 x = 0;
  u64 r = 0;
};

// E = (1/M^2) sum_{x,r} prod_i wf(x + i r). When `retained` is given it is
// filled with every nondegenerate (r != 0) pair whose product is nonzero.
// The support must have at most 20000 points (ordered-pair enumeration is
// quadratic); k must lie in [2, 64].
double ap_expectation(const WindowFn& wf, int k,
                      std::vector<ApPair>* retained = nullptr);

// The same sum by direct iteration over all M^2 pairs. M is capped at 5000;
// exists as an oracle for the pair-enumeration path.
double brute_force_ap_expectation(const WindowFn& wf, int k);

struct WrapCounts {
  u64 wrapped = 0;        // pairs that use the wrap-around of Z_M
  u64 genuine_pairs = 0;  // pairs that are integer progressions in the support
  u64 integer_aps = 0;    // genuine pairs with positive signed step
};

// Classifies qualifying pairs against the support interval of p. The signed
// step is r' = r when 2r <= M, else r - M.
WrapCounts wrap_analysis(const Params& p, std::span<const ApPair> pairs, int k);

struct ApReport {
  double expectation = 0.0;
  u64 support_size = 0;
  u64 pair_count_total = 0;          // qualifying pairs including r = 0
  u64 pair_count_nondegenerate = 0;  // qualifying pairs with r != 0
  u64 wrapped_count = 0;
  u64 integer_ap_count = 0;
  double density_reference = 0.0;  // M^2 / ln(N)^k, the naive pair scale
};

// Full accounting for the prime density window: builds the scaled W-tricked
// density on the support band (or on an explicit inclusive [lo, hi] override
// inside the window), runs the exact expectation, and classifies every
// qualifying pair. The factor table must satisfy limit^2 >= W*hi + 1 so the
// band primality can be sieved exactly.
ApReport prime_ap_report(
    const Params& p, int k, const FactorTable& base,
    std::optional<std::pair<u64, u64>> support_override = std::nullopt);

}  // namespace aplab
