// Exact progression expectation over Z_M, the brute-force oracle, and the
// wrap/integer classification of qualifying pairs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "aplab/ap_count.hpp"
#include "aplab/common.hpp"
#include "aplab/measures.hpp"
#include "aplab/sieve.hpp"

using namespace aplab;

namespace {

Params make(u64 N, u64 M, int k, int w, Mode mode = Mode::exploratory) {
  RawParams r;
  r.N = N;
  r.M = M;
  r.k = k;
  r.w = w;
  r.mode = mode;
  return resolve_params(r);
}

WindowFn indicator(const Params& p, const std::vector<u64>& idx) {
  WindowFn wf;
  wf.params = p;
  wf.values.assign(p.M, 0.0);
  for (u64 i : idx) wf.values[i] = 1.0;
  return wf;
}

}  // namespace

TEST_CASE("three points in Z_7 give exactly 5/49") {
  Params p = make(7, 7, 3, 2);
  WindowFn wf = indicator(p, {0, 1, 2});
  std::vector<ApPair> pairs;
  double e = ap_expectation(wf, 3, &pairs);
  CHECK(e == 5.0 / 49.0);
  CHECK(brute_force_ap_expectation(wf, 3) == e);
  // the two qualifying nondegenerate pairs: (0,1,2) forward and backward
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].x == 0);
  CHECK(pairs[0].r == 1);
  CHECK(pairs[1].x == 2);
  CHECK(pairs[1].r == 6);
}

TEST_CASE("a single support point only has the degenerate progression") {
  Params p = make(5, 5, 3, 2);
  WindowFn wf = indicator(p, {0});
  std::vector<ApPair> pairs;
  CHECK(ap_expectation(wf, 3, &pairs) == 1.0 / 25.0);
  CHECK(pairs.empty());
}

TEST_CASE("k = 2 over the full window averages to 1") {
  Params p = make(101, 101, 3, 2);
  WindowFn wf;
  wf.params = p;
  wf.values.assign(p.M, 1.0);
  CHECK(ap_expectation(wf, 2) == 1.0);  // every (x, r) qualifies
  CHECK(brute_force_ap_expectation(wf, 2) == 1.0);
}

TEST_CASE("doubling the window scales the expectation by 2^k") {
  Params p = make(101, 101, 3, 2);
  Rng rng(23);
  WindowFn wf;
  wf.params = p;
  wf.values.assign(p.M, 0.0);
  for (int i = 0; i < 20; ++i) wf.values[rng.below(p.M)] = 1.0;
  WindowFn doubled = wf;
  for (double& v : doubled.values) v *= 2.0;
  // power-of-two scaling is exact through every intermediate
  CHECK(ap_expectation(doubled, 3) == 8.0 * ap_expectation(wf, 3));
}

TEST_CASE("pair enumeration matches brute force on random 0/1 supports") {
  Rng rng(771);
  const u64 ms[] = {53, 101, 211, 499};
  for (int trial = 0; trial < 24; ++trial) {
    u64 M = ms[trial % 4];
    Params p = make(M, M, 3, 2);
    WindowFn wf;
    wf.params = p;
    wf.values.assign(M, 0.0);
    u64 count = 2 + rng.below(M / 4);
    for (u64 j = 0; j < count; ++j) wf.values[rng.below(M)] = 1.0;
    std::vector<ApPair> pairs;
    double fast = ap_expectation(wf, 3, &pairs);
    CHECK(fast == brute_force_ap_expectation(wf, 3));  // integer sums: exact
    CHECK(pairs.size() % 2 == 0);  // reversal pairs qualifying pairs up
  }
}

TEST_CASE("pair enumeration matches brute force on weighted supports") {
  Rng rng(772);
  const double levels[] = {0.0, 0.5, 1.25, 2.0};
  for (int trial = 0; trial < 8; ++trial) {
    u64 M = trial % 2 == 0 ? 101 : 211;
    Params p = make(M, M, 4, 2);
    WindowFn wf;
    wf.params = p;
    wf.values.assign(M, 0.0);
    for (u64 i = 0; i < M; ++i)
      if (rng.below(5) == 0) wf.values[i] = levels[rng.below(4)];
    double fast = ap_expectation(wf, 4);
    double brute = brute_force_ap_expectation(wf, 4);
    CHECK(std::abs(fast - brute) <=
          1e-12 * std::max({1.0, std::abs(fast), std::abs(brute)}));
  }
}

TEST_CASE("enumeration caps guard quadratic and brute-force blowups") {
  Params p = make(20011, 20011, 3, 2);
  WindowFn wf;
  wf.params = p;
  wf.values.assign(p.M, 1.0);
  CHECK_THROWS_WITH_AS((void)ap_expectation(wf, 3),
                       doctest::Contains("support too large"), config_error);
  Params q = make(5003, 5003, 3, 2);
  WindowFn small;
  small.params = q;
  small.values.assign(q.M, 1.0);
  CHECK_THROWS_WITH_AS((void)brute_force_ap_expectation(small, 3),
                       doctest::Contains("brute force"), config_error);
}

TEST_CASE("wrap analysis separates genuine progressions from wrapped ones") {
  Params p = make(101, 101, 3, 2);
  p.support_lo = p.N;       // synthetic wide band [N, N+60]
  p.support_hi = p.N + 60;  // width 61 > M/2, wraps become possible
  std::vector<ApPair> pairs{
      {0, 30},    // 0, 30, 60: genuine increasing
      {60, 71},   // signed step -30: 60, 30, 0 genuine decreasing
      {10, 50},   // 10, 60, 110: leaves the band, wrapped
      {10, 51},   // signed step -50: 10, -40: leaves the band, wrapped
  };
  WrapCounts wc = wrap_analysis(p, pairs, 3);
  CHECK(wc.genuine_pairs == 2);
  CHECK(wc.integer_aps == 1);
  CHECK(wc.wrapped == 2);

  std::vector<ApPair> degenerate{{0, 0}};
  CHECK_THROWS_AS((void)wrap_analysis(p, degenerate, 3), config_error);
}

TEST_CASE("narrow bands admit no wrapped progression") {
  // support width <= M/2 forces every qualifying pair to be genuine; verify
  // against the full classification on random indicator windows
  Rng rng(9001);
  for (int trial = 0; trial < 10; ++trial) {
    Params p = make(499, 499, 3, 2);
    p.support_lo = p.N + 10;
    p.support_hi = p.N + 10 + 239;  // width 240 < 499/2
    WindowFn wf;
    wf.params = p;
    wf.values.assign(p.M, 0.0);
    for (int j = 0; j < 40; ++j)
      wf.values[10 + rng.below(240)] = 1.0;
    std::vector<ApPair> pairs;
    ap_expectation(wf, 3, &pairs);
    WrapCounts wc = wrap_analysis(p, pairs, 3);
    CHECK(wc.wrapped == 0);
    CHECK(wc.genuine_pairs == pairs.size());
    CHECK(wc.integer_aps * 2 == wc.genuine_pairs);  // each AP read both ways
  }
}

TEST_CASE("prime window report cross-checks an independent AP census") {
  // W = 2 full-support window: support = { n : 2n+1 prime }, so integer
  // progressions in n correspond exactly to progressions of primes 2n+1.
  Params p = make(1000003, 2503, 3, 2);
  FactorTable base = build_factor_table(2000);
  ApReport rep =
      prime_ap_report(p, 3, base, std::make_pair(p.N, p.N + p.M - 1));

  // independent support census by deterministic Miller-Rabin
  std::vector<u64> sup;
  for (u64 n = p.N; n <= p.N + p.M - 1; ++n)
    if (is_prime_u64(2 * n + 1)) sup.push_back(n);
  CHECK(rep.support_size == sup.size());

  // independent increasing-progression count over the integer support
  std::set<u64> in_sup(sup.begin(), sup.end());
  u64 aps = 0;
  for (size_t i = 0; i < sup.size(); ++i)
    for (size_t j = i + 1; j < sup.size(); ++j) {
      u64 third = 2 * sup[j] - sup[i];
      if (third <= p.N + p.M - 1 && in_sup.count(third)) ++aps;
    }
  CHECK(rep.integer_ap_count == aps);
  CHECK(rep.integer_ap_count > 0);
  CHECK(rep.pair_count_total ==
        rep.pair_count_nondegenerate + rep.support_size);
  CHECK(rep.density_reference ==
        doctest::Approx(double(p.M) * double(p.M) /
                        std::pow(std::log(double(p.N)), 3.0)));
}

TEST_CASE("support overrides must stay inside the window") {
  Params p = make(1009, 1009, 3, 2);
  FactorTable base = build_factor_table(2000);
  CHECK_THROWS_AS((void)prime_ap_report(p, 3, base,
                                        std::make_pair(p.N + 5, p.N + 4)),
                  config_error);
  CHECK_THROWS_AS((void)prime_ap_report(p, 3, base,
                                        std::make_pair(p.N, p.N + p.M)),
                  config_error);
  CHECK_THROWS_AS((void)prime_ap_report(p, 3, base,
                                        std::make_pair(p.N - 1, p.N + 4)),
                  config_error);
}

TEST_CASE("literal bands near 1e5 are wrap-free with real primes") {
  Params p = make(100003, 100003, 3, 5, Mode::literal);
  FactorTable base = build_factor_table(10000);
  ApReport rep = prime_ap_report(p, 3, base);
  CHECK(rep.wrapped_count == 0);
  CHECK(rep.pair_count_total ==
        rep.pair_count_nondegenerate + rep.support_size);
}
