#include "aplab/ap_count.hpp"

#include <cmath>

namespace aplab {

namespace {

void check_window(const WindowFn& wf) {
  if (wf.values.size() != wf.params.M)
    throw config_error("window length does not match M");
}

double pow_int(double v, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= v;
  return out;
}

}  // namespace

SupportIndex support_of(const WindowFn& wf) {
  check_window(wf);
  SupportIndex s;
  s.M = wf.params.M;
  s.member.assign(s.M, 0);
  for (u64 i = 0; i < s.M; ++i) {
    if (wf.values[i] != 0.0) {
      s.indices.push_back(i);
      s.member[i] = 1;
    }
  }
  return s;
}

double ap_expectation(const WindowFn& wf, int k,
                      std::vector<ApPair>* retained) {
  check_window(wf);
  if (k < 2 || k > 64) throw config_error("progression length outside [2, 64]");
  const u64 M = wf.params.M;
  SupportIndex s = support_of(wf);
  const u64 sz = s.indices.size();
  if (sz > 20000)
    throw config_error("support too large for exact pair enumeration");
  if (retained) retained->clear();

  KahanAcc acc;
  // diagonal r = 0: every support point contributes its value^k
  for (u64 i : s.indices) acc.add(pow_int(wf.values[i], k));

  // Ordered support pairs (a, b), a != b, fix x = a and r = b - a mod M;
  // the remaining k-2 elements are walked cyclically with early exit on a
  // zero value.
  for (u64 a : s.indices) {
    const double va = wf.values[a];
    for (u64 b : s.indices) {
      if (b == a) continue;
      const u64 r = b >= a ? b - a : b + M - a;
      double prod = va * wf.values[b];
      u64 idx = b;
      bool alive = true;
      for (int i = 2; i < k; ++i) {
        idx += r;
        if (idx >= M) idx -= M;
        const double v = wf.values[idx];
        if (v == 0.0) {
          alive = false;
          break;
        }
        prod *= v;
      }
      if (!alive) continue;
      acc.add(prod);
      if (retained) retained->push_back({a, r});
    }
  }
  return acc.value() / (double(M) * double(M));
}

double brute_force_ap_expectation(const WindowFn& wf, int k) {
  check_window(wf);
  if (k < 2 || k > 64) throw config_error("progression length outside [2, 64]");
  const u64 M = wf.params.M;
  if (M > 5000) throw config_error("brute force capped at M <= 5000");
  KahanAcc acc;
  for (u64 x = 0; x < M; ++x) {
    for (u64 r = 0; r < M; ++r) {
      double prod = 1.0;
      u64 idx = x;
      for (int i = 0; i < k; ++i) {
        const double v = wf.values[idx];
        if (v == 0.0) {
          prod = 0.0;
          break;
        }
        prod *= v;
        idx += r;
        if (idx >= M) idx -= M;
      }
      if (prod != 0.0) acc.add(prod);
    }
  }
  return acc.value() / (double(M) * double(M));
}

WrapCounts wrap_analysis(const Params& p, std::span<const ApPair> pairs,
                         int k) {
  if (k < 2 || k > 64) throw config_error("progression length outside [2, 64]");
  WrapCounts out;
  const u64 M = p.M;
  for (const ApPair& pr : pairs) {
    if (pr.r == 0 || pr.r >= M || pr.x >= M)
      throw config_error("pair outside Z_M or degenerate");
    const i64 rp = 2 * pr.r <= M ? i64(pr.r) : i64(pr.r) - i64(M);
    const i128 n_x = i128(p.N) + i128(pr.x);
    bool genuine = true;
    for (int i = 0; i < k; ++i) {
      const i128 e = n_x + i128(i) * i128(rp);
      if (e < i128(p.support_lo) || e > i128(p.support_hi)) {
        genuine = false;
        break;
      }
    }
    if (genuine) {
      ++out.genuine_pairs;
      if (rp > 0) ++out.integer_aps;
    } else {
      ++out.wrapped;
    }
  }
  return out;
}

ApReport prime_ap_report(const Params& p, int k, const FactorTable& base,
                         std::optional<std::pair<u64, u64>> support_override) {
  Params p2 = p;
  if (support_override) {
    const auto [lo, hi] = *support_override;
    if (lo > hi || lo < p.N || hi > p.N + p.M - 1)
      throw config_error("support override leaves the window");
    p2.support_lo = lo;
    p2.support_hi = hi;
    p2.degenerate_support = p2.support_size() < 2;
  }
  const PrimeWindow primality = support_primality(p2, base);
  const WindowFn f = density_window(p2, primality);

  std::vector<ApPair> pairs;
  ApReport rep;
  rep.expectation = ap_expectation(f, k, &pairs);
  rep.support_size = support_of(f).indices.size();
  rep.pair_count_nondegenerate = pairs.size();
  rep.pair_count_total = pairs.size() + rep.support_size;

  const WrapCounts wc = wrap_analysis(p2, pairs, k);
  rep.wrapped_count = wc.wrapped;
  rep.integer_ap_count = wc.integer_aps;
  rep.density_reference =
      double(p.M) * double(p.M) / std::pow(std::log(double(p.N)), double(k));
  return rep;
}

}  // namespace aplab
