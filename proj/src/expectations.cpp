#include "aplab/expectations.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace aplab {

namespace {

// Keeps every rational small enough that the 4-factor cross products in the
// proportionality test fit comfortably in 128 bits.
constexpr i64 coeff_cap = i64(1) << 31;

Rational normalize_rational(Rational r) {
  if (r.den == 0) throw config_error("form coefficient has zero denominator");
  if (r.num >= coeff_cap || r.num <= -coeff_cap || r.den >= coeff_cap ||
      r.den <= -coeff_cap)
    throw config_error("form coefficient magnitude above 2^31");
  if (r.den < 0) {
    r.num = -r.num;
    r.den = -r.den;
  }
  if (r.num == 0) {
    r.den = 1;
    return r;
  }
  i64 g = std::gcd(r.num < 0 ? -r.num : r.num, r.den);
  r.num /= g;
  r.den /= g;
  return r;
}

u64 reduce_mod(i64 v, u64 M) {
  i64 r = v % i64(M);
  if (r < 0) r += i64(M);
  return u64(r);
}

void check_window(const WindowFn& wf) {
  if (wf.values.size() != wf.params.M)
    throw config_error("window length does not match M");
}

// Evaluates embedded forms at a point of Z_M^t and maps residues to window
// indices (index i holds n = N + i, whose residue is (N + i) mod M).
struct FormEval {
  const LinearFormSystem& sys;
  u64 n_shift;  // N mod M

  u64 value(int i, const u64* x) const {
    u64 acc = sys.offsets[size_t(i)];
    const u64* row = sys.embedded.data() + size_t(i) * size_t(sys.t);
    for (int j = 0; j < sys.t; ++j) {
      if (row[j] == 0 || x[j] == 0) continue;
      acc += mulmod(row[j], x[j], sys.M);
      if (acc >= sys.M) acc -= sys.M;
    }
    return acc;
  }

  u64 index_of(u64 residue) const {
    return residue >= n_shift ? residue - n_shift
                              : residue + sys.M - n_shift;
  }
};

u128 box_point_count(u64 M, int t, u128 cap) {
  u128 points = 1;
  for (int j = 0; j < t; ++j) {
    points *= M;
    if (points > cap) return cap + 1;  // saturate, caller only compares
  }
  return points;
}

}  // namespace

LinearFormSystem make_form_system(int m, int t, u64 M,
                                  const std::vector<Rational>& coeffs,
                                  const std::vector<i64>& offsets) {
  if (m < 1 || t < 1) throw config_error("form system needs m >= 1, t >= 1");
  if (M < 2 || M >= (u64(1) << 62))
    throw config_error("form system modulus out of range");
  if (coeffs.size() != size_t(m) * size_t(t))
    throw config_error("coefficient matrix is not m*t entries");
  if (offsets.size() != size_t(m))
    throw config_error("offset vector is not m entries");

  LinearFormSystem sys;
  sys.m = m;
  sys.t = t;
  sys.M = M;
  sys.coeffs.reserve(coeffs.size());
  sys.embedded.reserve(coeffs.size());
  for (const Rational& raw : coeffs) {
    Rational r = normalize_rational(raw);
    u64 den_mod = u64(r.den) % M;
    if (std::gcd(den_mod, M) != 1)
      throw config_error("coefficient denominator not invertible mod M");
    u64 num_mod = reduce_mod(r.num, M);
    sys.embedded.push_back(mulmod(num_mod, mod_inverse(den_mod, M), M));
    sys.coeff_bound =
        std::max({sys.coeff_bound, r.num < 0 ? -r.num : r.num, r.den});
    sys.coeffs.push_back(r);
  }
  sys.offsets.reserve(offsets.size());
  for (i64 b : offsets) sys.offsets.push_back(reduce_mod(b, M));
  return sys;
}

LinearFormSystem ap_form_system(int k, u64 M) {
  if (k < 3 || k > 24) throw config_error("k must lie in [3, 24]");
  std::vector<Rational> coeffs;
  coeffs.reserve(size_t(k) * 2);
  std::vector<i64> offsets(size_t(k), 0);
  for (int i = 0; i < k; ++i) {
    coeffs.push_back({1, 1});  // x
    coeffs.push_back({i, 1});  // (i) * r for the (i+1)-th term
  }
  return make_form_system(k, 2, M, coeffs, offsets);
}

FormLevel ap_level(int k) {
  if (k < 3 || k > 24) throw config_error("k must lie in [3, 24]");
  FormLevel lv;
  lv.m0 = u64(k) << (k - 1);
  lv.t0 = u64(3 * k - 4);
  lv.L0 = k;
  return lv;
}

FormCheck validate_form_system(const LinearFormSystem& sys,
                               const FormLevel& level) {
  FormCheck out;
  auto fail = [&out](const char* fmt, auto... args) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, args...);
    out.ok = false;
    out.violation = buf;
  };

  if (sys.m < 1 || sys.t < 1 ||
      sys.coeffs.size() != size_t(sys.m) * size_t(sys.t) ||
      sys.offsets.size() != size_t(sys.m)) {
    fail("%s", "malformed form system");
    return out;
  }
  if (u64(sys.m) > level.m0) {
    fail("m=%d exceeds the level bound %" PRIu64, sys.m, level.m0);
    return out;
  }
  if (u64(sys.t) > level.t0) {
    fail("t=%d exceeds the level bound %" PRIu64, sys.t, level.t0);
    return out;
  }
  if (sys.coeff_bound > level.L0) {
    fail("coefficient height %" PRId64 " exceeds the level bound %" PRId64,
         sys.coeff_bound, level.L0);
    return out;
  }
  for (int i = 0; i < sys.m; ++i) {
    bool all_zero = true;
    for (int j = 0; j < sys.t; ++j)
      if (sys.coeff(i, j).num != 0) all_zero = false;
    if (all_zero) {
      fail("form %d has zero linear part", i);
      return out;
    }
  }
  // Two nonzero rows are rationally proportional iff every 2x2 minor of the
  // pair vanishes. Cross-multiplied exactly; the 2^31 coefficient cap keeps
  // the four-factor products inside 128 bits.
  for (int u = 0; u + 1 < sys.m; ++u) {
    for (int v = u + 1; v < sys.m; ++v) {
      bool prop = true;
      for (int a = 0; a < sys.t && prop; ++a) {
        for (int b = a + 1; b < sys.t && prop; ++b) {
          const Rational& ua = sys.coeff(u, a);
          const Rational& ub = sys.coeff(u, b);
          const Rational& va = sys.coeff(v, a);
          const Rational& vb = sys.coeff(v, b);
          i128 lhs = i128(ua.num) * vb.num * ub.den * va.den;
          i128 rhs = i128(ub.num) * va.num * ua.den * vb.den;
          if (lhs != rhs) prop = false;
        }
      }
      if (prop) {
        fail("forms %d and %d have proportional linear parts", u, v);
        return out;
      }
    }
  }
  return out;
}

double mean(const WindowFn& wf) {
  check_window(wf);
  KahanAcc acc;
  for (double v : wf.values) acc.add(v);
  return acc.value() / double(wf.values.size());
}

double conditional_mean(const WindowFn& wf,
                        const std::function<bool(u64)>& pred) {
  check_window(wf);
  KahanAcc acc;
  u64 count = 0;
  for (u64 i = 0; i < wf.params.M; ++i) {
    if (!pred(wf.params.N + i)) continue;
    acc.add(wf.values[i]);
    ++count;
  }
  if (count == 0) throw std::domain_error("conditional mean over an empty set");
  return acc.value() / double(count);
}

Estimate lf_expectation_exact(const WindowFn& wf, const LinearFormSystem& sys) {
  check_window(wf);
  const Params& p = wf.params;
  if (sys.M != p.M)
    throw config_error("form system modulus differs from the window");
  u128 points = box_point_count(p.M, sys.t, u128(100000000));
  if (points > u128(100000000))
    throw config_error("exact expectation capped at 1e8 grid points");

  FormEval ev{sys, p.N % p.M};
  std::vector<u64> x(size_t(sys.t), 0);
  KahanAcc acc;
  for (;;) {
    double prod = 1.0;
    for (int i = 0; i < sys.m; ++i) {
      double f = wf.values[ev.index_of(ev.value(i, x.data()))];
      if (f == 0.0) {
        prod = 0.0;
        break;
      }
      prod *= f;
    }
    if (prod != 0.0) acc.add(prod);
    int j = 0;
    while (j < sys.t && ++x[size_t(j)] == p.M) {
      x[size_t(j)] = 0;
      ++j;
    }
    if (j == sys.t) break;
  }
  Estimate e;
  e.value = acc.value() / double(u64(points));
  e.samples = u64(points);
  e.exhaustive = true;
  return e;
}

Estimate lf_expectation_sampled(const WindowFn& wf, const LinearFormSystem& sys,
                                u64 samples, u64 seed) {
  check_window(wf);
  const Params& p = wf.params;
  if (sys.M != p.M)
    throw config_error("form system modulus differs from the window");
  if (samples == 0) throw config_error("samples must be positive");

  FormEval ev{sys, p.N % p.M};
  Rng rng(seed);
  std::vector<u64> x(size_t(sys.t));
  KahanAcc sum, sumsq;
  for (u64 s = 0; s < samples; ++s) {
    for (int j = 0; j < sys.t; ++j) x[size_t(j)] = rng.below(p.M);
    double prod = 1.0;
    for (int i = 0; i < sys.m; ++i) {
      double f = wf.values[ev.index_of(ev.value(i, x.data()))];
      if (f == 0.0) {
        prod = 0.0;
        break;
      }
      prod *= f;
    }
    sum.add(prod);
    sumsq.add(prod * prod);
  }
  double mean_v = sum.value() / double(samples);
  double var = 0.0;
  if (samples > 1) {
    var = (sumsq.value() - double(samples) * mean_v * mean_v) /
          double(samples - 1);
    if (var < 0.0) var = 0.0;
  }
  Estimate e;
  e.value = mean_v;
  e.std_error = std::sqrt(var / double(samples));
  e.samples = samples;
  e.seed = seed;
  return e;
}

Estimate lf_expectation(const WindowFn& wf, const LinearFormSystem& sys,
                        u64 samples, u64 seed) {
  u128 points = box_point_count(sys.M, sys.t, u128(10000000));
  if (points <= u128(10000000)) return lf_expectation_exact(wf, sys);
  return lf_expectation_sampled(wf, sys, samples, seed);
}

GyResult gy_product_ratio(const Params& p, const std::vector<IntegerForm>& forms,
                          const std::vector<std::pair<u64, u64>>& box,
                          const FactorTable& table, u64 samples, u64 seed) {
  if (!(p.R > 1.0)) throw config_error("divisor sum needs R > 1");
  if (forms.empty()) throw config_error("need at least one form");
  if (box.empty()) throw config_error("need at least one box interval");
  const int m = int(forms.size());
  const int t = int(box.size());
  const u64 window_hi = p.N + p.M - 1;
  for (const auto& [lo, hi] : box) {
    if (lo > hi) throw config_error("box interval has lo > hi");
    if (lo < p.N || hi > window_hi)
      throw config_error("box leaves the window [N, N+M)");
  }
  for (const IntegerForm& f : forms) {
    if (f.coeffs.size() != size_t(t))
      throw config_error("form arity differs from the box dimension");
    for (i64 c : f.coeffs)
      if (i128(4) * c * c > i128(p.w))
        throw config_error("form coefficient exceeds sqrt(w)/2");
  }

  // Interval arithmetic per form: psi must stay >= 1 on the whole box and
  // W*psi+1 must stay inside 63 bits.
  u64 theta_max = 0;
  for (const IntegerForm& f : forms) {
    i128 lo_s = f.offset, hi_s = f.offset;
    for (int j = 0; j < t; ++j) {
      i64 c = f.coeffs[size_t(j)];
      if (c >= 0) {
        lo_s += i128(c) * i128(box[size_t(j)].first);
        hi_s += i128(c) * i128(box[size_t(j)].second);
      } else {
        lo_s += i128(c) * i128(box[size_t(j)].second);
        hi_s += i128(c) * i128(box[size_t(j)].first);
      }
    }
    if (lo_s < 1)
      throw config_error("a form drops below 1 somewhere on the box");
    i128 theta_hi = i128(p.W) * hi_s + 1;
    if (theta_hi >= (i128(1) << 63))
      throw config_error("W*psi+1 overflows 63 bits on the box");
    theta_max = std::max(theta_max, u64(theta_hi));
  }
  u64 rf = u64(p.R);
  if (table.limit < rf && u128(table.limit) * table.limit < u128(theta_max))
    throw config_error("factor table too small for the divisor sum");

  u128 points = 1;
  bool exhaustive = true;
  for (const auto& [lo, hi] : box) {
    points *= u128(hi - lo + 1);
    if (points > u128(10000000)) {
      exhaustive = false;
      break;
    }
  }

  auto point_value = [&](const u64* xs) {
    double prod = 1.0;
    for (const IntegerForm& f : forms) {
      i128 v = f.offset;
      for (int j = 0; j < t; ++j)
        v += i128(f.coeffs[size_t(j)]) * i128(xs[j]);
      u64 theta = p.W * u64(v) + 1;
      double lam = lambda_r_direct(theta, p.R, table);
      prod *= lam * lam;
    }
    return prod;
  };

  Estimate est;
  KahanAcc sum;
  std::vector<u64> xs(static_cast<size_t>(t));
  if (exhaustive) {
    for (int j = 0; j < t; ++j) xs[size_t(j)] = box[size_t(j)].first;
    for (;;) {
      sum.add(point_value(xs.data()));
      int j = 0;
      while (j < t) {
        if (xs[size_t(j)] < box[size_t(j)].second) {
          ++xs[size_t(j)];
          break;
        }
        xs[size_t(j)] = box[size_t(j)].first;
        ++j;
      }
      if (j == t) break;
    }
    est.value = sum.value() / double(u64(points));
    est.samples = u64(points);
    est.exhaustive = true;
  } else {
    if (samples == 0) throw config_error("samples must be positive");
    Rng rng(seed);
    KahanAcc sumsq;
    for (u64 s = 0; s < samples; ++s) {
      for (int j = 0; j < t; ++j) {
        u64 len = box[size_t(j)].second - box[size_t(j)].first + 1;
        xs[size_t(j)] = box[size_t(j)].first + rng.below(len);
      }
      double v = point_value(xs.data());
      sum.add(v);
      sumsq.add(v * v);
    }
    double mean_v = sum.value() / double(samples);
    double var = 0.0;
    if (samples > 1) {
      var = (sumsq.value() - double(samples) * mean_v * mean_v) /
            double(samples - 1);
      if (var < 0.0) var = 0.0;
    }
    est.value = mean_v;
    est.std_error = std::sqrt(var / double(samples));
    est.samples = samples;
    est.seed = seed;
  }

  const double ln_r = std::log(p.R);
  GyResult out;
  out.raw_mean = est.value;
  out.target = std::pow(double(p.W) * ln_r / double(p.phi_W), double(m));
  out.ratio = est;
  out.ratio.value = est.value / out.target;
  out.ratio.std_error = est.std_error / out.target;
  double min_side = std::numeric_limits<double>::infinity();
  for (const auto& [lo, hi] : box)
    min_side = std::min(min_side, double(hi - lo + 1));
  out.min_side = min_side;
  out.required_side = std::exp(10.0 * double(m) * ln_r);
  out.box_hypothesis_met = min_side >= out.required_side;
  return out;
}

double correlation_lhs(const WindowFn& wf, std::span<const u64> shifts) {
  check_window(wf);
  const u64 M = wf.params.M;
  const u64 s = shifts.size();
  const u64 cap = u64(1) << (wf.params.k - 1);
  if (s < 2 || s > cap)
    throw config_error("shift tuple size outside [2, 2^(k-1)]");
  std::vector<u64> hs(shifts.begin(), shifts.end());
  for (u64& h : hs) h %= M;
  KahanAcc acc;
  for (u64 x = 0; x < M; ++x) {
    double prod = 1.0;
    for (u64 h : hs) {
      u64 idx = x + h;
      if (idx >= M) idx -= M;
      double f = wf.values[idx];
      if (f == 0.0) {
        prod = 0.0;
        break;
      }
      prod *= f;
    }
    if (prod != 0.0) acc.add(prod);
  }
  return acc.value() / double(M);
}

TauConfig make_tau_config(const Params& p, int m, double A, double C) {
  const u64 cap = u64(1) << (p.k - 1);
  if (m < 2 || u64(m) > cap)
    throw config_error("tuple size outside [2, 2^(k-1)]");
  if (!(A > 0.0)) throw config_error("tau prefactor must be positive");
  if (!(C >= 0.0)) throw config_error("tau exponent must be nonnegative");
  if (p.N < 3) throw config_error("tau weights need N >= 3");
  TauConfig cfg;
  cfg.m = m;
  cfg.A = A;
  cfg.C = C;
  cfg.tau_zero_value = tau_zero(p, cfg);
  return cfg;
}

double tau_weight(i64 n, const TauConfig& cfg, const FactorTable& table) {
  if (n == 0) throw std::domain_error("tau weight is undefined at 0");
  u64 a = n < 0 ? ~u64(n) + 1 : u64(n);  // |n|, safe at INT64_MIN
  if (a > table.limit)
    throw config_error("tau argument beyond the factor table");
  thread_local std::vector<u64> ps;
  table.distinct_primes(a, ps);
  double w = cfg.A;
  for (u64 pf : ps)
    w *= std::pow(1.0 + 1.0 / std::sqrt(double(pf)), cfg.C);
  return w;
}

double tau_zero(const Params& p, const TauConfig& cfg) {
  if (p.N < 3) throw config_error("tau weights need N >= 3");
  double ln_n = std::log(double(p.N));
  return std::exp(cfg.C * double(cfg.m) * ln_n / std::log(ln_n));
}

double tau_moment(double q, const TauConfig& cfg, u64 limit,
                  const FactorTable& table) {
  if (limit == 0) throw config_error("moment limit must be positive");
  if (limit > table.limit)
    throw config_error("moment limit beyond the factor table");
  KahanAcc acc;
  for (u64 n = 1; n <= limit; ++n)
    acc.add(std::pow(tau_weight(i64(n), cfg, table), q));
  return acc.value() / double(limit);
}

TauConfig calibrate_tau(const WindowFn& wf, TauConfig cfg, int tuples, u64 seed,
                        const FactorTable& table) {
  check_window(wf);
  if (tuples < 1) throw config_error("need at least one calibration tuple");
  const u64 M = wf.params.M;
  if (u64(cfg.m) * 2 >= M) throw config_error("tuple size too close to M");
  if (table.limit < M - 1)
    throw config_error("factor table must cover all shift differences");

  TauConfig base = cfg;
  base.A = 1.0;
  Rng rng(seed);
  std::vector<u64> hs;
  double max_ratio = 0.0;
  for (int s = 0; s < tuples; ++s) {
    hs.clear();
    while (hs.size() < size_t(cfg.m)) {
      u64 h = rng.below(M);
      if (std::find(hs.begin(), hs.end(), h) == hs.end()) hs.push_back(h);
    }
    double lhs = correlation_lhs(wf, hs);
    KahanAcc bound;
    for (size_t i = 0; i < hs.size(); ++i)
      for (size_t j = i + 1; j < hs.size(); ++j)
        bound.add(tau_weight(i64(hs[i]) - i64(hs[j]), base, table));
    max_ratio = std::max(max_ratio, lhs / bound.value());
  }
  // smallest power of two A >= 1 with max_ratio <= A
  double A = 1.0;
  if (max_ratio > 1.0) A = std::exp2(std::ceil(std::log2(max_ratio)));
  cfg.A = A;
  return cfg;
}

CorrelationResult correlation_check(const WindowFn& wf, const TauConfig& cfg,
                                    int shift_samples, u64 seed,
                                    const FactorTable& table) {
  check_window(wf);
  if (shift_samples < 1) throw config_error("need at least one tuple");
  const u64 M = wf.params.M;
  const int m = cfg.m;
  const u64 cap = u64(1) << (wf.params.k - 1);
  if (m < 2 || u64(m) > cap)
    throw config_error("tuple size outside [2, 2^(k-1)]");
  if (u64(m) * 2 >= M) throw config_error("tuple size too close to M");
  if (table.limit < M - 1)
    throw config_error("factor table must cover all shift differences");

  CorrelationResult res;
  res.cfg = cfg;
  res.sup_nu = *std::max_element(wf.values.begin(), wf.values.end());
  const double sup_pow_m = std::pow(res.sup_nu, double(m));

  Rng rng(seed);
  auto draw_distinct = [&](size_t count, std::vector<u64>& out) {
    while (out.size() < count) {
      u64 h = rng.below(M);
      if (std::find(out.begin(), out.end(), h) == out.end()) out.push_back(h);
    }
  };

  res.tuples.reserve(size_t(shift_samples));
  for (int s = 0; s < shift_samples; ++s) {
    CorrelationTuple tup;
    if (s % 10 == 0) {
      tup.shifts.assign(size_t(m), rng.below(M));  // fully constant tuple
    } else if (s % 10 == 5) {
      draw_distinct(size_t(m) - 1, tup.shifts);  // one deliberate repeat
      tup.shifts.push_back(tup.shifts.front());
    } else {
      draw_distinct(size_t(m), tup.shifts);
    }
    tup.lhs = correlation_lhs(wf, tup.shifts);
    KahanAcc bound;
    bool repeat = false;
    for (size_t i = 0; i < tup.shifts.size(); ++i) {
      for (size_t j = i + 1; j < tup.shifts.size(); ++j) {
        if (tup.shifts[i] == tup.shifts[j]) {
          bound.add(cfg.tau_zero_value);
          repeat = true;
        } else {
          bound.add(tau_weight(i64(tup.shifts[i]) - i64(tup.shifts[j]), cfg,
                               table));
        }
      }
    }
    tup.bound = bound.value();
    tup.has_repeat = repeat;
    tup.repeat_alt_bound =
        repeat ? std::min(sup_pow_m, cfg.tau_zero_value) : 0.0;
    tup.ratio = tup.lhs / tup.bound;
    res.max_ratio = std::max(res.max_ratio, tup.ratio);
    res.tuples.push_back(std::move(tup));
  }
  res.bounded = res.max_ratio <= 1.0;
  return res;
}

}  // namespace aplab
