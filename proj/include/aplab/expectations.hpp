#pragma once

// Empirical checks of the two pseudorandomness conditions the majorant is
// supposed to satisfy:
//
//   * linear forms: E(nu(psi_1(x)) ... nu(psi_m(x))) over x in Z_M^t stays
//     near 1 for bounded families of affine-linear forms with rational
//     coefficients, none zero and no two rationally proportional;
//   * correlation: E(nu(x+h_1) ... nu(x+h_m)) is dominated by
//     sum_{i<j} tau(h_i - h_j) for a weight tau with bounded moments.
//
// Plus the Goldston-Yildirim product ratio: the mean of prod L_R(W psi_i + 1)^2
// over an integer box, normalized by (W ln R / phi(W))^m, which the asymptotic
// theory sends to 1. Desk-scale boxes are far below the R^(10m) hypothesis;
// that is reported as a warning, never hidden.
//
// Every estimator is deterministic given (inputs, seed): draws come from
// mt19937_64 in a fixed order and accumulation order never varies.

#include <functional>
#include <vector>

#include "aplab/common.hpp"
#include "aplab/measures.hpp"

namespace aplab {

struct Rational {
  i64 num = 0;
  i64 den = 1;
};

// m affine-linear forms in t variables over Z_M: psi_i(x) = sum_j L_ij x_j + b_i.
// Coefficients are kept as exact rationals for the proportionality test and
// embedded into Z_M (num * den^-1 mod M) for evaluation.
struct LinearFormSystem {
  int m = 0, t = 0;
  u64 M = 0;
  std::vector<Rational> coeffs;  // row-major, m*t entries
  std::vector<u64> offsets;      // m entries, reduced mod M
  std::vector<u64> embedded;     // row-major, m*t entries in [0, M)
  i64 coeff_bound = 0;           // max(|num|, den) over all entries

  const Rational& coeff(int i, int j) const { return coeffs[i * t + j]; }
};

LinearFormSystem make_form_system(int m, int t, u64 M,
                                  const std::vector<Rational>& coeffs,
                                  const std::vector<i64>& offsets);

// The k-term AP family psi_i(x, r) = x + (i-1) r, i = 1..k.
LinearFormSystem ap_form_system(int k, u64 M);

struct FormLevel {
  u64 m0 = 0;
  u64 t0 = 0;
  i64 L0 = 0;
};

// The level the majorant is tested at: (k 2^(k-1), 3k-4, k).
FormLevel ap_level(int k);

struct FormCheck {
  bool ok = true;
  std::string violation;  // empty when ok
};

// Structural admissibility of a system at a level: size bounds, coefficient
// bounds, no zero tuple, no two tuples rationally proportional (exact
// cross-multiplication in 128-bit).
FormCheck validate_form_system(const LinearFormSystem& sys, const FormLevel& level);

double mean(const WindowFn& wf);

// Mean of wf over representatives n with pred(n) true; domain_error if none.
double conditional_mean(const WindowFn& wf,
                        const std::function<bool(u64)>& pred);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  u64 samples = 0;
  u64 seed = 0;
  bool exhaustive = false;
};

// E(prod_i wf(psi_i(x))) over x in Z_M^t, exactly (iterating the whole box).
// Guarded to M^t <= 1e8 evaluations.
Estimate lf_expectation_exact(const WindowFn& wf, const LinearFormSystem& sys);

// Monte-Carlo estimate with `samples` uniform draws from Z_M^t.
Estimate lf_expectation_sampled(const WindowFn& wf, const LinearFormSystem& sys,
                                u64 samples, u64 seed);

// Exhaustive when M^t <= 1e7, sampled otherwise.
Estimate lf_expectation(const WindowFn& wf, const LinearFormSystem& sys,
                        u64 samples, u64 seed);

// Integer-coefficient forms evaluated over an integer box (no reduction).
struct IntegerForm {
  std::vector<i64> coeffs;
  i64 offset = 0;
};

struct GyResult {
  Estimate ratio;        // mean / (W ln R / phi(W))^m
  double raw_mean = 0.0;
  double target = 0.0;   // (W ln R / phi(W))^m
  bool box_hypothesis_met = false;  // every side >= R^(10m)
  double min_side = 0.0;
  double required_side = 0.0;       // R^(10m)
};

// Mean of prod_i L_R(W psi_i(x) + 1)^2 over integer points of the box
// (inclusive per-coordinate intervals), normalized. Integer coefficients are
// gated at |L| <= sqrt(w)/2; intervals must lie inside [N, N+M). Exhaustive
// when the box has at most 1e7 points, else Monte-Carlo.
GyResult gy_product_ratio(const Params& p, const std::vector<IntegerForm>& forms,
                          const std::vector<std::pair<u64, u64>>& box,
                          const FactorTable& table, u64 samples, u64 seed);

// Exact cyclic mean over x in Z_M of prod_i wf(x + h_i). Requires
// 2 <= |shifts| <= 2^(k-1); repeats allowed.
double correlation_lhs(const WindowFn& wf, std::span<const u64> shifts);

struct TauConfig {
  int m = 2;
  double A = 1.0;
  double C = 1.0;
  double tau_zero_value = 0.0;  // exp(C m ln N / ln ln N), precomputed
};

TauConfig make_tau_config(const Params& p, int m, double A, double C);

// A * prod over distinct primes p | n of (1 + p^-1/2)^C; n must be nonzero.
double tau_weight(i64 n, const TauConfig& cfg, const FactorTable& table);

// The n = 0 weight exp(C m ln N / ln ln N).
double tau_zero(const Params& p, const TauConfig& cfg);

// Mean of tau(n)^q over 0 < |n| <= limit (tau is even, so this is the mean
// over 1..limit). Requires limit <= table.limit.
double tau_moment(double q, const TauConfig& cfg, u64 limit,
                  const FactorTable& table);

// Smallest power-of-two prefactor A >= 1 making every sampled distinct-shift
// correlation ratio at most 1.
TauConfig calibrate_tau(const WindowFn& wf, TauConfig cfg, int tuples, u64 seed,
                        const FactorTable& table);

struct CorrelationTuple {
  std::vector<u64> shifts;
  double lhs = 0.0;
  double bound = 0.0;  // sum_{i<j} tau(h_i - h_j), tau_zero for equal pairs
  double ratio = 0.0;
  bool has_repeat = false;
  double repeat_alt_bound = 0.0;  // min(sup_nu^m, tau_zero); 0 unless repeat
};

struct CorrelationResult {
  TauConfig cfg;
  std::vector<CorrelationTuple> tuples;
  double max_ratio = 0.0;
  double sup_nu = 0.0;
  bool bounded = false;  // max_ratio <= 1
};

// Samples shift tuples (roughly one in five with a deliberately repeated
// shift, one in ten fully constant) and compares the exact cyclic mean
// against the tau bound.
CorrelationResult correlation_check(const WindowFn& wf, const TauConfig& cfg,
                                    int shift_samples, u64 seed,
                                    const FactorTable& table);

}  // namespace aplab
