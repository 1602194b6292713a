#pragma once

// Window measures on Z_M, identified with the representatives {N, ..., N+M-1}
// (index i <-> n = N+i).
//
//   * the W-tricked prime density: phi(W)/W * ln(Wn+1) at n with Wn+1 prime,
//     scaled by 1/(k*2^(k+5)) and restricted to the support band
//     N + eps*M <= n <= N + 2*eps*M;
//   * the truncated divisor sum L_R(n) = sum_{d | n, d <= R} mu(d) ln(R/d),
//     both pointwise and as a batched sieve over a window;
//   * the majorant nu(n) = phi(W)/W * L_R(Wn+1)^2 / ln R on the support band,
//     1 elsewhere.
//
// "literal" mode derives eps and the R exponent from k alone (eps =
// 1/(2^k (k+4)!), R = M^(1/(k 2^(k+4)))), which is intentionally degenerate at
// desk scale; "exploratory" mode takes user-set eps < 1/4 and R exponent < 1/4.

#include <iosfwd>
#include <optional>
#include <vector>

#include "aplab/common.hpp"
#include "aplab/sieve.hpp"

namespace aplab {

enum class Mode { literal, exploratory };

const char* mode_name(Mode m);

struct RawParams {
  u64 N = 0;
  u64 M = 0;
  int k = 3;
  int w = 5;
  Mode mode = Mode::exploratory;
  std::optional<double> eps;
  std::optional<double> r_exponent;
};

struct Params {
  u64 N = 0, M = 0;
  int k = 3, w = 5;
  u64 W = 0, phi_W = 0;
  double eps = 0.0;
  u64 support_lo = 1, support_hi = 0;  // inclusive; hi < lo means empty
  double r_exponent = 0.0;
  double R = 0.0;
  Mode mode = Mode::exploratory;
  bool degenerate_support = false;  // support narrower than 2 points

  bool support_empty() const { return support_hi < support_lo; }
  u64 support_size() const {
    return support_empty() ? 0 : support_hi - support_lo + 1;
  }
  bool in_support(u64 n) const {
    return !support_empty() && n >= support_lo && n <= support_hi;
  }
  // "key=value key=value ..." dump, shared by CSV headers and reports
  std::string key_value_summary() const;
};

// eps_k = 1 / (2^k (k+4)!) and the literal R exponent 1 / (k 2^(k+4)).
double literal_eps(int k);
double literal_r_exponent(int k);

// Validates and completes a raw configuration. Throws config_error on
// composite M, M > N, k outside [3,24], w outside [2,50], u64 overflow of
// W*(N+M)+1, out-of-range eps / r_exponent, or mode/knob mismatches.
// A support band with fewer than 2 points only sets degenerate_support.
Params resolve_params(const RawParams& raw);

// A measure sampled over the whole window: values[i] = fn(N + i).
struct WindowFn {
  Params params;
  std::vector<double> values;

  double at_index(u64 i) const { return values[i]; }
};

// phi(W)/W * ln(Wn+1) if Wn+1 is prime, else 0. The primality window must
// cover Wn+1 and n must lie in [N, N+M).
double w_tricked_von_mangoldt(u64 n, const Params& p, const PrimeWindow& primality);

// The scaled density k^-1 2^-(k+5) * w_tricked_von_mangoldt on the support
// band, 0 elsewhere. primality must cover W*support_lo+1 .. W*support_hi+1.
WindowFn density_window(const Params& p, const PrimeWindow& primality);

// Truncated divisor sum at a single point, by enumerating squarefree products
// of the distinct prime factors of n that are <= R (larger primes cannot
// appear in any divisor <= R). For n beyond the table, trial division by the
// table's primes is used; requires table.limit >= R or table.limit^2 >= n.
double lambda_r_direct(u64 n, double R, const FactorTable& table);

// Batched kernel: out[j] = L_R(W*(n_lo+j)+1) for the inclusive range
// [n_lo, n_hi]. Walks residue classes n = -W^-1 (mod d) for every squarefree
// d <= R coprime to W instead of factoring each point. Requires
// table.limit >= R. Cost ~ (range) * sum 1/d + (number of d) * log.
void lambda_r_sieve_range(u64 W, double R, u64 n_lo, u64 n_hi,
                          const FactorTable& table, std::span<double> out);

// Full-window batched L_R(W n + 1).
WindowFn lambda_r_window(const Params& p, const FactorTable& table);

// The majorant: phi(W)/W * L_R(Wn+1)^2 / ln R on the support band, 1 off it.
// Throws config_error when R <= 1 (ln R would not be positive).
WindowFn nu_window(const Params& p, const FactorTable& table);

// Convenience: primality flags for W*support_lo+1 .. W*support_hi+1 (the
// range density_window consults). Empty support gives an empty window.
PrimeWindow support_primality(const Params& p, const FactorTable& base);

// CSV dump: "# params: <key=value list>" comment, "n,value" header, then one
// row per window index with full double round-trip precision.
void dump_window_csv(const WindowFn& wf, std::ostream& os);

}  // namespace aplab
