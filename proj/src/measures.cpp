#include "aplab/measures.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace aplab {

const char* mode_name(Mode m) {
  return m == Mode::literal ? "literal" : "exploratory";
}

namespace {

// 2^k (k+4)! as an exact integer; fits u128 comfortably for k <= 24.
u128 literal_eps_denominator(int k) {
  u128 d = u128{1} << k;
  for (int j = 2; j <= k + 4; ++j) d *= static_cast<u128>(j);
  return d;
}

u64 checked_w_times(u64 W, u64 n) {
  u128 v = static_cast<u128>(W) * n + 1;
  if (v >= (u128{1} << 63))
    throw config_error("W*n+1 exceeds the 2^63 range guard");
  return static_cast<u64>(v);
}

}  // namespace

double literal_eps(int k) {
  return 1.0 / static_cast<double>(literal_eps_denominator(k));
}

double literal_r_exponent(int k) {
  return 1.0 / (static_cast<double>(k) * std::ldexp(1.0, k + 4));
}

Params resolve_params(const RawParams& raw) {
  if (raw.k < 3 || raw.k > 24)
    throw config_error("k must lie in [3, 24]");
  if (raw.w < 2 || raw.w > 50)
    throw config_error("w must lie in [2, 50]");
  if (raw.M < 2 || !is_prime_u64(raw.M))
    throw config_error("M must be prime (got " + std::to_string(raw.M) + ")");
  if (raw.M > raw.N)
    throw config_error("M must not exceed N");

  Params p;
  p.N = raw.N;
  p.M = raw.M;
  p.k = raw.k;
  p.w = raw.w;
  p.mode = raw.mode;

  Primorial pr = primorial(raw.w);
  p.W = pr.W;
  p.phi_W = pr.phi;
  if (static_cast<u128>(p.W) * (static_cast<u128>(p.N) + p.M) + 1 >=
      (u128{1} << 63))
    throw config_error("W*(N+M)+1 overflows the 2^63 range guard");

  if (raw.mode == Mode::literal) {
    if (raw.eps || raw.r_exponent)
      throw config_error("eps / r_exponent are derived from k in literal mode");
    // Exact rational support bounds: eps = 1/D with D = 2^k (k+4)!, so
    // ceil(eps*M) = ceil(M/D) and floor(2*eps*M) = floor(2M/D) in integers.
    u128 D = literal_eps_denominator(raw.k);
    p.eps = 1.0 / static_cast<double>(D);
    p.r_exponent = literal_r_exponent(raw.k);
    u128 lo_off = (static_cast<u128>(p.M) + D - 1) / D;
    u128 hi_off = (2 * static_cast<u128>(p.M)) / D;
    p.support_lo = p.N + static_cast<u64>(lo_off);
    p.support_hi = p.N + static_cast<u64>(hi_off);
    if (hi_off < lo_off) {  // empty band; encode canonically
      p.support_lo = p.N + 1;
      p.support_hi = p.N;
    }
  } else {
    p.eps = raw.eps.value_or(0.1);
    p.r_exponent = raw.r_exponent.value_or(0.1);
    if (!(p.eps > 0.0) || !(2.0 * p.eps < 0.5))
      throw config_error("exploratory eps must satisfy 0 < 2*eps < 1/2");
    if (!(p.r_exponent > 0.0) || !(p.r_exponent < 0.25))
      throw config_error("exploratory r_exponent must lie in (0, 1/4)");
    double lo_off = std::ceil(p.eps * static_cast<double>(p.M));
    double hi_off = std::floor(2.0 * p.eps * static_cast<double>(p.M));
    p.support_lo = p.N + static_cast<u64>(lo_off);
    p.support_hi = p.N + static_cast<u64>(hi_off);
  }

  p.R = std::exp(p.r_exponent * std::log(static_cast<double>(p.M)));
  p.degenerate_support =
      p.support_empty() || p.eps * static_cast<double>(p.M) < 2.0;
  return p;
}

std::string Params::key_value_summary() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "N=%" PRIu64 " M=%" PRIu64 " k=%d w=%d W=%" PRIu64
                " phi_W=%" PRIu64 " mode=%s eps=%.17g r_exponent=%.17g"
                " R=%.17g support_lo=%" PRIu64 " support_hi=%" PRIu64,
                N, M, k, w, W, phi_W, mode_name(mode), eps, r_exponent, R,
                support_lo, support_hi);
  return buf;
}

double w_tricked_von_mangoldt(u64 n, const Params& p,
                              const PrimeWindow& primality) {
  if (n < p.N || n - p.N >= p.M)
    throw std::domain_error("w_tricked_von_mangoldt: n outside [N, N+M)");
  u64 wn1 = checked_w_times(p.W, n);
  if (!primality.covers(wn1))
    throw std::domain_error("w_tricked_von_mangoldt: primality window misses Wn+1");
  if (!primality.is_prime(wn1)) return 0.0;
  return static_cast<double>(p.phi_W) / static_cast<double>(p.W) *
         std::log(static_cast<double>(wn1));
}

WindowFn density_window(const Params& p, const PrimeWindow& primality) {
  WindowFn wf;
  wf.params = p;
  wf.values.assign(p.M, 0.0);
  if (p.support_empty()) return wf;

  if (!primality.covers(checked_w_times(p.W, p.support_lo)) ||
      !primality.covers(checked_w_times(p.W, p.support_hi)))
    throw std::domain_error("density_window: primality window misses the support");

  // k^-1 2^-(k+5)
  double scale = 1.0 / (static_cast<double>(p.k) * std::ldexp(1.0, p.k + 5));
  for (u64 n = p.support_lo; n <= p.support_hi; ++n)
    wf.values[n - p.N] = scale * w_tricked_von_mangoldt(n, p, primality);
  return wf;
}

namespace {

// Distinct prime factors of n that are <= bound, ascending. Any prime factor
// above bound is irrelevant to divisors <= bound and is left untouched.
void distinct_primes_up_to(u64 n, u64 bound, const FactorTable& t,
                           std::vector<u64>& out) {
  out.clear();
  if (n <= 1 || bound < 2) return;
  if (n <= t.limit) {
    while (n > 1) {
      u64 p = t.spf[n];
      if (p <= bound) out.push_back(p);
      while (n % p == 0) n /= p;
    }
    std::sort(out.begin(), out.end());
    return;
  }
  if (t.limit < bound && static_cast<u128>(t.limit) * t.limit < n)
    throw config_error("lambda_r: factor table too small for this n and R");
  for (u32 p32 : t.primes) {
    u64 p = p32;
    if (p > bound || p * p > n) break;
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  // Leftover cofactor: if it slipped under bound it is prime (every prime
  // below min(bound, sqrt) was divided out).
  if (n > 1 && n <= bound) out.push_back(n);
}

}  // namespace

double lambda_r_direct(u64 n, double R, const FactorTable& table) {
  if (n < 1) throw std::domain_error("lambda_r_direct: n must be >= 1");
  if (!(R > 0.0) || R >= 9.2e18)
    throw config_error("lambda_r_direct: R out of range");
  u64 rf = static_cast<u64>(std::floor(R));
  if (rf < 1) return 0.0;  // no divisor at all is <= R

  static thread_local std::vector<u64> primes;
  distinct_primes_up_to(n, rf, table, primes);

  double log_r = std::log(R);
  // Depth-first over squarefree subset products d <= R; primes ascending, so
  // a too-large product prunes the whole tail.
  double total = 0.0;
  auto rec = [&](auto&& self, std::size_t idx, u64 d, int sign) -> void {
    total += sign * (log_r - std::log(static_cast<double>(d)));
    for (std::size_t j = idx; j < primes.size(); ++j) {
      if (d > rf / primes[j]) break;
      self(self, j + 1, d * primes[j], -sign);
    }
  };
  rec(rec, 0, 1, +1);
  return total;
}

void lambda_r_sieve_range(u64 W, double R, u64 n_lo, u64 n_hi,
                          const FactorTable& table, std::span<double> out) {
  if (n_hi < n_lo) return;
  if (out.size() != n_hi - n_lo + 1)
    throw std::domain_error("lambda_r_sieve_range: output span size mismatch");
  if (!(R > 0.0) || R >= 9.2e18)
    throw config_error("lambda_r_sieve_range: R out of range");
  std::fill(out.begin(), out.end(), 0.0);
  u64 rf = static_cast<u64>(std::floor(R));
  if (rf < 1) return;
  if (table.limit < rf)
    throw config_error("lambda_r_sieve_range: table must cover primes up to R");

  // Primes eligible for squarefree moduli d: p <= R and p coprime to W
  // (d | Wn+1 forces gcd(d, W) = 1, so other primes can never contribute).
  std::vector<u64> eligible;
  for (u32 p : table.primes) {
    if (p > rf) break;
    if (W % p != 0) eligible.push_back(p);
  }

  double log_r = std::log(R);
  auto apply = [&](u64 d, int sign) {
    // n with d | Wn+1 form the class n = -W^-1 (mod d)
    u64 r = 0;
    if (d > 1) {
      u64 inv = mod_inverse(W % d, d);
      r = d - inv;
    }
    double term = sign * (log_r - std::log(static_cast<double>(d)));
    u64 rem = n_lo % d;
    u64 offset = r >= rem ? r - rem : r + d - rem;
    for (u64 n = n_lo + offset; n <= n_hi; n += d) out[n - n_lo] += term;
  };

  auto rec = [&](auto&& self, std::size_t idx, u64 d, int sign) -> void {
    apply(d, sign);
    for (std::size_t j = idx; j < eligible.size(); ++j) {
      if (d > rf / eligible[j]) break;
      self(self, j + 1, d * eligible[j], -sign);
    }
  };
  rec(rec, 0, 1, +1);
}

WindowFn lambda_r_window(const Params& p, const FactorTable& table) {
  WindowFn wf;
  wf.params = p;
  wf.values.assign(p.M, 0.0);
  checked_w_times(p.W, p.N + p.M - 1);  // range guard, same as resolve_params
  lambda_r_sieve_range(p.W, p.R, p.N, p.N + p.M - 1, table,
                       std::span<double>(wf.values));
  return wf;
}

WindowFn nu_window(const Params& p, const FactorTable& table) {
  if (!(p.R > 1.0))
    throw config_error("nu_window: R must exceed 1 (ln R must be positive)");
  WindowFn wf;
  wf.params = p;
  wf.values.assign(p.M, 1.0);
  if (p.support_empty()) return wf;

  std::vector<double> lam(p.support_size());
  lambda_r_sieve_range(p.W, p.R, p.support_lo, p.support_hi, table,
                       std::span<double>(lam));
  double phi_over_w = static_cast<double>(p.phi_W) / static_cast<double>(p.W);
  double log_r = std::log(p.R);
  for (u64 j = 0; j < lam.size(); ++j)
    wf.values[p.support_lo - p.N + j] = phi_over_w * lam[j] * lam[j] / log_r;
  return wf;
}

PrimeWindow support_primality(const Params& p, const FactorTable& base) {
  if (p.support_empty()) return PrimeWindow{};
  return primes_in_range(checked_w_times(p.W, p.support_lo),
                         checked_w_times(p.W, p.support_hi), base);
}

void dump_window_csv(const WindowFn& wf, std::ostream& os) {
  os << "# params: " << wf.params.key_value_summary() << "\n";
  os << "n,value\n";
  char buf[64];
  for (u64 i = 0; i < wf.params.M; ++i) {
    std::snprintf(buf, sizeof buf, "%" PRIu64 ",%.17g", wf.params.N + i,
                  wf.values[i]);
    os << buf << "\n";
  }
}

}  // namespace aplab
