#pragma once

// Command-line front end. Commands:
//
//   params       resolve a configuration and report it (degenerate-support
//                bands are flagged as a warning, not an error)
//   sieve        dump a window function (window=f|nu|lambda) as CSV
//   nu-mean      mean of the majorant over Z_M against the asymptotic
//                target 1, plus exact support-discipline invariants
//   lf-check     linear-forms battery for the k-term progression system:
//                admissibility, the constant-1 control, and the majorant
//   gy-check     normalized divisor-sum product moment over a box
//                (m=1: psi(x)=x; m=2: psi=(x, x+r)), box = support band
//   corr-check   correlation bound with tau calibration (samples = tuples;
//                explicit tau_A skips calibration)
//   tau-moments  E(tau^q) for q in {1,2,4} over 0 < |n| <= M
//   ap-count     exact k-term progression expectation and integer-AP
//                accounting for the prime density window (support=band|full)
//   full-suite   fixed self-contained battery over small instances; byte-
//                stable report body for a fixed seed
//
// Options are bare key=value tokens after the command; config=FILE loads the
// same syntax from a file (one pair per line, # comments), with command-line
// values taking precedence. Unknown keys are rejected.
//
// Exit codes: 0 all hard checks pass, 2 some hard check failed, 1 bad
// configuration.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aplab/measures.hpp"
#include "aplab/report.hpp"

namespace aplab {

struct RunConfig {
  std::string command;
  RawParams raw;  // N/M filled with defaults at resolve time if unset
  bool n_set = false;
  bool m_set = false;
  std::optional<u64> samples;  // per-command defaults when unset
  u64 seed = 42;
  std::optional<double> tau_A;  // unset means calibrate
  double tau_C = 1.0;
  std::optional<int> m;  // gy-check form count / correlation tuple size
  std::string window = "nu";    // sieve
  std::string support = "band";  // ap-count
  std::string output;            // empty = stdout
};

// args excludes the program name; the first element is the command.
RunConfig parse_config(const std::vector<std::string>& args);

// Executes the command, writing the report (or CSV) to `out` or to the
// configured output file. Returns the process exit code; configuration
// errors are printed to `err` and map to 1.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace aplab
