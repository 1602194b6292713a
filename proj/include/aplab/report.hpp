#pragma once

// Structured experiment records. A Report is one run's self-describing
// output: the resolved parameters, the seed, and a flat list of named checks.
//
// Verdict vocabulary:
//   pass / fail   exact or oracle-backed invariants; a fail drives exit code 2
//   soft-pass / soft-fail
//                 asymptotic trend checks; recorded, never fatal
//   warn          a recorded caveat (violated hypothesis, degenerate support)
//   info          measurement with no judgment attached
//
// Serialization is split so the body (everything except wall time) is
// byte-stable for fixed inputs and seed.

#include <optional>
#include <string>
#include <vector>

#include "aplab/common.hpp"
#include "aplab/measures.hpp"

namespace aplab {

struct CheckRecord {
  std::string name;
  double value = 0.0;
  std::optional<double> std_error;
  std::optional<double> tolerance;
  std::string verdict;
  std::string notes;
};

struct Report {
  int schema_version = 1;
  std::string command;
  std::optional<Params> params;
  u64 seed = 0;
  std::vector<CheckRecord> checks;
  double wall_time_s = 0.0;  // excluded from the deterministic body

  bool any_hard_fail() const;
};

// The deterministic body alone, as indented JSON with sorted keys.
std::string report_body_json(const Report& r);

// Full envelope {"body": <body>, "wall_time_s": <t>}.
std::string render_report(const Report& r);

// 2 if any hard check failed, else 0. Configuration errors never reach a
// Report; the CLI maps them to exit 1.
int exit_code_for(const Report& r);

}  // namespace aplab
