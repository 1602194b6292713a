#include "aplab/report.hpp"

#include "json.hpp"

namespace aplab {

namespace {

using nlohmann::json;

json params_json(const Params& p) {
  json j;
  j["N"] = p.N;
  j["M"] = p.M;
  j["k"] = p.k;
  j["w"] = p.w;
  j["W"] = p.W;
  j["phi_W"] = p.phi_W;
  j["mode"] = mode_name(p.mode);
  j["eps"] = p.eps;
  j["r_exponent"] = p.r_exponent;
  j["R"] = p.R;
  j["support_lo"] = p.support_lo;
  j["support_hi"] = p.support_hi;
  j["degenerate_support"] = p.degenerate_support;
  return j;
}

json check_json(const CheckRecord& c) {
  json j;
  j["name"] = c.name;
  j["value"] = c.value;
  if (c.std_error) j["std_error"] = *c.std_error;
  if (c.tolerance) j["tolerance"] = *c.tolerance;
  j["verdict"] = c.verdict;
  j["notes"] = c.notes;
  return j;
}

json body_json(const Report& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["command"] = r.command;
  j["seed"] = r.seed;
  if (r.params) j["params"] = params_json(*r.params);
  json checks = json::array();
  for (const CheckRecord& c : r.checks) checks.push_back(check_json(c));
  j["checks"] = std::move(checks);
  return j;
}

}  // namespace

bool Report::any_hard_fail() const {
  for (const CheckRecord& c : checks)
    if (c.verdict == "fail") return true;
  return false;
}

std::string report_body_json(const Report& r) { return body_json(r).dump(2); }

std::string render_report(const Report& r) {
  json env;
  env["body"] = body_json(r);
  env["wall_time_s"] = r.wall_time_s;
  return env.dump(2);
}

int exit_code_for(const Report& r) { return r.any_hard_fail() ? 2 : 0; }

}  // namespace aplab
