/*
 * Copyright 2026 The rankdesign Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RANKDESIGN_TOOLS_COMMANDS_HPP_
#define RANKDESIGN_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rankdesign/io.hpp"
#include "rankdesign/rankdesign.hpp"

namespace rankdesign::cli {

enum ExitCode : int { kOk = 0, kConfig = 2, kNumerical = 3, kNotCertified = 4 };

// Flag values; unset fields fall back to the config document, then defaults.
struct Options {
  std::optional<std::string> config_path;
  std::optional<json> config;  // takes the place of a file, mainly for tests
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> grid;
  // command specific
  std::optional<std::string> objective;
  std::optional<std::size_t> agents;
  std::optional<double> effort_step;
  std::optional<double> epsilon;
  std::optional<std::size_t> max_rounds;
};

struct Result {
  Result() = default;
  Result(int code, std::string out, std::string diag)
      : exit_code(code), output(std::move(out)), diagnostics(std::move(diag)) {}

  int exit_code = kOk;
  std::string output;       // payload (also written to --output when given)
  std::string diagnostics;  // human-readable messages for stderr
  std::optional<std::string> written_to;
};

namespace detail {

inline json load_config(const Options& opt) {
  if (opt.config) return *opt.config;
  if (!opt.config_path) return json::object();
  std::ifstream in(*opt.config_path);
  if (!in) throw ConfigError("--config", "cannot open '" + *opt.config_path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("malformed JSON: ") + e.what());
  }
}

inline const json* section(const json& cfg, const char* key) {
  const auto it = cfg.find(key);
  return it == cfg.end() ? nullptr : &*it;
}

inline std::string format_of(const Options& opt, const json& cfg, const std::string& fallback) {
  std::string fmt = fallback;
  if (const auto* out = section(cfg, "output"); out && out->contains("format")) {
    if (!(*out)["format"].is_string()) throw ConfigError("output.format", "expected a string");
    fmt = (*out)["format"].get<std::string>();
  }
  if (opt.format) fmt = *opt.format;
  if (fmt != "csv" && fmt != "json") throw ConfigError("--format", "expected csv or json, got '" + fmt + "'");
  return fmt;
}

inline std::optional<std::string> output_path(const Options& opt, const json& cfg) {
  if (opt.output) return opt.output;
  if (const auto* out = section(cfg, "output"); out && out->contains("path")) {
    if (!(*out)["path"].is_string()) throw ConfigError("output.path", "expected a string");
    return (*out)["path"].get<std::string>();
  }
  return std::nullopt;
}

inline std::size_t workers_of(const Options& opt, const json& cfg) {
  if (opt.workers) return std::max<std::size_t>(1, *opt.workers);
  if (cfg.contains("workers")) return std::max<std::size_t>(1, io::count(cfg, "", "workers"));
  return default_workers();
}

inline std::uint64_t seed_of(const Options& opt, const json& cfg) {
  if (opt.seed) return *opt.seed;
  if (cfg.contains("seed")) return io::count(cfg, "", "seed");
  return 0;
}

inline const json& need(const json& cfg, const char* key) { return io::require(cfg, "", key); }

inline PopulationSpec population(const json& cfg) { return parse_population(need(cfg, "population")); }
inline RewardPolicy policy(const json& cfg) { return parse_policy(need(cfg, "policy")); }

// Two-level policy read from the config: returns (c, rho).
inline std::pair<double, double> two_level_of(const RewardPolicy& p) {
  if (p.band_count() != 2 || p.levels[0] != 0.0) {
    throw ConfigError("policy", "this command needs a two-level policy");
  }
  return {p.cutpoints[0], p.capacity};
}

struct Sweep {
  std::vector<double> values;
  std::optional<double> capacity;
};

inline Sweep sweep(const json& cfg) {
  const auto& s = need(cfg, "sweep");
  const std::string path = "sweep";
  if (s.contains("parameter")) {
    const auto& p = s["parameter"];
    if (!p.is_string() || p.get<std::string>() != "c") {
      throw ConfigError("sweep.parameter", "only the cutoff 'c' can be swept");
    }
  }
  Sweep out;
  if (s.contains("values")) {
    out.values = io::numbers(s, path, "values");
  } else {
    const double from = io::number(s, path, "from");
    const double to = io::number(s, path, "to");
    const std::size_t steps = io::count(s, path, "steps");
    if (steps < 2) throw ConfigError("sweep.steps", "need at least 2 steps");
    if (!(to > from)) throw ConfigError("sweep.to", "must exceed sweep.from");
    for (std::size_t i = 0; i < steps; ++i) {
      out.values.push_back(from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1));
    }
  }
  if (s.contains("capacity")) out.capacity = io::number(s, path, "capacity");
  return out;
}

inline double sweep_capacity(const json& cfg, const Sweep& s) {
  if (s.capacity) return *s.capacity;
  if (cfg.contains("policy")) return policy(cfg).capacity;
  throw ConfigError("sweep.capacity", "missing required field");
}

}  // namespace detail

inline Result cmd_eval(const Options& opt, const json& cfg) {
  const auto pop = detail::population(cfg);
  const auto pol = detail::policy(cfg);
  const auto fmt = detail::format_of(opt, cfg, "json");
  const auto report = evaluate_welfare(solve(pop, pol));
  if (fmt == "json") return {kOk, to_json(report).dump(2) + "\n", {}};
  CsvTable t({"applicant_welfare", "societal_utility", "private_utility", "quadrature_error_estimate"});
  t.row({num(report.applicant_welfare), num(report.societal_utility), num(report.private_utility),
         num(report.quadrature_error_estimate)});
  return {kOk, t.str(), {}};
}

inline Result cmd_sweep(const Options& opt, const json& cfg) {
  const auto pop = detail::population(cfg);
  const auto s = detail::sweep(cfg);
  const double rho = detail::sweep_capacity(cfg, s);
  const auto fmt = detail::format_of(opt, cfg, "csv");
  auto values = s.values;
  std::sort(values.begin(), values.end());
  const auto rows = sweep_two_level(pop, rho, values, detail::workers_of(opt, cfg));
  std::size_t failed = 0;
  std::string diag;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      ++failed;
      diag += "c=" + num(r.c) + ": " + r.error + "\n";
    }
  }
  std::string payload;
  if (fmt == "csv") {
    payload = sweep_csv(rows);
  } else {
    json arr = json::array();
    for (const auto& r : rows) {
      json row = {{"c", r.c}, {"level1", r.level1}};
      if (r.error.empty()) {
        row.update(to_json(r.report));
      } else {
        row["error"] = r.error;
      }
      arr.push_back(row);
    }
    payload = arr.dump(2) + "\n";
  }
  const int code = (failed == rows.size() && !rows.empty()) ? kConfig : kOk;
  return {code, payload, diag};
}

inline std::vector<ScheduleSample> sample_schedule(const EquilibriumSchedule<FunctionSpec>& s,
                                                   std::size_t grid) {
  if (grid < 2) throw ConfigError("--grid", "need at least 2 grid points");
  std::vector<double> thetas;
  for (std::size_t i = 0; i < grid; ++i) thetas.push_back(static_cast<double>(i) / static_cast<double>(grid - 1));
  for (double c : s.policy().cutpoints) thetas.push_back(c);
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());
  std::vector<ScheduleSample> out;
  for (double t : thetas) out.push_back({t, s.policy().band_of(t), s.effort_at(t), s.score_at(t)});
  return out;
}

inline Result cmd_equilibrium(const Options& opt, const json& cfg) {
  const auto pop = detail::population(cfg);
  const auto pol = detail::policy(cfg);
  const auto fmt = detail::format_of(opt, cfg, "csv");
  const std::size_t grid = opt.grid ? *opt.grid : (cfg.contains("grid") ? io::count(cfg, "", "grid") : 1001);
  const auto rows = sample_schedule(solve(pop, pol), grid);
  if (fmt == "csv") return {kOk, schedule_csv(rows), {}};
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"theta", r.theta}, {"band", r.band}, {"effort", r.effort}, {"score", r.score}});
  }
  return {kOk, arr.dump(2) + "\n", {}};
}

inline Result cmd_groups(const Options& opt, const json& cfg) {
  const auto pop = detail::population(cfg);
  const auto groups = parse_groups(detail::need(cfg, "groups"));
  const auto fmt = detail::format_of(opt, cfg, "csv");
  std::vector<AuditRow> rows;
  if (cfg.contains("sweep")) {
    const auto s = detail::sweep(cfg);
    auto values = s.values;
    std::sort(values.begin(), values.end());
    rows = audit_sweep(pop, groups, detail::sweep_capacity(cfg, s), values, detail::workers_of(opt, cfg));
  } else {
    const auto [c, rho] = detail::two_level_of(detail::policy(cfg));
    rows.push_back(audit_row(pop, groups, rho, c));
  }
  if (fmt == "csv") return {kOk, audit_csv(rows), {}};
  json arr = json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  return {kOk, arr.dump(2) + "\n", {}};
}

inline Result cmd_verify(const Options& opt, const json& cfg) {
  const auto pop = detail::population(cfg);
  const auto pol = detail::policy(cfg);
  const auto fmt = detail::format_of(opt, cfg, "json");
  static const json empty = json::object();
  const json& v = cfg.contains("verify") ? cfg["verify"] : empty;
  const std::size_t n = opt.agents ? *opt.agents : io::count_or(v, "verify", "agents", 500);
  if (n < 1) throw ConfigError("verify.agents", "need at least one agent");
  const double step = opt.effort_step ? *opt.effort_step : io::number_or(v, "verify", "effort_step", 1e-3);
  const double eps = opt.epsilon ? *opt.epsilon : io::number_or(v, "verify", "epsilon", 5.0 / static_cast<double>(n));
  if (!(eps >= 0.0)) throw ConfigError("verify.epsilon", "must be non-negative");
  RankSampling sampling = RankSampling::Midpoint;
  if (v.contains("sampling")) {
    const auto& s = v["sampling"];
    if (!s.is_string() || (s != "midpoint" && s != "monte_carlo")) {
      throw ConfigError("verify.sampling", "expected 'midpoint' or 'monte_carlo'");
    }
    if (s == "monte_carlo") sampling = RankSampling::MonteCarlo;
  }
  const auto schedule = solve(pop, pol);
  auto inst = make_instance(pop, pol, n, step, std::nullopt, sampling, detail::seed_of(opt, cfg));
  seed_from_schedule(inst, schedule);
  const auto cert = certify_equilibrium(inst, eps);
  const int code = cert.certified ? kOk : kNotCertified;
  const std::string diag = cert.certified ? "" : "not certified: worst_gain " + num(cert.worst_gain) +
                                                     " exceeds epsilon " + num(eps) + "\n";
  if (fmt == "csv") return {code, instance_csv(outcomes(inst)), diag};
  json out = to_json(cert);
  out["epsilon"] = eps;
  out["agents"] = n;
  out["effort_step"] = step;
  out["empirical_welfare"] = to_json(empirical_welfare(inst));
  return {code, out.dump(2) + "\n", diag};
}

inline Objective parse_objective(const std::string& name) {
  for (auto o : {Objective::ApplicantWelfare, Objective::SocietalUtility, Objective::PrivateUtility}) {
    if (name == to_string(o)) return o;
  }
  if (name == "welfare" || name == "applicant") return Objective::ApplicantWelfare;
  if (name == "societal") return Objective::SocietalUtility;
  if (name == "private") return Objective::PrivateUtility;
  throw ConfigError("objective", "unknown objective '" + name + "'");
}

inline Result cmd_optimize(const Options& opt, const json& cfg) {
  const auto pop = detail::population(cfg);
  const auto fmt = detail::format_of(opt, cfg, "json");
  static const json empty = json::object();
  const json& o = cfg.contains("optimize") ? cfg["optimize"] : empty;
  std::string objective = "societal_utility";
  if (o.contains("objective")) {
    if (!o["objective"].is_string()) throw ConfigError("optimize.objective", "expected a string");
    objective = o["objective"].get<std::string>();
  }
  if (opt.objective) objective = *opt.objective;
  double rho = 0.0;
  if (o.contains("capacity")) {
    rho = io::number(o, "optimize", "capacity");
  } else {
    rho = detail::policy(cfg).capacity;
  }
  const std::size_t grid = opt.grid ? *opt.grid : io::count_or(o, "optimize", "grid_points", 200);
  const auto best = optimize_two_level(pop, rho, parse_objective(objective), grid, 1e-6,
                                       detail::workers_of(opt, cfg));
  if (fmt == "csv") return {kOk, profile_csv(best.profile), {}};
  json out = {{"objective", to_string(parse_objective(objective))},
              {"capacity", rho},
              {"c", best.c},
              {"level1", TwoLevelPolicy{best.c, rho}.level1()},
              {"value", best.value}};
  return {kOk, out.dump(2) + "\n", {}};
}

inline Result cmd_multidim(const Options& opt, const json& cfg) {
  const auto fmt = detail::format_of(opt, cfg, "json");
  const auto& m = detail::need(cfg, "multidim");
  const auto pop = detail::population(cfg);
  json out = json::object();
  int code = kOk;
  std::string diag;
  std::optional<MultidimReport> report;

  if (m.contains("skills")) {
    const auto& skills = m["skills"];
    if (!skills.is_array() || skills.empty()) throw ConfigError("multidim.skills", "expected a non-empty array");
    std::vector<FunctionSpec> quantiles;
    for (std::size_t i = 0; i < skills.size(); ++i) {
      quantiles.push_back(parse_function(skills[i], "multidim.skills[" + std::to_string(i) + "]", Role::SkillQuantile));
    }
    const auto weights = io::numbers(m, "multidim", "weights");
    const double slope = io::number_or(m, "multidim", "slope", 1.0);
    const auto spec = io::scoped("multidim", [&] { return MultiSkillSpec(std::move(quantiles), weights, slope); });
    const std::size_t n = opt.agents ? *opt.agents : io::count_or(m, "multidim", "agents", 500);
    const auto pol = m.contains("policy") ? parse_policy(m["policy"], "multidim.policy") : detail::policy(cfg);
    MultidimOptions mo;
    if (opt.effort_step) mo.effort_step = *opt.effort_step;
    mo.max_rounds = opt.max_rounds ? *opt.max_rounds : io::count_or(m, "multidim", "max_rounds", 20000);
    report = check_multidim_rank_preservation(spec, n, pol, pop.p, pop.e0, detail::seed_of(opt, cfg), max_index, mo);
    out["rank_preservation"] = {{"agents", n},
                                {"violations", report->violations},
                                {"converged", report->converged},
                                {"rounds", report->rounds},
                                {"cycling_agents", report->cycling_agents}};
    if (!report->ok()) {
      code = kNotCertified;
      diag += "rank preservation failed: " + std::to_string(report->violations) + " violations, converged=" +
              (report->converged ? "true" : "false") + "\n";
    }
  }

  if (m.contains("unmeasurable")) {
    const auto& u = m["unmeasurable"];
    const std::string path = "multidim.unmeasurable";
    UnmeasurableSpec spec{pop, io::number(u, path, "budget"),
                          u.contains("capacity") ? io::number(u, path, "capacity") : detail::policy(cfg).capacity,
                          0.5};
    const double c = io::number(u, path, "c");
    const auto b = beta_for_interior_optimum(spec, c);
    spec.beta = b.beta;
    const double h = 1e-5;
    const double slope = (weighted_private_utility(spec, c + h) - weighted_private_utility(spec, c - h)) / (2 * h);
    out["unmeasurable"] = {{"c", c},
                           {"beta", b.beta},
                           {"d_measurable", b.d_measurable},
                           {"d_unmeasurable", b.d_unmeasurable},
                           {"mean_measurable", b.means.measurable},
                           {"mean_unmeasurable", b.means.unmeasurable},
                           {"weighted_utility", weighted_private_utility(spec, c)},
                           {"weighted_utility_derivative", slope},
                           {"stationary", std::abs(slope) < 1e-4}};
  }
  if (out.empty()) throw ConfigError("multidim", "expected 'skills' and/or 'unmeasurable'");
  if (fmt == "csv") {
    if (!report) throw ConfigError("--format", "csv output needs a multi-skill run (multidim.skills)");
    return {code, multidim_csv(report->rows), diag};
  }
  return {code, out.dump(2) + "\n", diag};
}

using Command = std::function<Result(const Options&, const json&)>;

inline const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"eval", cmd_eval},     {"sweep", cmd_sweep},       {"equilibrium", cmd_equilibrium},
      {"groups", cmd_groups}, {"verify", cmd_verify},     {"optimize", cmd_optimize},
      {"multidim", cmd_multidim}};
  return table;
}

// Loads the config, dispatches, maps errors to exit codes and writes the
// payload to the output path when one is set.
inline Result run(const std::string& name, const Options& opt) {
  const auto it = commands().find(name);
  if (it == commands().end()) return {kConfig, {}, "unknown command '" + name + "'\n"};
  Result result;
  try {
    const json cfg = detail::load_config(opt);
    if (!cfg.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    result = it->second(opt, cfg);
    if (const auto path = detail::output_path(opt, cfg)) {
      std::ofstream out(*path);
      if (!out) throw ConfigError("--output", "cannot write '" + *path + "'");
      out << result.output;
      result.written_to = *path;
    }
  } catch (const ConfigError& e) {
    return {kConfig, {}, std::string("config error: ") + e.what() + "\n"};
  } catch (const SpecError& e) {
    return {kConfig, {}, std::string("validation error: ") + e.what() + "\n"};
  } catch (const QuadratureError& e) {
    return {kNumerical, {}, std::string("numerical error: ") + e.what() +
                                " (partial estimate " + num(e.partial_estimate()) + ")\n"};
  } catch (const NumericalError& e) {
    return {kNumerical, {}, std::string("numerical error: ") + e.what() + "\n"};
  } catch (const json::exception& e) {
    return {kConfig, {}, std::string("config error: ") + e.what() + "\n"};
  }
  return result;
}

}  // namespace rankdesign::cli

#endif  // RANKDESIGN_TOOLS_COMMANDS_HPP_
