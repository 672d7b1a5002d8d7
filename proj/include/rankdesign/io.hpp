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

#ifndef RANKDESIGN_IO_HPP_
#define RANKDESIGN_IO_HPP_

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rankdesign/groups.hpp"
#include "rankdesign/multidim.hpp"
#include "rankdesign/oracle.hpp"
#include "rankdesign/policy.hpp"
#include "rankdesign/welfare.hpp"

namespace rankdesign {

using json = nlohmann::json;

// Malformed or missing configuration; the message names the offending field.
class ConfigError : public SpecError {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : SpecError(field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Shortest round-trip representation, '.' decimal separator.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace io {

inline std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline const json& require(const json& obj, const std::string& path, std::string_view key) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) throw ConfigError(join(path, key), "missing required field");
  return *it;
}

inline double number(const json& obj, const std::string& path, std::string_view key) {
  const auto& v = require(obj, path, key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  return v.get<double>();
}

inline double number_or(const json& obj, const std::string& path, std::string_view key, double fallback) {
  return obj.contains(std::string(key)) ? number(obj, path, key) : fallback;
}

inline std::size_t count(const json& obj, const std::string& path, std::string_view key) {
  const auto& v = require(obj, path, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError(join(path, key), "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

inline std::size_t count_or(const json& obj, const std::string& path, std::string_view key,
                            std::size_t fallback) {
  return obj.contains(std::string(key)) ? count(obj, path, key) : fallback;
}

inline std::vector<double> numbers(const json& obj, const std::string& path, std::string_view key) {
  const auto& v = require(obj, path, key);
  const auto where = join(path, key);
  if (!v.is_array()) throw ConfigError(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(where + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

// Re-raises a specification error under the name of the field it came from.
template <class Fn>
auto scoped(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const SpecError& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace io

inline FunctionSpec parse_function(const json& j, const std::string& path, Role role) {
  const auto& fam = io::require(j, path, "family");
  if (!fam.is_string()) throw ConfigError(io::join(path, "family"), "expected a string");
  const auto family = fam.get<std::string>();
  return io::scoped(path, [&] {
    if (family == "power") {
      return FunctionSpec::power(io::number(j, path, "scale"), io::number(j, path, "exponent"), role);
    }
    if (family == "affine_power") {
      return FunctionSpec::affine_power(io::number(j, path, "scale"), io::number(j, path, "exponent"),
                                        io::number(j, path, "offset"), role);
    }
    if (family == "piecewise") {
      const auto& knots = io::require(j, path, "knots");
      const auto where = io::join(path, "knots");
      if (!knots.is_array()) throw ConfigError(where, "expected an array of [x, y] pairs");
      std::vector<std::pair<double, double>> pts;
      for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto& k = knots[i];
        if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
          throw ConfigError(where + "[" + std::to_string(i) + "]", "expected [x, y]");
        }
        pts.emplace_back(k[0].get<double>(), k[1].get<double>());
      }
      return FunctionSpec::piecewise(std::move(pts), role);
    }
    throw ConfigError(io::join(path, "family"), "unknown family '" + family + "'");
  });
}

inline PopulationSpec parse_population(const json& j, const std::string& path = "population") {
  auto f = parse_function(io::require(j, path, "f"), io::join(path, "f"), Role::SkillQuantile);
  auto g = parse_function(io::require(j, path, "g"), io::join(path, "g"), Role::EffortTransfer);
  auto p = parse_function(io::require(j, path, "p"), io::join(path, "p"), Role::CostFunction);
  const double e0 = io::number_or(j, path, "e0", 0.0);
  return io::scoped(path, [&] { return PopulationSpec(std::move(f), std::move(g), std::move(p), e0); });
}

// Either {"levels", "cutpoints", "capacity"} or {"two_level": {"c", "capacity"}}.
inline RewardPolicy parse_policy(const json& j, const std::string& path = "policy") {
  if (j.is_object() && j.contains("two_level")) {
    const auto sub = io::join(path, "two_level");
    const auto& t = j.at("two_level");
    const double c = io::number(t, sub, "c");
    const double rho = io::number(t, sub, "capacity");
    return io::scoped(sub, [&] { return two_level(c, rho); });
  }
  RewardPolicy policy{io::numbers(j, path, "levels"), io::numbers(j, path, "cutpoints"),
                      io::number(j, path, "capacity")};
  io::scoped(path, [&] { require_valid(policy); });
  return policy;
}

inline GroupSpec parse_groups(const json& j, const std::string& path = "groups") {
  GroupSpec g{io::number(j, path, "gamma_a"), io::number(j, path, "gamma_b"),
              io::number_or(j, path, "share", GroupSpec::kEqualShare)};
  io::scoped(path, [&] { g.validate(); });
  return g;
}

inline json function_to_json(const FunctionSpec& f) {
  return std::visit(
      [](const auto& fam) -> json {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, Power>) {
          return {{"family", "power"}, {"scale", fam.scale}, {"exponent", fam.exponent}};
        } else if constexpr (std::is_same_v<T, AffinePower>) {
          return {{"family", "affine_power"}, {"scale", fam.scale}, {"exponent", fam.exponent},
                  {"offset", fam.offset}};
        } else {
          json knots = json::array();
          for (const auto& [x, y] : fam.knots) knots.push_back({x, y});
          return {{"family", "piecewise"}, {"knots", knots}};
        }
      },
      f.family());
}

inline json policy_to_json(const RewardPolicy& p) {
  return {{"levels", p.levels}, {"cutpoints", p.cutpoints}, {"capacity", p.capacity}};
}

inline json to_json(const WelfareReport& r) {
  return {{"applicant_welfare", r.applicant_welfare},
          {"societal_utility", r.societal_utility},
          {"private_utility", r.private_utility},
          {"per_band_effort_cost", r.per_band_effort_cost},
          {"quadrature_error_estimate", r.quadrature_error_estimate}};
}

inline json to_json(const Certification& c) {
  return {{"certified", c.certified},
          {"worst_gain", c.worst_gain},
          {"worst_agent", c.worst_agent},
          {"per_band_max_gain", c.per_band_max_gain}};
}

inline json to_json(const AuditRow& r) {
  return {{"c", r.c},
          {"tau_A", r.thresholds.tau_a},
          {"tau_B", r.thresholds.tau_b},
          {"access", r.access},
          {"gap_at_q25", r.gap_q25},
          {"gap_at_q50", r.gap_q50},
          {"gap_at_q75", r.gap_q75}};
}

// Minimal CSV table: header fixed at construction, numeric cells.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : width_(header.size()) { line(header); }

  CsvTable& row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("csv row width mismatch");
    line(cells);
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  std::size_t width_;
  std::ostringstream out_;
};

inline std::string num(double x) { return format_number(x); }
inline std::string num(std::size_t x) { return std::to_string(x); }

struct ScheduleSample {
  double theta;
  std::size_t band;
  double effort;
  double score;
};

inline std::string schedule_csv(const std::vector<ScheduleSample>& rows) {
  CsvTable t({"theta", "band", "effort", "score"});
  for (const auto& r : rows) t.row({num(r.theta), num(r.band), num(r.effort), num(r.score)});
  return t.str();
}

// The error column appears only when some row failed.
inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  bool any_error = false;
  for (const auto& r : rows) any_error = any_error || !r.error.empty();
  std::vector<std::string> header{"c", "level1", "applicant_welfare", "societal_utility", "private_utility"};
  if (any_error) header.emplace_back("error");
  CsvTable t(header);
  for (const auto& r : rows) {
    std::vector<std::string> cells;
    if (r.error.empty()) {
      cells = {num(r.c), num(r.level1), num(r.report.applicant_welfare), num(r.report.societal_utility),
               num(r.report.private_utility)};
    } else {
      cells = {num(r.c), num(r.level1), "", "", ""};
    }
    if (any_error) {
      std::string e = r.error;
      for (auto& ch : e) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
      cells.push_back(e);
    }
    t.row(cells);
  }
  return t.str();
}

inline std::string profile_csv(const std::vector<std::pair<double, double>>& profile) {
  CsvTable t({"c", "value"});
  for (const auto& [c, v] : profile) t.row({num(c), num(v)});
  return t.str();
}

inline std::string audit_csv(const std::vector<AuditRow>& rows) {
  CsvTable t({"c", "tau_A", "tau_B", "access", "gap_at_q25", "gap_at_q50", "gap_at_q75"});
  for (const auto& r : rows) {
    t.row({num(r.c), num(r.thresholds.tau_a), num(r.thresholds.tau_b), num(r.access), num(r.gap_q25),
           num(r.gap_q50), num(r.gap_q75)});
  }
  return t.str();
}

inline std::string instance_csv(const std::vector<AgentOutcome>& rows) {
  CsvTable t({"agent", "rank", "effort", "score", "band", "welfare"});
  for (const auto& r : rows) {
    t.row({num(r.agent), num(r.rank), num(r.effort), num(r.score), num(r.band), num(r.welfare)});
  }
  return t.str();
}

inline std::string multidim_csv(const std::vector<MultidimRow>& rows) {
  CsvTable t({"agent", "v_pre", "reward_band", "violation_flag"});
  for (const auto& r : rows) {
    t.row({num(r.agent), num(r.v_pre), num(r.reward_band), r.violation ? "1" : "0"});
  }
  return t.str();
}

}  // namespace rankdesign

#endif  // RANKDESIGN_IO_HPP_
