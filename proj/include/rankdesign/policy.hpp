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

#ifndef RANKDESIGN_POLICY_HPP_
#define RANKDESIGN_POLICY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rankdesign/errors.hpp"

namespace rankdesign {

// K-level step reward: level k is paid on rank band [c_k, c_{k+1}) with
// c_0 = 0 and c_K = 1 implicit; the top band is closed at 1.
struct RewardPolicy {
  std::vector<double> levels;
  std::vector<double> cutpoints;
  double capacity = 0.0;

  std::size_t band_count() const noexcept { return levels.size(); }
  double band_lower(std::size_t k) const { return k == 0 ? 0.0 : cutpoints.at(k - 1); }
  double band_upper(std::size_t k) const { return k + 1 >= levels.size() ? 1.0 : cutpoints.at(k); }
  double band_width(std::size_t k) const { return band_upper(k) - band_lower(k); }

  std::size_t band_of(double theta) const {
    if (!(theta >= 0.0 && theta <= 1.0)) {
      throw DomainError("rank " + std::to_string(theta) + " outside [0, 1]");
    }
    return static_cast<std::size_t>(std::upper_bound(cutpoints.begin(), cutpoints.end(), theta) -
                                    cutpoints.begin());
  }

  double max_level() const { return levels.empty() ? 0.0 : levels.back(); }
  double min_level() const { return levels.empty() ? 0.0 : levels.front(); }
};

inline double reward_at(const RewardPolicy& policy, double theta) {
  return policy.levels.at(policy.band_of(theta));
}

struct Violation {
  std::string what;
  std::optional<std::size_t> index;
  double value = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }

  std::string summary() const {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v.what;
      if (v.index) out += " at index " + std::to_string(*v.index);
      out += " (value " + std::to_string(v.value) + ")";
    }
    return out;
  }
};

inline constexpr double kCapacityTolerance = 1e-12;

inline ValidationReport validate(const RewardPolicy& policy) {
  ValidationReport report;
  auto add = [&](std::string what, std::optional<std::size_t> index, double value) {
    report.violations.push_back({std::move(what), index, value});
  };
  if (policy.levels.empty()) {
    add("policy has no levels", std::nullopt, 0.0);
    return report;
  }
  if (policy.cutpoints.size() + 1 != policy.levels.size()) {
    add("cutpoint count must be level count - 1", std::nullopt,
        static_cast<double>(policy.cutpoints.size()));
    return report;
  }
  if (!(policy.capacity > 0.0 && policy.capacity < 1.0)) {
    add("capacity outside (0, 1)", std::nullopt, policy.capacity);
  }
  for (std::size_t k = 0; k < policy.levels.size(); ++k) {
    const double l = policy.levels[k];
    if (!(l >= 0.0 && l <= 1.0)) add("level outside [0, 1]", k, l);
    if (k > 0 && !(l > policy.levels[k - 1])) add("levels not increasing", k, l);
  }
  for (std::size_t k = 0; k < policy.cutpoints.size(); ++k) {
    const double c = policy.cutpoints[k];
    if (!(c > 0.0 && c < 1.0)) add("cutpoint outside (0, 1)", k, c);
    if (k > 0 && !(c > policy.cutpoints[k - 1])) add("cutpoints not increasing", k, c);
  }
  double mass = 0.0;
  for (std::size_t k = 0; k < policy.levels.size(); ++k) {
    mass += policy.levels[k] * (policy.band_upper(k) - policy.band_lower(k));
  }
  if (std::abs(mass - policy.capacity) > kCapacityTolerance) {
    add("expected reward differs from capacity", std::nullopt, mass);
  }
  return report;
}

inline void require_valid(const RewardPolicy& policy) {
  if (auto report = validate(policy); !report.ok()) {
    throw SpecError("invalid policy: " + report.summary());
  }
}

// Two-level class: reject below c, admit with probability rho / (1 - c)
// above. c = 0 collapses to pure randomization (one level, rho).
struct TwoLevelPolicy {
  double c = 0.0;
  double rho = 0.0;

  double level1() const { return std::min(1.0, rho / (1.0 - c)); }
  RewardPolicy to_policy() const;
};

inline RewardPolicy two_level(double c, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw CapacityError("capacity must lie in (0, 1)");
  if (!(c >= 0.0)) throw CapacityError("two-level cutoff must be >= 0");
  if (c > 1.0 - rho + kCapacityTolerance) {
    throw CapacityError("two-level cutoff " + std::to_string(c) + " exceeds 1 - rho = " +
                        std::to_string(1.0 - rho));
  }
  if (c == 0.0) return RewardPolicy{{rho}, {}, rho};
  return RewardPolicy{{0.0, TwoLevelPolicy{c, rho}.level1()}, {c}, rho};
}

inline RewardPolicy TwoLevelPolicy::to_policy() const { return two_level(c, rho); }

}  // namespace rankdesign

#endif  // RANKDESIGN_POLICY_HPP_
