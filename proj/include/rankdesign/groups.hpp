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

#ifndef RANKDESIGN_GROUPS_HPP_
#define RANKDESIGN_GROUPS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "rankdesign/equilibrium.hpp"
#include "rankdesign/parallel.hpp"

namespace rankdesign {

enum class Group { A, B };

inline const char* to_string(Group g) { return g == Group::A ? "A" : "B"; }

// Environment factors of an advantaged group A and a disadvantaged group B.
struct GroupSpec {
  static constexpr double kEqualShare = 0.5;

  double gamma_a = 1.0;
  double gamma_b = 1.0;
  double share = kEqualShare;

  double gamma(Group g) const { return g == Group::A ? gamma_a : gamma_b; }

  // Equal factors are accepted as the symmetric (base model) limit.
  void validate() const {
    if (!(gamma_a > 0.0 && gamma_b > 0.0) || !std::isfinite(gamma_a) || !std::isfinite(gamma_b)) {
      throw SpecError("groups: environment factors must be positive and finite");
    }
    if (gamma_a < gamma_b) throw SpecError("groups: gamma_A must be >= gamma_B");
    if (share != kEqualShare) throw SpecError("groups: only equal group shares (0.5) are supported");
  }
};

// f^-1 extended as a CDF: 0 below f(0), 1 above f(1).
inline double clamped_inverse(const FunctionSpec& f, double y) {
  if (y <= f.evaluate(0.0)) return 0.0;
  if (y >= f.evaluate(1.0)) return 1.0;
  return std::clamp(f.invert(y), 0.0, 1.0);
}

// Quantile of environment-scaled skill f(theta) * gamma over the mixed
// population. Usable wherever a SkillQuantile is expected.
class MixQuantile {
 public:
  MixQuantile(FunctionSpec f, GroupSpec groups) : f_(std::move(f)), groups_(groups) {
    groups_.validate();
  }

  // CDF of scaled skill: the share-weighted average of the group CDFs.
  double invert(double x) const {
    if (x <= 0.0) return 0.0;
    return groups_.share * clamped_inverse(f_, x / groups_.gamma_a) +
           (1.0 - groups_.share) * clamped_inverse(f_, x / groups_.gamma_b);
  }

  double evaluate(double q) const {
    const double top = f_.evaluate(1.0) * groups_.gamma_a;
    if (q <= 0.0) return 0.0;
    if (q >= 1.0) return top;
    double lo = 0.0;
    double hi = top;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
      const double mid = 0.5 * (lo + hi);
      (invert(mid) < q ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // Rank where group B saturates at f(1): f_mix has a kink there.
  std::vector<double> breakpoints() const {
    const double q = invert(f_.evaluate(1.0) * groups_.gamma_b);
    if (q > 0.0 && q < 1.0) return {q};
    return {};
  }

  const FunctionSpec& base() const noexcept { return f_; }
  const GroupSpec& groups() const noexcept { return groups_; }

 private:
  FunctionSpec f_;
  GroupSpec groups_;
};

inline double f_mix_inverse(const PopulationSpec& pop, const GroupSpec& groups, double x) {
  return MixQuantile(pop.f, groups).invert(x);
}

inline double f_mix(const PopulationSpec& pop, const GroupSpec& groups, double q) {
  return MixQuantile(pop.f, groups).evaluate(q);
}

inline double pre_rank(const PopulationSpec& pop, const GroupSpec& groups, double theta_true,
                       Group group) {
  if (!(theta_true >= 0.0 && theta_true <= 1.0)) throw DomainError("theta_true outside [0, 1]");
  return f_mix_inverse(pop, groups, pop.f.evaluate(theta_true) * groups.gamma(group));
}

struct GroupThresholds {
  double tau_a = 0.0;
  double tau_b = 0.0;
};

// Latent-skill ranks at which each group crosses the admission cutoff c.
inline GroupThresholds group_thresholds(const PopulationSpec& pop, const GroupSpec& groups,
                                        double c) {
  if (c <= 0.0) return {0.0, 0.0};
  const double scaled = f_mix(pop, groups, c);
  return {clamped_inverse(pop.f, scaled / groups.gamma_a),
          clamped_inverse(pop.f, scaled / groups.gamma_b)};
}

enum class Region { Low, Middle, High };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::Low:
      return "Low";
    case Region::Middle:
      return "Middle";
    case Region::High:
      return "High";
  }
  return "?";
}

inline Region classify(const GroupThresholds& t, double theta_true) {
  if (theta_true < t.tau_a) return Region::Low;
  if (theta_true < t.tau_b) return Region::Middle;
  return Region::High;
}

namespace detail {

inline void require_zero_baseline_transfer(const PopulationSpec& pop) {
  if (pop.transfer_at_baseline() != 0.0) {
    throw AssumptionError("group welfare formulas require g(e0) = 0");
  }
}

}  // namespace detail

// Welfare of a group-G applicant at latent rank theta_true under a two-level
// policy: zero below the group threshold, l1 - p(effort) above it.
inline double group_welfare(const PopulationSpec& pop, const GroupSpec& groups,
                            const TwoLevelPolicy& policy, double theta_true, Group group) {
  detail::require_zero_baseline_transfer(pop);
  if (!(theta_true >= 0.0 && theta_true <= 1.0)) throw DomainError("theta_true outside [0, 1]");
  if (policy.c <= 0.0) return policy.rho;
  const auto t = group_thresholds(pop, groups, policy.c);
  const double tau = group == Group::A ? t.tau_a : t.tau_b;
  if (theta_true < tau) return 0.0;
  const double l1 = policy.level1();
  const double te0 = pop.p.invert(pop.p.evaluate(pop.e0) + l1);
  const double needed = pop.g.evaluate(te0) * f_mix(pop, groups, policy.c) /
                        (pop.f.evaluate(theta_true) * groups.gamma(group));
  const double effort = needed <= pop.transfer_at_baseline() ? pop.e0 : pop.g.invert(needed);
  return l1 - pop.p.evaluate(effort);
}

inline double welfare_gap(const PopulationSpec& pop, const GroupSpec& groups,
                          const TwoLevelPolicy& policy, double theta_true) {
  return group_welfare(pop, groups, policy, theta_true, Group::A) -
         group_welfare(pop, groups, policy, theta_true, Group::B);
}

struct Derivative {
  double value = 0.0;
  double half_step_value = 0.0;
  // |D(h) - D(h/2)|; O(h^2) for a smooth gap.
  double truncation_estimate = 0.0;
};

// d gap / d c by central differences (h = 1e-5) with a half-step estimate.
// theta_true must be in the High region at c - h and c + h.
inline Derivative welfare_gap_derivative(const PopulationSpec& pop, const GroupSpec& groups,
                                         double rho, double c, double theta_true,
                                         double h = 1e-5) {
  if (!(c - h > 0.0) || c + h > 1.0 - rho) {
    throw RegionError("finite-difference points c +/- h must lie in (0, 1 - rho]");
  }
  for (double cc : {c - h, c + h}) {
    const auto t = group_thresholds(pop, groups, cc);
    if (classify(t, theta_true) != Region::High) {
      throw RegionError("theta_true " + std::to_string(theta_true) +
                        " is not in the High region at c = " + std::to_string(cc));
    }
  }
  auto gap = [&](double cc) { return welfare_gap(pop, groups, TwoLevelPolicy{cc, rho}, theta_true); };
  Derivative d;
  d.value = (gap(c + h) - gap(c - h)) / (2.0 * h);
  d.half_step_value = (gap(c + h / 2) - gap(c - h / 2)) / h;
  d.truncation_estimate = std::abs(d.value - d.half_step_value);
  return d;
}

// Overall admission probability of group B.
inline double access(const PopulationSpec& pop, const GroupSpec& groups,
                     const TwoLevelPolicy& policy) {
  if (policy.c <= 0.0) return policy.rho;
  return policy.level1() * (1.0 - group_thresholds(pop, groups, policy.c).tau_b);
}

// Midpoint convexity of f^-1 on [f(0), f(1)].
inline bool inverse_is_convex(const FunctionSpec& f, std::size_t samples = 1000) {
  const double lo = f.evaluate(0.0);
  const double hi = f.evaluate(1.0);
  for (std::size_t i = 0; i + 2 <= samples; ++i) {
    const double a = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples);
    const double b = lo + (hi - lo) * static_cast<double>(i + 2) / static_cast<double>(samples);
    const double mid = f.invert(0.5 * (a + b));
    if (mid > 0.5 * (f.invert(a) + f.invert(b)) + 1e-12) return false;
  }
  return true;
}

// Equilibrium of the mixed population, viewed per group.
class GroupEquilibrium {
 public:
  GroupEquilibrium(const PopulationSpec& pop, const GroupSpec& groups, const RewardPolicy& policy)
      : pop_(pop),
        groups_(groups),
        schedule_(solve(MixQuantile(pop.f, groups), pop.g, pop.p, pop.e0, policy)) {}

  const EquilibriumSchedule<MixQuantile>& schedule() const noexcept { return schedule_; }

  double pre_rank(double theta_true, Group g) const {
    return rankdesign::pre_rank(pop_, groups_, theta_true, g);
  }
  double effort(double theta_true, Group g) const {
    return schedule_.effort_at(pre_rank(theta_true, g));
  }
  double reward(double theta_true, Group g) const {
    return schedule_.level_at(pre_rank(theta_true, g));
  }
  double welfare(double theta_true, Group g) const {
    return reward(theta_true, g) - pop_.p.evaluate(effort(theta_true, g));
  }

 private:
  PopulationSpec pop_;
  GroupSpec groups_;
  EquilibriumSchedule<MixQuantile> schedule_;
};

struct AuditRow {
  double c = 0.0;
  GroupThresholds thresholds;
  double access = 0.0;
  double gap_q25 = 0.0;
  double gap_q50 = 0.0;
  double gap_q75 = 0.0;
};

inline AuditRow audit_row(const PopulationSpec& pop, const GroupSpec& groups, double rho, double c) {
  const TwoLevelPolicy policy{c, rho};
  two_level(c, rho);  // capacity validation
  return AuditRow{c,
                  group_thresholds(pop, groups, c),
                  access(pop, groups, policy),
                  welfare_gap(pop, groups, policy, 0.25),
                  welfare_gap(pop, groups, policy, 0.50),
                  welfare_gap(pop, groups, policy, 0.75)};
}

inline std::vector<AuditRow> audit_sweep(const PopulationSpec& pop, const GroupSpec& groups,
                                         double rho, const std::vector<double>& cutoffs,
                                         std::size_t workers = 1) {
  return parallel_map(cutoffs.size(), workers,
                      [&](std::size_t i) { return audit_row(pop, groups, rho, cutoffs[i]); });
}

}  // namespace rankdesign

#endif  // RANKDESIGN_GROUPS_HPP_
