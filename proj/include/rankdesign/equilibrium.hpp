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

#ifndef RANKDESIGN_EQUILIBRIUM_HPP_
#define RANKDESIGN_EQUILIBRIUM_HPP_

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rankdesign/errors.hpp"
#include "rankdesign/function_spec.hpp"
#include "rankdesign/policy.hpp"

namespace rankdesign {

// Anything usable as the skill quantile of a population: FunctionSpec, or the
// environment-mixed quantile of the two-group model.
template <class Q>
concept SkillQuantile = requires(const Q& q, double x) {
  { q.evaluate(x) } -> std::convertible_to<double>;
  { q.invert(x) } -> std::convertible_to<double>;
  { q.breakpoints() } -> std::convertible_to<std::vector<double>>;
};

struct BandSolution {
  std::size_t k = 0;
  double lower = 0.0;
  double upper = 1.0;
  double level = 0.0;
  // Effort that leaves the top applicant of band k-1 indifferent to moving up.
  // Unset for band 0.
  std::optional<double> threshold_effort;
  // g(threshold_effort) * f(lower): the score every applicant of the band
  // must reach. Unset for band 0.
  std::optional<double> threshold_score;
  // Rank at which g(e0) f(theta) overtakes the threshold score and effort
  // settles at e0. Unset when g(e0) = 0 or the switch lies beyond the band.
  std::optional<double> switch_point;
};

template <SkillQuantile Q>
class EquilibriumSchedule {
 public:
  EquilibriumSchedule(Q quantile, FunctionSpec g, FunctionSpec p, double e0, RewardPolicy policy,
                      std::vector<BandSolution> bands)
      : quantile_(std::move(quantile)),
        g_(std::move(g)),
        p_(std::move(p)),
        e0_(e0),
        g_e0_(g_.evaluate(e0)),
        policy_(std::move(policy)),
        bands_(std::move(bands)) {}

  const Q& quantile() const noexcept { return quantile_; }
  const FunctionSpec& transfer() const noexcept { return g_; }
  const FunctionSpec& cost() const noexcept { return p_; }
  double baseline_effort() const noexcept { return e0_; }
  const RewardPolicy& policy() const noexcept { return policy_; }
  const std::vector<BandSolution>& bands() const noexcept { return bands_; }
  std::size_t band_count() const noexcept { return bands_.size(); }

  double effort_at(double theta) const { return effort_in_band(policy_.band_of(theta), theta); }
  double score_at(double theta) const { return score_in_band(policy_.band_of(theta), theta); }
  double level_at(double theta) const { return bands_[policy_.band_of(theta)].level; }

  // Band k's effort formula evaluated at any rank (not only inside band k).
  // Evaluating band k-1 at c_k gives the left limit used by the induction.
  double effort_in_band(std::size_t k, double theta) const {
    const auto& band = bands_.at(k);
    if (!band.threshold_score) return e0_;
    const double needed = *band.threshold_score / quantile_.evaluate(theta);
    if (needed <= g_e0_) return e0_;
    try {
      return g_.invert(needed);
    } catch (const RangeError&) {
      throw ModelError("required transfer " + std::to_string(needed) + " at rank " +
                       std::to_string(theta) + " lies outside the image of g");
    }
  }

  double score_in_band(std::size_t k, double theta) const {
    const double natural = g_e0_ * quantile_.evaluate(theta);
    const auto& band = bands_.at(k);
    return band.threshold_score ? std::max(*band.threshold_score, natural) : natural;
  }

  // Supremum of band k-1 scores, i.e. the left limit at c_k.
  double score_left_limit(std::size_t k) const { return score_in_band(k - 1, bands_.at(k).lower); }

  // Rank boundaries and switch points: the integrand kinks.
  std::vector<double> nodes() const {
    std::vector<double> out{0.0, 1.0};
    for (const auto& b : bands_) {
      out.push_back(b.lower);
      if (b.switch_point) out.push_back(*b.switch_point);
    }
    for (double x : quantile_.breakpoints()) {
      if (x > 0.0 && x < 1.0) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  Q quantile_;
  FunctionSpec g_;
  FunctionSpec p_;
  double e0_;
  double g_e0_;
  RewardPolicy policy_;
  std::vector<BandSolution> bands_;
};

// Closed-form equilibrium: band 0 exerts e0; band k >= 1 must reach the score
// g(te_{k-1}) f(c_k), where p(te_{k-1}) = p(e_{k-1}(c_k)) + l_k - l_{k-1}.
template <SkillQuantile Q>
EquilibriumSchedule<Q> solve(const Q& quantile, const FunctionSpec& g, const FunctionSpec& p,
                             double e0, const RewardPolicy& policy) {
  require_valid(policy);
  const double g_e0 = g.evaluate(e0);
  std::vector<BandSolution> bands;
  bands.reserve(policy.band_count());
  for (std::size_t k = 0; k < policy.band_count(); ++k) {
    BandSolution band;
    band.k = k;
    band.lower = policy.band_lower(k);
    band.upper = policy.band_upper(k);
    band.level = policy.levels[k];
    if (k > 0) {
      // Partial schedule: bands 0..k-1 are final, which is all effort_in_band needs.
      const EquilibriumSchedule<Q> partial(quantile, g, p, e0, policy, bands);
      const double below = partial.effort_in_band(k - 1, band.lower);
      const double target = p.evaluate(below) + band.level - policy.levels[k - 1];
      double threshold;
      try {
        threshold = p.invert(target);
      } catch (const RangeError&) {
        throw ModelError("threshold cost " + std::to_string(target) + " outside image of p");
      }
      band.threshold_effort = threshold;
      band.threshold_score = g.evaluate(threshold) * quantile.evaluate(band.lower);
      if (g_e0 > 0.0) {
        try {
          const double star = quantile.invert(*band.threshold_score / g_e0);
          if (star < band.upper) band.switch_point = std::max(star, band.lower);
        } catch (const RangeError&) {
          // threshold score beyond g(e0) f(1): effort never reaches e0 in this band
        }
      }
    }
    bands.push_back(band);
  }
  return EquilibriumSchedule<Q>(quantile, g, p, e0, policy, std::move(bands));
}

inline EquilibriumSchedule<FunctionSpec> solve(const PopulationSpec& population,
                                               const RewardPolicy& policy) {
  return solve(population.f, population.g, population.p, population.e0, policy);
}

struct RankViolation {
  double theta = 0.0;
  std::size_t band = 0;
  double margin = 0.0;
};

struct RankPreservationReport {
  std::size_t samples = 0;
  std::vector<RankViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

// Every score in band k must strictly exceed every score in band k-1
// (including the left limit at c_k, which a grid never samples exactly).
template <SkillQuantile Q>
RankPreservationReport check_rank_preservation(const EquilibriumSchedule<Q>& schedule,
                                               std::size_t grid_size) {
  if (grid_size < 2) throw SpecError("rank preservation grid needs at least 2 points");
  const std::size_t K = schedule.band_count();
  std::vector<double> lowest(K, std::numeric_limits<double>::infinity());
  std::vector<double> lowest_at(K, 0.0);
  std::vector<double> highest(K, -std::numeric_limits<double>::infinity());
  RankPreservationReport report;
  auto sample = [&](double theta) {
    const std::size_t k = schedule.policy().band_of(theta);
    const double v = schedule.score_in_band(k, theta);
    if (v < lowest[k]) {
      lowest[k] = v;
      lowest_at[k] = theta;
    }
    highest[k] = std::max(highest[k], v);
    ++report.samples;
  };
  for (std::size_t i = 0; i < grid_size; ++i) {
    sample(static_cast<double>(i) / static_cast<double>(grid_size - 1));
  }
  for (std::size_t k = 1; k < K; ++k) sample(schedule.bands()[k].lower);
  for (std::size_t k = 1; k < K; ++k) {
    const double sup_below = std::max(highest[k - 1], schedule.score_left_limit(k));
    const double margin = lowest[k] - sup_below;
    if (!(margin > 0.0)) report.violations.push_back({lowest_at[k], k, margin});
  }
  return report;
}

struct ComparativeStaticsReport {
  RewardPolicy perturbed;
  // Largest |change| over bands below k (should be 0).
  double lower_band_change = 0.0;
  // Smallest change in band k (should be >= 0).
  double band_k_min_change = 0.0;
  // Largest change over bands k+1..j (should be <= 0).
  double upper_band_max_change = 0.0;
  bool ok = true;
};

// Raises l_k by delta and lowers l_j so the capacity is unchanged, re-solves,
// and compares efforts band by band on a uniform grid.
inline ComparativeStaticsReport comparative_statics_check(const PopulationSpec& population,
                                                          const RewardPolicy& policy,
                                                          std::size_t k, std::size_t j,
                                                          double delta,
                                                          std::size_t grid_size = 2000) {
  if (!(j > k) || j >= policy.band_count()) {
    throw PerturbationError("comparative statics needs k < j < K");
  }
  RewardPolicy perturbed = policy;
  perturbed.levels[k] += delta;
  perturbed.levels[j] -= delta * policy.band_width(k) / policy.band_width(j);
  if (auto report = validate(perturbed); !report.ok()) {
    throw PerturbationError("perturbed policy invalid: " + report.summary());
  }
  const auto base = solve(population, policy);
  const auto moved = solve(population, perturbed);
  ComparativeStaticsReport out;
  out.perturbed = perturbed;
  out.band_k_min_change = std::numeric_limits<double>::infinity();
  out.upper_band_max_change = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double theta = (static_cast<double>(i) + 0.5) / static_cast<double>(grid_size);
    const std::size_t band = policy.band_of(theta);
    const double change = moved.effort_at(theta) - base.effort_at(theta);
    if (band < k) {
      out.lower_band_change = std::max(out.lower_band_change, std::abs(change));
    } else if (band == k) {
      out.band_k_min_change = std::min(out.band_k_min_change, change);
    } else if (band <= j) {
      out.upper_band_max_change = std::max(out.upper_band_max_change, change);
    }
  }
  if (!std::isfinite(out.band_k_min_change)) out.band_k_min_change = 0.0;
  if (!std::isfinite(out.upper_band_max_change)) out.upper_band_max_change = 0.0;
  constexpr double kSlack = 1e-12;
  out.ok = out.lower_band_change <= kSlack && out.band_k_min_change >= -kSlack &&
           out.upper_band_max_change <= kSlack;
  return out;
}

}  // namespace rankdesign

#endif  // RANKDESIGN_EQUILIBRIUM_HPP_
