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

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  namespace cli = rankdesign::cli;
  CLI::App app{"rankdesign: equilibrium effort, welfare and policy design for rank-based rewards"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  cli::Options opt;
  std::string config, output, format, objective;
  std::uint64_t seed = 0;
  std::size_t workers = 0, grid = 0, agents = 0, max_rounds = 0;
  double effort_step = 0.0, epsilon = 0.0;

  auto* o_config = app.add_option("--config", config, "JSON config file");
  auto* o_output = app.add_option("--output", output, "write result to this path");
  auto* o_format = app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_workers = app.add_option("--workers", workers, "worker threads (default: RANKDESIGN_WORKERS or cores)");
  auto* o_grid = app.add_option("--grid", grid, "grid size (equilibrium samples, optimizer grid)");

  const char* descriptions[][2] = {
      {"eval", "welfare report for one policy"},
      {"sweep", "two-level policies over a range of cutoffs"},
      {"equilibrium", "sampled equilibrium effort and score schedule"},
      {"groups", "two-group thresholds, access and welfare gaps"},
      {"verify", "certify the closed form against discrete best responses"},
      {"optimize", "best two-level cutoff for an objective"},
      {"multidim", "multi-skill rank preservation and unmeasurable-skill weight"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& d : descriptions) subs[d[0]] = app.add_subcommand(d[0], d[1]);

  auto* o_objective = subs["optimize"]->add_option("--objective", objective,
                                                    "applicant_welfare | societal_utility | private_utility");
  auto* o_agents = subs["verify"]->add_option("--agents", agents, "number of agents N");
  auto* o_step = subs["verify"]->add_option("--effort-step", effort_step, "effort grid step");
  auto* o_eps = subs["verify"]->add_option("--epsilon", epsilon, "certification tolerance (default 5/N)");
  auto* o_md_agents = subs["multidim"]->add_option("--agents", agents, "number of agents");
  auto* o_md_rounds = subs["multidim"]->add_option("--max-rounds", max_rounds, "best-response round limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kConfig;
  }

  if (*o_config) opt.config_path = config;
  if (*o_output) opt.output = output;
  if (*o_format) opt.format = format;
  if (*o_seed) opt.seed = seed;
  if (*o_workers) opt.workers = workers;
  if (*o_grid) opt.grid = grid;
  if (*o_objective) opt.objective = objective;
  if (*o_agents || *o_md_agents) opt.agents = agents;
  if (*o_step) opt.effort_step = effort_step;
  if (*o_eps) opt.epsilon = epsilon;
  if (*o_md_rounds) opt.max_rounds = max_rounds;

  std::string name;
  for (const auto& [key, sub] : subs) {
    if (sub->parsed()) name = key;
  }
  const auto result = cli::run(name, opt);
  if (!result.written_to && !result.output.empty()) std::cout << result.output;
  if (!result.diagnostics.empty()) std::cerr << result.diagnostics;
  return result.exit_code;
}
