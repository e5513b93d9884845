// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <iostream>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "phbc/cli.hpp"

int main(int argc, char **argv)
{
  CLI::App app{"Structure-preserving port-Hamiltonian boundary control"};
  app.require_subcommand(1);

  phbc::CliOptions opts;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App *sub, bool needs_config) {
    auto *cfg = sub->add_option("--config", opts.config_path, "JSON configuration");
    if (needs_config)
    {
      cfg->required();
    }
    sub->add_option("--out", opts.out_path, "output path (CSV for simulate, report otherwise)");
    sub->add_option("--seed", seed, "seed for randomized checks");
    sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
  };

  auto *validate = app.add_subcommand("validate", "check a configuration against the generator conditions");
  add_common(validate, true);
  auto *simulate = app.add_subcommand("simulate", "run the midpoint scheme and write an energy trace");
  add_common(simulate, true);
  auto *selftest = app.add_subcommand("selftest", "run the built-in invariant suite");
  add_common(selftest, false);
  selftest->add_option("--fault", opts.fault, "corrupt a component to exercise failure reporting")
      ->group("");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : phbc::kExitUsage;
  }

  for (auto *sub : {validate, simulate, selftest})
  {
    if (sub->count("--seed") > 0)
    {
      opts.seed = seed;
    }
  }
  Eigen::setNbThreads(opts.threads);

  if (*validate)
  {
    return phbc::cmd_validate(opts, std::cout, std::cerr);
  }
  if (*simulate)
  {
    return phbc::cmd_simulate(opts, std::cout, std::cerr);
  }
  return phbc::cmd_selftest(opts, std::cout, std::cerr);
}
