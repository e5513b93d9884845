// Copyright (c) 2026 The phbc authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Configuration-driven commands behind the `phbc` executable.
//
// Exit codes: 0 pass, 1 a condition or invariant failed, 2 the configuration
// or command line is malformed.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "phbc/bc.hpp"
#include "phbc/examples.hpp"
#include "phbc/system.hpp"
#include "phbc/timestepper.hpp"

namespace phbc
{

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CliOptions
{
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string fault;  // selftest only: "sbp" corrupts an SBP stencil
};

/// Everything a run needs, built from a parsed configuration.
struct RunSetup
{
  std::string system_name;
  ExampleSystem system;
  BoxGrid grid;
  BoundarySplitting split;
  Colligation colligation;
  BoundaryConditionSpec spec;
  SimulationConfig sim;
  bool has_time = false;
  bool forced = false;
  std::uint64_t seed = 0;
  std::string csv_path;
  std::string report_path;
  std::vector<std::string> notes;
};

/// Parses and assembles a configuration. Throws ConfigError (and the
/// structural errors of the library) on malformed input.
RunSetup load_config(const nlohmann::json &config, std::optional<std::uint64_t> seed_override = {});

RunSetup load_config_file(const std::string &path, std::optional<std::uint64_t> seed_override = {});

/// CSV energy trace, 17 significant digits, header plus one row per record.
void write_csv(std::ostream &os, const SimulationResult &result);

int cmd_validate(const CliOptions &opts, std::ostream &out, std::ostream &err);
int cmd_simulate(const CliOptions &opts, std::ostream &out, std::ostream &err);
int cmd_selftest(const CliOptions &opts, std::ostream &out, std::ostream &err);

}  // namespace phbc
