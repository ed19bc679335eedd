// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: © 2026 The arsmart-sim Authors

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "arsmart/engine.hpp"
#include "arsmart/model.hpp"

namespace arsmart {

// Everything a `simulate` run needs besides the workload.
struct RunConfig {
    int mesh_dim = 8;
    int cluster_dim = 4;
    int hpc_max = 8;
    TimingParams timing;
    SimConfig sim;
};

// `key = value` lines; '#' comments. Keys mirror the RunConfig / TimingParams /
// SimConfig fields, energy coefficients as `energy.<event>`. Throws ParseError.
void apply_config(std::istream &in, RunConfig &cfg);
void apply_config_entry(const std::string &key, const std::string &value, RunConfig &cfg);

// Returns the process exit code; output and diagnostics go to the given streams.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run_cli(int argc, char **argv);

}  // namespace arsmart
