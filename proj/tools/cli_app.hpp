/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace logpot::cli {

enum ExitCode { ok = 0, usage = 2, no_convergence = 3, contract = 4 };

// One key=value per line; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> read_config(const std::string& path);

// Runs one command; args exclude the program name. CSV goes to --out or to
// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace logpot::cli
