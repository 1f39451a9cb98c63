/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace logpot {

inline constexpr const char* kVersion = "0.1.0";

// Round-trip formatting (17 significant digits).
std::string fmt_double(double v);

// "k1=v1;k2=v2" with keys sorted.
std::string canonical_params(const std::map<std::string, std::string>& params);

// "# logpotential v0.1.0 cmd=<cmd> params=<params>\n"
void write_provenance(std::ostream& os, const std::string& cmd, const std::string& params);

} // namespace logpot
