/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "logpot/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace logpot {

std::string fmt_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string canonical_params(const std::map<std::string, std::string>& params)
{
    std::string out;
    for (const auto& [k, v] : params) {
        if (!out.empty())
            out += ';';
        out += k + '=' + v;
    }
    return out;
}

void write_provenance(std::ostream& os, const std::string& cmd, const std::string& params)
{
    os << "# logpotential v" << kVersion << " cmd=" << cmd << " params=" << params << '\n';
}

} // namespace logpot
