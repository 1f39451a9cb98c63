/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <iosfwd>
#include <string>

#include "logpot/spectral.hpp"

namespace logpot {

// n = 1 only: header "x,value", one row per grid point. Lines starting with
// '#' are comments. Reading infers M from the row count and L from the spacing.
void write_field_csv(std::ostream& os, const SpectralField& u);
SpectralField read_field_csv(std::istream& is);

// 32-byte header: magic "LPFIELD1", uint64 n, uint64 M, float64 L, all
// little-endian; then M^n float64 values in row-major order.
void write_field_binary(std::ostream& os, const SpectralField& u);
SpectralField read_field_binary(std::istream& is);

// Picks the format from the file contents (binary magic or CSV).
SpectralField load_field(const std::string& path);
void save_field(const std::string& path, const SpectralField& u, const std::string& provenance = "");

} // namespace logpot
