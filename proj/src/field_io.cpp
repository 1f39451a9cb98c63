/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "logpot/field_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "logpot/errors.hpp"

namespace logpot {

namespace {

constexpr char kMagic[8] = {'L', 'P', 'F', 'I', 'E', 'L', 'D', '1'};

template <typename T>
T to_little(T v)
{
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (size_t i = 0; i < sizeof(T) / 2; ++i)
            std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

template <typename T>
void put(std::ostream& os, T v)
{
    v = to_little(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is)
{
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
        throw ValidationError("binary field: truncated input");
    return to_little(v);
}

} // namespace

void write_field_csv(std::ostream& os, const SpectralField& u)
{
    const auto& g = u.grid();
    if (g.n != 1)
        throw ValidationError("CSV fields are one-dimensional; use the binary format for n > 1");
    os << "x,value\n" << std::setprecision(17);
    const auto& v = u.values();
    for (int m = 0; m < g.M; ++m)
        os << g.coord(m) << ',' << v[m] << '\n';
}

SpectralField read_field_csv(std::istream& is)
{
    std::vector<double> xs, vs;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (!header) {
            if (line.rfind("x,value", 0) != 0)
                throw ValidationError("CSV field: expected header 'x,value'");
            header = true;
            continue;
        }
        std::istringstream row(line);
        double x = 0.0, v = 0.0;
        char comma = 0;
        if (!(row >> x >> comma >> v) || comma != ',')
            throw ValidationError("CSV field: malformed row '" + line + "'");
        xs.push_back(x);
        vs.push_back(v);
    }
    if (xs.size() < 2)
        throw ValidationError("CSV field: need at least two rows");
    const int M = static_cast<int>(xs.size());
    const double h = xs[1] - xs[0];
    const SpectralGrid g = SpectralGrid::make(1, h * M, M);
    for (int m = 0; m < M; ++m) {
        if (std::fabs(xs[m] - g.coord(m)) > 1e-9 * g.box)
            throw ValidationError("CSV field: x column is not the uniform grid [-L/2, L/2)");
    }
    SpectralField u(g);
    u.mutable_values() = vs;
    return u;
}

void write_field_binary(std::ostream& os, const SpectralField& u)
{
    const auto& g = u.grid();
    os.write(kMagic, sizeof kMagic);
    put<std::uint64_t>(os, static_cast<std::uint64_t>(g.n));
    put<std::uint64_t>(os, static_cast<std::uint64_t>(g.M));
    put<double>(os, g.box);
    for (double v : u.values())
        put<double>(os, v);
}

SpectralField read_field_binary(std::istream& is)
{
    char magic[8];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw ValidationError("binary field: bad magic");
    const auto n = get<std::uint64_t>(is);
    const auto M = get<std::uint64_t>(is);
    const double box = get<double>(is);
    if (n < 1 || n > 3 || M > (1u << 24))
        throw ValidationError("binary field: implausible header");
    const SpectralGrid g = SpectralGrid::make(static_cast<int>(n), box, static_cast<int>(M));
    SpectralField u(g);
    auto& v = u.mutable_values();
    for (auto& x : v)
        x = get<double>(is);
    return u;
}

SpectralField load_field(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open field file '" + path + "'");
    char head[8] = {};
    in.read(head, sizeof head);
    in.clear();
    in.seekg(0);
    if (std::memcmp(head, kMagic, sizeof kMagic) == 0)
        return read_field_binary(in);
    return read_field_csv(in);
}

void save_field(const std::string& path, const SpectralField& u, const std::string& provenance)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write field file '" + path + "'");
    if (u.grid().n == 1) {
        if (!provenance.empty())
            out << provenance;
        write_field_csv(out, u);
    } else {
        write_field_binary(out, u);
    }
}

} // namespace logpot
