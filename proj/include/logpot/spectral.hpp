/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "logpot/fft.hpp"
#include "logpot/kernels.hpp"
#include "logpot/symbols.hpp"

namespace logpot {

// Periodic box [-L/2, L/2)^n with M points per axis; lattice frequencies k/L.
struct SpectralGrid {
    int n = 1;
    double box = 1.0;
    int M = 16;

    static SpectralGrid make(int n, double box, int M);
    void validate() const;
    size_t size() const;
    double spacing() const { return box / M; }
    double coord(int m) const { return (m - M / 2) * spacing(); }
    // |xi| of the coefficient at flat index idx (row-major, FFT ordering).
    double freq_norm(size_t idx) const;
    std::array<int, 3> freq_index(size_t idx) const;
};

// Real field on a SpectralGrid. Values and coefficients sync lazily; a field
// is single-writer and its const accessors are not safe for concurrent use.
// Coefficients are normalized so that u(x_m) = sum_k c_k e^{2 pi i k m / M}.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(const SpectralGrid& g);

    static SpectralField sample(const SpectralGrid& g, const std::function<double(const double* x)>& f);

    const SpectralGrid& grid() const { return grid_; }
    const std::vector<double>& values() const;
    std::vector<double>& mutable_values();
    const std::vector<Complex>& coeffs() const;
    std::vector<Complex>& mutable_coeffs();

    double lp_norm(double p) const; // discrete (sum |u|^p h^n)^{1/p}
    double l2_norm() const { return lp_norm(2.0); }
    double sup_norm() const;
    double mean() const;

private:
    void sync_values() const;
    void sync_coeffs() const;

    SpectralGrid grid_;
    mutable std::vector<double> values_;
    mutable std::vector<Complex> coeffs_;
    mutable bool values_ok_ = true;
    mutable bool coeffs_ok_ = false;
};

// Radial Fourier multiplier. Homogeneous symbols get a zero coefficient at xi = 0.
struct Multiplier {
    std::function<double(double)> symbol;
    bool homogeneous = false;
    std::string name;
};

Multiplier inhom_multiplier(const KernelParams& p);      // (lambda + r)^s ln(lambda + r)
Multiplier hom_multiplier(double s);                     // r^s ln r
Multiplier bessel_power_multiplier(double lambda, double t); // (lambda + r)^t
Multiplier log_multiplier(double lambda);                // ln(lambda + r)
Multiplier frac_laplacian_multiplier(double s);          // r^s
Multiplier descriptor_multiplier(const SymbolDescriptor& d);
Multiplier bridge_w_multiplier(const KernelParams& p);
Multiplier bridge_mu_multiplier(const KernelParams& p);

// Multiplies coefficients by the symbol on the lattice; NaN symbols throw
// ValidationError before anything is written. Parallel over frequencies.
SpectralField apply_multiplier(const SpectralField& u, const Multiplier& m);
SpectralField apply_multiplier_serial(const SpectralField& u, const Multiplier& m);

// u = (lambda I - Delta)^{-(s+ln)} f.
SpectralField solve_inhomogeneous(const SpectralField& f, const KernelParams& p);

enum class ZeroModeRule { require_zero_mean, project };

// Throws ContractError("symbol zero on lattice ...") if some k != 0 has
// | 2 pi |k/L| - 1 | < tol.
void audit_homogeneous_lattice(const SpectralGrid& g, double tol = 1e-9);

// u = (-Delta)^{-(s+ln)} f modulo the zero mode. With require_zero_mean a
// non-zero lattice mean throws ContractError("polynomial ambiguity").
SpectralField solve_homogeneous(const SpectralField& f, const KernelParams& p,
                                ZeroModeRule rule = ZeroModeRule::require_zero_mean);

// sup over the lattice of inhom / (|hom| + 1).
double apriori_constant(const SpectralGrid& g, const KernelParams& p);

// (K * f)(x_i) = sum_j K(|x_i - x_j|) f(x_j) h on a 1-D periodic grid, using the
// minimum-image distance; kernel samples are needed at multiples of h only.
SpectralField convolve_radial_kernel_1d(const SpectralField& f, const std::function<double(double)>& kernel);

// c_{n,s} = 4^s Gamma(n/2 + s) s / (pi^{n/2} Gamma(1 - s)).
double frac_constant_c(int n, double s);
// b_{n,s} = ln 4 + 1/s + psi(1 - s) + psi(n/2 + s) = d/ds ln c_{n,s}.
double frac_constant_b(int n, double s);

struct PointwiseResult {
    double value = 0.0;      // c L_1 u + b (-Delta)^s u
    double frac_part = 0.0;  // (-Delta)^s u
    double log_part = 0.0;   // L_1 u
    double err = 0.0;
};

// (-Delta)^{s+ln} u(x) in one dimension from the singular-integral form, for
// u in C^2 with u = 0 outside [-support, support]. Symmetric second
// differences; below rho0 = 1e-2 they are replaced by a rho^2 + b rho^4 fitted
// at rho0 and 2 rho0. Throws ConvergenceError if a panel fails.
PointwiseResult apply_pointwise_frac_log(const std::function<double(double)>& u, double x, double s,
                                         double support, const QuadratureSpec& spec = {});

} // namespace logpot
