/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "logpot/kernels.hpp"
#include "logpot/spectral.hpp"

namespace logpot {

struct CriticalExponents {
    double r = 0.0;      // n / (n - 2s)
    double p_star = 0.0; // np / (n - 2sp); NaN when p is not given
};

// Throws ValidationError naming the violated inequality ("n > 2s", "n > 2sp").
CriticalExponents critical_exponents(int n, double s, std::optional<double> p = std::nullopt);

struct MassResult {
    double value = 0.0;
    double err = 0.0;
    bool converged = true;
};

// |S^{n-1}| int_0^inf f(rho) rho^{n-1} d rho, integrated in ln rho. origin_rate
// and decay_rate are the exponential rates of the integrand as ln rho -> -inf
// and of f as rho -> inf; they set the truncation points.
MassResult radial_integral(int n, const std::function<double(double)>& f, double origin_rate, double decay_rate,
                           double rel_tol = 1e-9);

// Total masses; expected lambda^{-s} / ln lambda and lambda^{-alpha}.
MassResult kernel_mass(const KernelParams& p, double rel_tol = 1e-9);
MassResult shifted_kernel_mass(int n, double lambda, double alpha, double rel_tol = 1e-9);

struct NormReport {
    KernelParams params;
    double exponent_r = 0.0;
    double lr_norm = 0.0;           // int K^r over R^n (the r-th power of the norm)
    double near_origin_part = 0.0;  // |x| < 0.25, including the extension below rho_c
    double tail_part = 0.0;         // |x| >= 0.25
    double extension = 0.0;         // |x| < rho_c from the fitted origin law
    double rho_c = 1e-12;
    double err = 0.0;
    bool converged = false;
    // Near-origin partial integrals over rho_min < |x| < 0.25 at decades of rho_min.
    std::vector<double> partial_rho;
    std::vector<double> partial_value;
    std::string note;

    double norm() const { return std::pow(lr_norm, 1.0 / exponent_r); }
    static void write_csv_header(std::ostream& os);
    void write_csv_row(std::ostream& os) const;
};

// Below rho_c the singular regime uses the fitted origin law; other regimes
// continue the quadrature until the rho^n weight makes the rest negligible.
NormReport kernel_lr_norm(const KernelParams& p, double r_exponent, double rho_c = 1e-12);

// |S^{n-1}| int_R^inf K^r rho^{n-1} d rho.
double kernel_lr_tail(const KernelParams& p, double r_exponent, double R);

struct RieszPartial {
    double rho_min = 0.0;
    double numeric = 0.0;  // quadrature of the Riesz profile to the power r over rho_min < |x| < 0.25
    double analytic = 0.0; // antiderivative value
};

// Riesz kernel Gamma(n/2 - s) / (pi^{n/2} 4^s Gamma(s)) rho^{2s-n} at the same exponent r.
std::vector<RieszPartial> riesz_contrast(int n, double s, double r, const std::vector<double>& rho_mins);

struct YoungResult {
    double lhs = 0.0; // ||K * f||_{p*}
    double rhs = 0.0; // ||K||_r ||f||_p
    double r = 0.0;
    double p_star = 0.0;
    bool holds = true; // lhs <= 1.02 rhs
};

YoungResult young_mapping_check(const NormReport& kernel_norm, double p, const SpectralField& f);
YoungResult young_mapping_check(const KernelParams& params, double p, const SpectralField& f);

struct ModulusReport {
    double p = 0.0;
    std::vector<double> h_values;        // decreasing
    std::vector<double> sup_differences; // sup |u(x + h) - u(x)| over the grid
    double fitted_exponent = 0.0;        // slope of ln sup_diff against ln |ln h|
    bool noise_floor = false;            // some differences fell below 1e-12 sup|u| and were not fitted
    bool holds() const { return fitted_exponent <= -1.0 / p + 0.15; }
    static void write_csv_header(std::ostream& os);
    void write_csv(std::ostream& os) const;
};

// Parameters on the critical line n = 2sp.
KernelParams critical_line_params(int n, double p, double lambda = 2.0);

// u = solve_inhomogeneous(f); shifts h = 2^{-k}, k = 4..20, that are lattice
// multiples along the first axis. Requires n = 2sp.
ModulusReport log_modulus_check(const KernelParams& params, double p, const SpectralField& f);

// Real field whose coefficients are independent normals for max_i |k_i| <= kmax.
SpectralField random_bandlimited_field(const SpectralGrid& g, int kmax, std::uint64_t seed);

// |x|^{-n/p} ln(e L / |x|)^{-(1/p + excess)} times a smooth periodic window:
// in L^p, and barely so as excess -> 0.
SpectralField near_extremal_field(const SpectralGrid& g, double p, double excess = 0.05);

struct BlowupResult {
    std::vector<double> widths;
    std::vector<double> values;  // u_k(0) = int K eta_k
    std::vector<double> masses;  // int eta_k
    double slope = 0.0;          // fitted against ln ln(1/w)
    double expected_slope = 0.0; // 1 / ((4 pi)^{n/2} Gamma(n/2))
    bool increasing = true;
};

// eta_k(x) = w^{-n} eta(x / w) with eta a normalized C-infinity bump on the unit ball.
BlowupResult p1_blowup_demo(const KernelParams& params, const std::vector<double>& widths);

} // namespace logpot
