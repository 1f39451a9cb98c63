/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "logpot/kernels.hpp"

namespace logpot {

enum class AsymptoticRegime { origin_singular, origin_critical, origin_continuous, infinity };

std::string to_string(AsymptoticRegime r);

struct AsymptoticReport {
    KernelParams params;
    AsymptoticRegime regime = AsymptoticRegime::origin_singular;
    double constant_closed_form = 0.0;
    double constant_extrapolated = 0.0;
    double rel_deviation = 0.0;
    double r_lo = 0.0;
    double r_hi = 0.0;
    int samples = 0;
    bool converged = true;
    double fit_residual = 0.0;     // rms relative residual of the fit
    std::vector<double> coeffs;    // fitted model coefficients, leading first
    std::string note;

    static void write_csv_header(std::ostream& os);
    void write_csv_row(std::ostream& os) const;
};

// Regime-appropriate constant at the origin:
//   singular   : Gamma(n/2-s) / (pi^{n/2} 2^{2s} Gamma(s)), K ~ C r^{2s-n} / ln(1/r^2)
//   critical   : 1 / ((4 pi)^{n/2} Gamma(n/2)),            K ~ C ln ln(1/r)
//   continuous : K(0) from the p-integral
double origin_constant(const KernelParams& p);

struct FarFieldLaw {
    double rate = 0.0;     // sqrt(lambda - 1)
    double power = 0.0;    // (n - 1) / 2
    double constant = 0.0; // (lambda-1)^{(n-3)/4} / (2^{(n+1)/2} pi^{(n-1)/2})
};

// r^{(n-1)/2} e^{rate r} K(r) -> constant as r -> infinity; independent of s.
FarFieldLaw infinity_prefactor(const KernelParams& p);

// Radii used for the origin fits. The log corrections are O(1/ln(1/r)), so the
// singular and critical windows reach far below 1e-6.
std::vector<double> origin_radii(const KernelParams& p, int points = 40);

// Singular: fit K L / r^{2s-n} = a + b/L + c/L^2, L = ln(1/r^2).
// Critical: fit K = a lnln(1/r) + b + c/ln(1/r).
// Continuous: compare K at the smallest radius with K(0).
AsymptoticReport verify_origin(const KernelParams& p, const RadialProfile& profile);

// Fits R = r^{(n-1)/2} e^{sqrt(lambda-1) r} K = a + c exp(-(sqrt(lambda) - sqrt(lambda-1)) r).
AsymptoticReport verify_infinity(const KernelParams& p, const RadialProfile& profile);

// Slope of -ln(K r^{(n-1)/2}) against r (least squares over the profile).
double fitted_decay_rate(const RadialProfile& profile);

// Slope of ln K against ln r (least squares over the profile).
double fitted_power(const RadialProfile& profile);

// Relative deviation of H_{n/2}(t) from its leading form 1/(Gamma(n/2) ln(1/t)).
double critical_inner_deviation(int n, double t);

// Ordinary least squares y ~ X c; returns c and writes the rms residual.
std::vector<double> least_squares(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                                  double* rms = nullptr);

} // namespace logpot
