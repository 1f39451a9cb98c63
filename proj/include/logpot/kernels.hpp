/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "logpot/quadrature.hpp"

namespace logpot {

enum class Regime { singular, critical, continuous };

struct KernelParams {
    int n = 1;
    double s = 0.5;
    double lambda = 2.0;

    // Validates and returns the triple; throws ValidationError.
    static KernelParams make(int n, double s, double lambda);
    void validate() const;
    Regime regime() const;
    double nu() const { return 0.5 * n - 1.0; }
};

// Routes for kernel evaluation.
//   heat    : alpha-outer integral of heat-kernel mixtures
//   laplace : t-outer integral with the Laplace representation of 1/ln
//   hankel  : Fourier-Bessel representation
//   automatic : heat for r <= 1, hankel otherwise
enum class Route { heat, hankel, laplace, automatic };

std::string to_string(Regime r);
std::string to_string(Route r);
Route parse_route(const std::string& name);

struct KernelValue {
    double value = 0.0;
    double err = 0.0;
    Route route = Route::heat;
    bool fallback = false; // requested route failed, another was used
    bool converged = true;
};

// Stein's Bessel kernel G_s (the lambda = 1 shifted kernel), heat route.
double bessel_kernel_Gs(int n, double s, double r);

// Shifted Bessel kernel G^lambda_alpha at |x| = r; lambda > 0.
KernelValue shifted_kernel_eval(int n, double lambda, double alpha, double r, Route route = Route::heat);
double shifted_kernel(int n, double lambda, double alpha, double r, Route route = Route::heat);

// Closed form via K_{alpha - n/2}; r > 0.
double shifted_kernel_closed_form(int n, double lambda, double alpha, double r);

// lambda^{-alpha} p_{alpha/lambda}(r), the large-alpha approximation.
double laplace_approx_shifted(int n, double lambda, double alpha, double r);

// K^lambda_{s+ln} at |x| = r.
KernelValue log_bessel_kernel_eval(const KernelParams& p, double r, Route route = Route::automatic);
double log_bessel_kernel(const KernelParams& p, double r, Route route = Route::automatic);

// K(0) in the continuous regime from the p-integral
//   (4 pi)^{-n/2} int_0^inf Gamma(s+p-n/2)/Gamma(s+p) lambda^{n/2-s-p} dp.
double log_bessel_kernel_origin(const KernelParams& p);

// H_s(t) = int_0^inf t^p / Gamma(s+p) dp.
double inner_mixture_H(double s, double t);

// Integral of exp(phi) over [lo, hi] written as exp(log_scale) * value.
struct LineIntegral {
    double log_scale = 0.0;
    double value = 0.0;
    double err = 0.0;
    long evaluations = 0;
    bool converged = true;
    double log_value() const;
};

// phi is assumed unimodal; x0 is a starting guess for its maximum.
LineIntegral integrate_exp_line(const RealFn& phi, double x0, double lo, double hi,
                                double rel_tol = 1e-12);

struct RadialProfile {
    KernelParams params;
    std::vector<double> radii;
    std::vector<double> values;
    std::vector<double> errs;
    Route route = Route::automatic;
    bool partial = false; // some points failed and hold NaN

    void write_csv(std::ostream& os) const;
};

// Log-spaced profile; radii evaluated in parallel.
RadialProfile tabulate_profile(const KernelParams& p, double r_min, double r_max, int points,
                               Route route = Route::automatic);

// Single-threaded reference of tabulate_profile.
RadialProfile tabulate_profile_serial(const KernelParams& p, double r_min, double r_max, int points,
                                      Route route = Route::automatic);

// Profile on caller-supplied radii (strictly increasing, positive).
RadialProfile tabulate_radii(const KernelParams& p, const std::vector<double>& radii,
                             Route route = Route::automatic);

std::vector<double> log_spaced(double lo, double hi, int points);

} // namespace logpot
