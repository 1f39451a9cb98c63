/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace logpot {

using RealFn = std::function<double(double)>;

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Transform { none, exp_tail, double_exponential };

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_levels = 12;
    Transform transform = Transform::none;

    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    long evaluations = 0;
    bool converged = true;

    QuadResult& operator+=(const QuadResult& o);
};

// Integrates f over [a, b]; b may be +infinity. Non-convergence is reported
// through QuadResult::converged; a NaN from f throws std::domain_error.
QuadResult integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec = {});

// Same, with the finite interval pre-split at the given interior points.
QuadResult integrate(const RealFn& f, const std::vector<double>& points,
                     const QuadratureSpec& spec = {});

// Iterated integral of f(x, y) over x in [a, b], y in [lo(x), hi(x)].
QuadResult integrate_nested(const std::function<double(double, double)>& f, double a, double b,
                            const RealFn& lo, const RealFn& hi, const QuadratureSpec& outer = {},
                            const QuadratureSpec& inner = {});

struct HankelResult : QuadResult {
    bool accelerated = false;
    int panels = 0;
};

// Radial inverse Fourier transform of g(|xi|) in dimension n = 2 nu + 2:
//   2 pi r^{1 - n/2} int_0^inf g(rho) rho^{n/2} J_nu(2 pi r rho) d rho,  r = omega.
// Integrates between consecutive zeros of J_nu and sums the alternating
// tail with an Euler transform. omega = 0 returns |S^{n-1}| int g rho^{n-1}.
// converged = false flags an acceleration failure.
HankelResult integrate_oscillatory_hankel(const RealFn& g, double nu, double omega,
                                          const QuadratureSpec& spec = {});

// k-th positive zero of J_nu (k >= 1); Newton-refined for k <= 8.
double bessel_j_zero(double nu, int k);

} // namespace logpot
