/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

namespace logpot {

// Gamma function for 0 < x <= 171.6.
double gamma(double x);

// ln Gamma(x) for x > 0; no overflow.
double log_gamma(double x);

// 1/Gamma(x) for x > 0, returns 0 past the overflow point of Gamma.
double rgamma(double x);

double digamma(double x);

// Bessel function of the first kind, order nu >= -1/2, argument t >= 0.
double bessel_j(double nu, double t);

// J_nu from the Poisson integral, nu > -1/2. Slower; used as a cross-check
// and in the band between the series and the Hankel expansion.
double bessel_j_poisson(double nu, double t);

// Modified Bessel function of the second kind, real order |nu| <= 50.
double bessel_k(double nu, double t);

// exp(t) * K_nu(t); finite for large t.
double bessel_k_scaled(double nu, double t);

// Heat kernel (4 pi t)^{-n/2} exp(-r^2/4t).
double heat_kernel(int n, double t, double r);

// Surface area of the unit sphere in R^n.
double sphere_area(int n);

} // namespace logpot
