/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "logpot/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace logpot {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-17;

// Lanczos coefficients, g = 607/128.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr double kLanczos[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4, .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,  -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4, .36899182659531622704e-5};

// Taylor coefficients of 1/Gamma(1+z) about z = 0.
constexpr double kRGammaTaylor[25] = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15};

double lanczos_sum(double x)
{
    double ser = kLanczos[0];
    for (int k = 1; k < 15; ++k)
        ser += kLanczos[k] / (x + k);
    return ser;
}

void require_positive(double x, const char* fn)
{
    if (!(x > 0.0))
        throw std::domain_error(std::string(fn) + ": argument must be positive");
}

double bessel_j_series(double nu, double t)
{
    const double lead = std::exp(nu * std::log(0.5 * t) - log_gamma(nu + 1.0));
    const double q = 0.25 * t * t;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= -q / (k * (nu + k));
        sum += term;
        if (std::fabs(term) < kEps * std::fabs(sum) && k > 0.5 * t)
            break;
    }
    return lead * sum;
}

double bessel_j_hankel(double nu, double t)
{
    const double mu = 4.0 * nu * nu;
    const double z8 = 8.0 * t;
    double p = 1.0;
    double q = 0.0;
    double a = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = a * (mu - odd * odd) / (k * z8);
        if (std::fabs(next) > std::fabs(a) && k > 2)
            break;
        a = next;
        const int m = k / 2;
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 1)
            q += ((k - 1) / 2 % 2 == 0 ? 1.0 : -1.0) * a;
        else
            p += sign * a;
        if (std::fabs(a) < kEps)
            break;
    }
    const double omega = t - (0.5 * nu + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * t)) * (p * std::cos(omega) - q * std::sin(omega));
}

// Spherical-Bessel closed forms for half-integer order, upward recurrence
// in the stable region t > nu.
double bessel_j_half_integer(double nu, double t)
{
    const int k = static_cast<int>(std::lround(nu - 0.5));
    double jm = std::cos(t) / t; // j_{-1}
    double j = std::sin(t) / t;  // j_0
    if (k == -1)
        j = jm;
    for (int i = 0; i < k; ++i) {
        const double jn = (2.0 * i + 1.0) / t * j - jm;
        jm = j;
        j = jn;
    }
    return std::sqrt(2.0 * t / kPi) * j;
}

bool is_half_integer(double nu)
{
    const double twice = 2.0 * nu;
    return std::fabs(twice - std::round(twice)) < 1e-15 && static_cast<long>(std::round(twice)) % 2 != 0;
}

// gam1, gam2 of Temme's method and 1/Gamma(1 +- mu), |mu| <= 1/2.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi)
{
    // even = sum_{k even} c_k mu^k, odd = sum_{k odd} c_k mu^{k-1}
    double even = 0.0;
    double odd = 0.0;
    double pw = 1.0;
    for (int k = 0; k < 25; k += 2) {
        even += kRGammaTaylor[k] * pw;
        if (k + 1 < 25)
            odd += kRGammaTaylor[k + 1] * pw;
        pw *= mu * mu;
    }
    gam1 = -odd;
    gam2 = even;
    gampl = gam2 - mu * gam1;
    gammi = gam2 + mu * gam1;
}

// Returns K_nu(x), scaled by exp(x) when scaled is set.
double bessel_k_impl(double nu, double x, bool scaled)
{
    if (!(x > 0.0))
        throw std::domain_error("bessel_k: argument must be positive");
    nu = std::fabs(nu);
    if (nu > 50.0)
        throw std::domain_error("bessel_k: order above 50 is not supported");
    if (is_half_integer(nu) && nu < 10.0) {
        // K_{k+1/2}: sqrt(pi/2x) e^{-x} times a polynomial in 1/x.
        const int k = static_cast<int>(std::lround(nu - 0.5));
        double km = 1.0; // K_{1/2} / (sqrt(pi/2x) e^{-x})
        double kc = 1.0;
        for (int i = 0; i < k; ++i) {
            const double kn = km + (2.0 * (i + 0.5)) / x * kc;
            km = kc;
            kc = kn;
        }
        const double base = std::sqrt(kPi / (2.0 * x));
        return scaled ? base * kc : base * std::exp(-x) * kc;
    }
    const int nl = static_cast<int>(nu + 0.5);
    const double xmu = nu - nl;
    const double xmu2 = xmu * xmu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    double rkmu;
    double rk1;
    if (x < 2.0) {
        const double x2 = 0.5 * x;
        const double pimu = kPi * xmu;
        const double fact = std::fabs(pimu) < 1e-16 ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = xmu * d;
        const double fact2 = std::fabs(e) < 1e-16 ? 1.0 : std::sinh(e) / e;
        double gam1, gam2, gampl, gammi;
        temme_gammas(xmu, gam1, gam2, gampl, gammi);
        double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / gampl;
        double q = 0.5 / (e * gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        for (int i = 1; i < 500; ++i) {
            ff = (i * ff + p + q) / (i * i - xmu2);
            c *= d / i;
            p /= (i - xmu);
            q /= (i + xmu);
            const double del = c * ff;
            sum += del;
            sum1 += c * (p - i * ff);
            if (std::fabs(del) < std::fabs(sum) * kEps)
                break;
        }
        rkmu = sum;
        rk1 = sum1 * xi2;
        if (scaled) {
            const double ex = std::exp(x);
            rkmu *= ex;
            rk1 *= ex;
        }
    } else {
        double b = 2.0 * (1.0 + x);
        double d = 1.0 / b;
        double h = d;
        double delh = d;
        double q1 = 0.0;
        double q2 = 1.0;
        const double a1 = 0.25 - xmu2;
        double q = a1;
        double c = a1;
        double a = -a1;
        double s = 1.0 + q * delh;
        for (int i = 2; i < 100000; ++i) {
            a -= 2 * (i - 1);
            c = -a * c / i;
            const double qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            const double dels = q * delh;
            s += dels;
            if (std::fabs(dels / s) < kEps)
                break;
        }
        h = a1 * h;
        rkmu = std::sqrt(kPi / (2.0 * x)) / s;
        if (!scaled)
            rkmu *= std::exp(-x);
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    }
    for (int i = 1; i <= nl; ++i) {
        const double next = (xmu + i) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = next;
    }
    return rkmu;
}

} // namespace

double gamma(double x)
{
    require_positive(x, "gamma");
    if (x > 171.6)
        throw std::overflow_error("gamma: argument above 171.6 overflows");
    const double t = x + kLanczosG + 0.5;
    // Gamma(x+1) = sqrt(2 pi) t^{x+1/2} e^{-t} A(x); split the power to avoid overflow.
    const double h = std::pow(t, 0.5 * (x + 0.5));
    const double g1 = std::sqrt(2.0 * kPi) * lanczos_sum(x) * h * (h * std::exp(-t));
    return g1 / x;
}

double log_gamma(double x)
{
    require_positive(x, "log_gamma");
    if (x < 100.0 && x > 1e-3)
        return std::log(gamma(x));
    const double t = x + kLanczosG + 0.5;
    return (x + 0.5) * std::log(t) - t + std::log(std::sqrt(2.0 * kPi) * lanczos_sum(x) / x);
}

double rgamma(double x)
{
    require_positive(x, "rgamma");
    if (x <= 171.0)
        return 1.0 / gamma(x);
    return std::exp(-log_gamma(x));
}

double digamma(double x)
{
    require_positive(x, "digamma");
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double z = 1.0 / (x * x);
    const double series =
        z * (1.0 / 12 -
             z * (1.0 / 120 -
                  z * (1.0 / 252 -
                       z * (1.0 / 240 - z * (1.0 / 132 - z * (691.0 / 32760 - z / 12.0))))));
    return acc + std::log(x) - 0.5 / x - series;
}

double bessel_j(double nu, double t)
{
    if (nu < -0.5)
        throw std::domain_error("bessel_j: order must be >= -1/2");
    if (t < 0.0)
        throw std::domain_error("bessel_j: argument must be non-negative");
    if (t == 0.0) {
        if (nu == 0.0)
            return 1.0;
        return nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (is_half_integer(nu) && t > nu + 1.0)
        return bessel_j_half_integer(nu, t);
    if (t < std::max(12.0, 2.0 * nu))
        return bessel_j_series(nu, t);
    if (t < std::max(25.0, 4.0 * nu * nu))
        return bessel_j_poisson(nu, t);
    return bessel_j_hankel(nu, t);
}

double bessel_j_poisson(double nu, double t)
{
    if (!(nu > -0.5))
        throw std::domain_error("bessel_j_poisson: order must exceed -1/2");
    if (t == 0.0)
        return nu == 0.0 ? 1.0 : 0.0;
    // tanh-sinh on theta in [0, pi/2] of cos^{2 nu}(theta) cos(t sin theta).
    const double half = 0.25 * kPi;
    auto node = [&](double tau, double& w) {
        const double u = 0.5 * kPi * std::sinh(tau);
        const double ch = std::cosh(u);
        w = half * 0.5 * kPi * std::cosh(tau) / (ch * ch);
        const double to_top = half * 2.0 / (1.0 + std::exp(2.0 * u)); // pi/2 - theta
        const double theta = 0.5 * kPi - to_top;
        const double c = std::sin(to_top);
        const double cpow = nu == 0.0 ? 1.0 : std::pow(c, 2.0 * nu);
        return cpow * std::cos(t * std::sin(theta));
    };
    const double tmax = 3.5;
    double h = 0.5;
    double w0;
    double sum = node(0.0, w0) * w0;
    for (double tau = h; tau <= tmax; tau += h) {
        double wp, wm;
        sum += node(tau, wp) * wp + node(-tau, wm) * wm;
    }
    double integral = sum * h;
    for (int level = 0; level < 12; ++level) {
        h *= 0.5;
        double add = 0.0;
        double mag = 0.0;
        for (double tau = h; tau <= tmax; tau += 2.0 * h) {
            double wp, wm;
            const double a = node(tau, wp) * wp;
            const double b = node(-tau, wm) * wm;
            add += a + b;
            mag += std::fabs(a) + std::fabs(b);
        }
        sum += add;
        const double next = sum * h;
        const bool done = std::fabs(next - integral) < 1e-15 * std::max(1.0, mag * h) && level > 2;
        integral = next;
        if (done)
            break;
    }
    const double pre = 2.0 * std::exp(nu * std::log(0.5 * t) - log_gamma(nu + 0.5)) / std::sqrt(kPi);
    return pre * integral;
}

double bessel_k(double nu, double t)
{
    return bessel_k_impl(nu, t, false);
}

double bessel_k_scaled(double nu, double t)
{
    return bessel_k_impl(nu, t, true);
}

double heat_kernel(int n, double t, double r)
{
    if (!(t > 0.0))
        throw std::domain_error("heat_kernel: time must be positive");
    return std::pow(4.0 * kPi * t, -0.5 * n) * std::exp(-r * r / (4.0 * t));
}

double sphere_area(int n)
{
    return 2.0 * std::pow(kPi, 0.5 * n) / gamma(0.5 * n);
}

} // namespace logpot
