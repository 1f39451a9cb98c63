/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "logpot/asymptotics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "logpot/errors.hpp"
#include "logpot/special_fn.hpp"

namespace logpot {

namespace {

constexpr double kPi = std::numbers::pi;

// Model truncation is expected to leave relative residuals below this.
constexpr double kExpectedResidual = 1e-3;

struct Samples {
    std::vector<double> r;
    std::vector<double> k;
};

Samples finite_samples(const RadialProfile& profile)
{
    Samples out;
    for (size_t i = 0; i < profile.radii.size(); ++i) {
        if (std::isfinite(profile.values[i]) && profile.values[i] > 0.0) {
            out.r.push_back(profile.radii[i]);
            out.k.push_back(profile.values[i]);
        }
    }
    return out;
}

AsymptoticReport base_report(const KernelParams& p, AsymptoticRegime regime, const Samples& s)
{
    AsymptoticReport rep;
    rep.params = p;
    rep.regime = regime;
    rep.samples = static_cast<int>(s.r.size());
    if (!s.r.empty()) {
        rep.r_lo = s.r.front();
        rep.r_hi = s.r.back();
    }
    return rep;
}

void finish(AsymptoticReport& rep)
{
    rep.rel_deviation = std::fabs(rep.constant_extrapolated - rep.constant_closed_form) /
                        std::fabs(rep.constant_closed_form);
    if (rep.fit_residual > 10.0 * kExpectedResidual) {
        rep.converged = false;
        rep.note = "fit residual exceeds 10x the expected model error";
    }
}

} // namespace

std::string to_string(AsymptoticRegime r)
{
    switch (r) {
    case AsymptoticRegime::origin_singular:
        return "origin_singular";
    case AsymptoticRegime::origin_critical:
        return "origin_critical";
    case AsymptoticRegime::origin_continuous:
        return "origin_continuous";
    case AsymptoticRegime::infinity:
        return "infinity";
    }
    return "unknown";
}

void AsymptoticReport::write_csv_header(std::ostream& os)
{
    os << "regime,n,s,lambda,constant_cf,constant_fit,rel_dev,r_lo,r_hi,samples\n";
}

void AsymptoticReport::write_csv_row(std::ostream& os) const
{
    os << std::setprecision(17) << to_string(regime) << ',' << params.n << ',' << params.s << ','
       << params.lambda << ',' << constant_closed_form << ',' << constant_extrapolated << ',' << rel_deviation
       << ',' << r_lo << ',' << r_hi << ',' << samples << '\n';
}

double origin_constant(const KernelParams& p)
{
    p.validate();
    const double half = 0.5 * p.n;
    switch (p.regime()) {
    case Regime::singular:
        return gamma(half - p.s) / (std::pow(kPi, half) * std::pow(2.0, 2.0 * p.s) * gamma(p.s));
    case Regime::critical:
        return 1.0 / (std::pow(4.0 * kPi, half) * gamma(half));
    case Regime::continuous:
        return log_bessel_kernel_origin(p);
    }
    return 0.0;
}

FarFieldLaw infinity_prefactor(const KernelParams& p)
{
    p.validate();
    FarFieldLaw law;
    law.rate = std::sqrt(p.lambda - 1.0);
    law.power = 0.5 * (p.n - 1);
    law.constant = std::pow(p.lambda - 1.0, 0.25 * (p.n - 3)) /
                   (std::pow(2.0, 0.5 * (p.n + 1)) * std::pow(kPi, 0.5 * (p.n - 1)));
    return law;
}

std::vector<double> origin_radii(const KernelParams& p, int points)
{
    switch (p.regime()) {
    case Regime::singular:
        return log_spaced(1e-120, 1e-6, points);
    case Regime::critical:
        return log_spaced(1e-280, 1e-6, points);
    case Regime::continuous:
        return log_spaced(1e-6, 1e-1, points);
    }
    return {};
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                                  double* rms)
{
    const auto rows = static_cast<Eigen::Index>(y.size());
    if (rows == 0 || x.size() != y.size())
        throw ValidationError("least squares needs matching, non-empty rows");
    const auto cols = static_cast<Eigen::Index>(x.front().size());
    if (rows < cols)
        throw ValidationError("least squares is underdetermined");
    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j)
            a(i, j) = x[i][j];
        b(i) = y[i];
    }
    Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    if (rms != nullptr)
        *rms = std::sqrt((a * c - b).squaredNorm() / static_cast<double>(rows));
    return {c.data(), c.data() + cols};
}

AsymptoticReport verify_origin(const KernelParams& p, const RadialProfile& profile)
{
    p.validate();
    Samples smp = finite_samples(profile);
    const Regime regime = p.regime();
    const double cf = origin_constant(p);
    if (regime == Regime::continuous) {
        AsymptoticReport rep = base_report(p, AsymptoticRegime::origin_continuous, smp);
        if (smp.r.empty())
            throw ValidationError("profile has no finite samples");
        rep.constant_closed_form = cf;
        rep.constant_extrapolated = smp.k.front();
        rep.coeffs = {smp.k.front()};
        finish(rep);
        return rep;
    }
    if (smp.r.size() < 4)
        throw ValidationError("origin fit needs at least 4 finite samples");
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    AsymptoticReport rep;
    if (regime == Regime::singular) {
        rep = base_report(p, AsymptoticRegime::origin_singular, smp);
        for (size_t i = 0; i < smp.r.size(); ++i) {
            const double lr = std::log(smp.r[i]);
            const double big_l = -2.0 * lr;
            x.push_back({1.0, 1.0 / big_l, 1.0 / (big_l * big_l)});
            // r^{2s-n} overflows for tiny r; scale in logs.
            y.push_back(std::exp(std::log(smp.k[i]) + std::log(big_l) - (2.0 * p.s - p.n) * lr));
        }
        double rms = 0.0;
        rep.coeffs = least_squares(x, y, &rms);
        rep.fit_residual = rms / std::fabs(rep.coeffs[0]);
    } else {
        rep = base_report(p, AsymptoticRegime::origin_critical, smp);
        for (size_t i = 0; i < smp.r.size(); ++i) {
            const double l1 = -std::log(smp.r[i]);
            x.push_back({std::log(l1), 1.0, 1.0 / l1});
            y.push_back(smp.k[i]);
        }
        double rms = 0.0;
        rep.coeffs = least_squares(x, y, &rms);
        double mean = 0.0;
        for (double v : y)
            mean += v / static_cast<double>(y.size());
        rep.fit_residual = rms / mean;
    }
    rep.constant_closed_form = cf;
    rep.constant_extrapolated = rep.coeffs[0];
    finish(rep);
    return rep;
}

AsymptoticReport verify_infinity(const KernelParams& p, const RadialProfile& profile)
{
    p.validate();
    Samples smp = finite_samples(profile);
    AsymptoticReport rep = base_report(p, AsymptoticRegime::infinity, smp);
    if (smp.r.size() < 3)
        throw ValidationError("far-field fit needs at least 3 finite samples");
    const FarFieldLaw law = infinity_prefactor(p);
    const double gap = std::sqrt(p.lambda) - law.rate;
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (size_t i = 0; i < smp.r.size(); ++i) {
        const double r = smp.r[i];
        const double log_r = law.power * std::log(r) + law.rate * r + std::log(smp.k[i]);
        if (log_r > 700.0) {
            rep.note = "window restricted: exp overflow";
            break;
        }
        x.push_back({1.0, std::exp(-gap * r)});
        y.push_back(std::exp(log_r));
    }
    if (y.size() < 3)
        throw ValidationError("far-field window too small after overflow restriction");
    rep.samples = static_cast<int>(y.size());
    rep.r_hi = smp.r[y.size() - 1];
    double rms = 0.0;
    rep.coeffs = least_squares(x, y, &rms);
    rep.fit_residual = rms / std::fabs(rep.coeffs[0]);
    rep.constant_closed_form = law.constant;
    rep.constant_extrapolated = rep.coeffs[0];
    finish(rep);
    return rep;
}

double fitted_decay_rate(const RadialProfile& profile)
{
    Samples smp = finite_samples(profile);
    const double power = 0.5 * (profile.params.n - 1);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (size_t i = 0; i < smp.r.size(); ++i) {
        x.push_back({1.0, smp.r[i]});
        y.push_back(-std::log(smp.k[i]) - power * std::log(smp.r[i]));
    }
    return least_squares(x, y)[1];
}

double fitted_power(const RadialProfile& profile)
{
    Samples smp = finite_samples(profile);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (size_t i = 0; i < smp.r.size(); ++i) {
        x.push_back({1.0, std::log(smp.r[i])});
        y.push_back(std::log(smp.k[i]));
    }
    return least_squares(x, y)[1];
}

double critical_inner_deviation(int n, double t)
{
    if (n < 1)
        throw ValidationError("dimension n must be >= 1");
    if (!(t > 0.0 && t < 1.0))
        throw ValidationError("t must lie in (0, 1)");
    const double s = 0.5 * n;
    const double lead = 1.0 / (gamma(s) * -std::log(t));
    return std::fabs(inner_mixture_H(s, t) / lead - 1.0);
}

} // namespace logpot
