/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "logpot/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "logpot/errors.hpp"
#include "logpot/special_fn.hpp"

namespace logpot {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPi2 = 4.0 * kPi * kPi;

std::vector<int> shape_of(const SpectralGrid& g) { return std::vector<int>(g.n, g.M); }

double inhom_r(double s, double lambda, double r) { return std::pow(lambda + r, s) * std::log(lambda + r); }

double hom_r(double s, double r) { return r == 0.0 ? 0.0 : std::pow(r, s) * std::log(r); }

std::vector<double> lattice_symbol(const SpectralGrid& g, const Multiplier& m, bool parallel)
{
    const long count = static_cast<long>(g.size());
    std::vector<double> sym(count);
#pragma omp parallel for schedule(static) if (parallel)
    for (long i = 0; i < count; ++i)
        sym[i] = m.symbol(g.freq_norm(static_cast<size_t>(i)));
    if (m.homogeneous)
        sym[0] = 0.0;
    for (long i = 0; i < count; ++i) {
        if (std::isnan(sym[i])) {
            std::ostringstream msg;
            msg << "multiplier '" << m.name << "' is NaN at |xi| = " << g.freq_norm(static_cast<size_t>(i));
            throw ValidationError(msg.str());
        }
    }
    return sym;
}

SpectralField apply_impl(const SpectralField& u, const Multiplier& m, bool parallel)
{
    const auto sym = lattice_symbol(u.grid(), m, parallel);
    SpectralField out(u.grid());
    const auto& c = u.coeffs();
    auto& oc = out.mutable_coeffs();
    const long count = static_cast<long>(c.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (long i = 0; i < count; ++i)
        oc[i] = c[i] * sym[i];
    return out;
}

// Closed-form pieces of the radial integrals near zero and beyond the support.
// int_0^a rho^{p-1} d rho and int_0^a rho^{p-1} (-2 ln rho) d rho, p > 0.
double power_head(double p, double a) { return std::pow(a, p) / p; }
double log_power_head(double p, double a) { return -2.0 * std::pow(a, p) * (std::log(a) / p - 1.0 / (p * p)); }
// int_a^inf rho^{-q-1} d rho and with the -2 ln rho weight, q > 0.
double power_tail(double q, double a) { return std::pow(a, -q) / q; }
double log_power_tail(double q, double a) { return -2.0 * std::pow(a, -q) * (std::log(a) / q + 1.0 / (q * q)); }

} // namespace

SpectralGrid SpectralGrid::make(int n, double box, int M)
{
    SpectralGrid g{n, box, M};
    g.validate();
    return g;
}

void SpectralGrid::validate() const
{
    if (n < 1 || n > 3)
        throw ValidationError("grid dimension must be 1, 2 or 3");
    if (!(box > 0.0) || std::isinf(box))
        throw ValidationError("box length must be positive");
    if (M < 16 || (M & (M - 1)) != 0)
        throw ValidationError("points per axis must be a power of two >= 16");
}

size_t SpectralGrid::size() const
{
    size_t s = 1;
    for (int i = 0; i < n; ++i)
        s *= static_cast<size_t>(M);
    return s;
}

std::array<int, 3> SpectralGrid::freq_index(size_t idx) const
{
    std::array<int, 3> k{0, 0, 0};
    for (int a = n - 1; a >= 0; --a) {
        k[a] = fft_index(static_cast<int>(idx % M), M);
        idx /= M;
    }
    return k;
}

double SpectralGrid::freq_norm(size_t idx) const
{
    const auto k = freq_index(idx);
    double s = 0.0;
    for (int a = 0; a < n; ++a)
        s += static_cast<double>(k[a]) * k[a];
    return std::sqrt(s) / box;
}

SpectralField::SpectralField(const SpectralGrid& g) : grid_(g)
{
    grid_.validate();
    values_.assign(g.size(), 0.0);
}

SpectralField SpectralField::sample(const SpectralGrid& g, const std::function<double(const double* x)>& f)
{
    SpectralField u(g);
    auto& v = u.mutable_values();
    double x[3] = {0.0, 0.0, 0.0};
    for (size_t i = 0; i < v.size(); ++i) {
        size_t idx = i;
        for (int a = g.n - 1; a >= 0; --a) {
            x[a] = g.coord(static_cast<int>(idx % g.M));
            idx /= g.M;
        }
        v[i] = f(x);
    }
    return u;
}

void SpectralField::sync_values() const
{
    if (values_ok_)
        return;
    std::vector<Complex> a = coeffs_;
    FftPlan plan(shape_of(grid_));
    plan.backward(a.data());
    values_.resize(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        values_[i] = a[i].real();
    values_ok_ = true;
}

void SpectralField::sync_coeffs() const
{
    if (coeffs_ok_)
        return;
    coeffs_.assign(values_.begin(), values_.end());
    FftPlan plan(shape_of(grid_));
    plan.forward(coeffs_.data());
    const double inv = 1.0 / static_cast<double>(coeffs_.size());
    for (auto& c : coeffs_)
        c *= inv;
    coeffs_ok_ = true;
}

const std::vector<double>& SpectralField::values() const
{
    sync_values();
    return values_;
}

std::vector<double>& SpectralField::mutable_values()
{
    sync_values();
    coeffs_ok_ = false;
    return values_;
}

const std::vector<Complex>& SpectralField::coeffs() const
{
    sync_coeffs();
    return coeffs_;
}

std::vector<Complex>& SpectralField::mutable_coeffs()
{
    sync_coeffs();
    values_ok_ = false;
    return coeffs_;
}

double SpectralField::lp_norm(double p) const
{
    if (!(p >= 1.0))
        throw ValidationError("p must be >= 1");
    const auto& v = values();
    const double cell = std::pow(grid_.spacing(), grid_.n);
    const double peak = sup_norm();
    if (peak == 0.0)
        return 0.0;
    double acc = 0.0;
    for (double x : v)
        acc += std::pow(std::fabs(x) / peak, p);
    return peak * std::pow(acc * cell, 1.0 / p);
}

double SpectralField::sup_norm() const
{
    double m = 0.0;
    for (double x : values())
        m = std::max(m, std::fabs(x));
    return m;
}

double SpectralField::mean() const
{
    double acc = 0.0;
    for (double x : values())
        acc += x;
    return acc / static_cast<double>(values().size());
}

Multiplier inhom_multiplier(const KernelParams& p)
{
    p.validate();
    return {[s = p.s, l = p.lambda](double xi) { return inhom_r(s, l, kFourPi2 * xi * xi); }, false,
            "inhomogeneous"};
}

Multiplier hom_multiplier(double s)
{
    if (!(s > 0.0))
        throw ValidationError("s must be positive");
    return {[s](double xi) { return hom_r(s, kFourPi2 * xi * xi); }, true, "homogeneous"};
}

Multiplier bessel_power_multiplier(double lambda, double t)
{
    if (!(lambda > 0.0))
        throw ValidationError("lambda must be positive");
    return {[lambda, t](double xi) { return std::pow(lambda + kFourPi2 * xi * xi, t); }, false, "bessel_power"};
}

Multiplier log_multiplier(double lambda)
{
    if (!(lambda > 0.0))
        throw ValidationError("lambda must be positive");
    return {[lambda](double xi) { return std::log(lambda + kFourPi2 * xi * xi); }, false, "log"};
}

Multiplier frac_laplacian_multiplier(double s)
{
    if (!(s > 0.0))
        throw ValidationError("s must be positive");
    return {[s](double xi) { return std::pow(kFourPi2 * xi * xi, s); }, true, "frac_laplacian"};
}

Multiplier descriptor_multiplier(const SymbolDescriptor& d)
{
    const bool homog = d.id == SymbolId::m_log_homog;
    return {[d](double xi) { return d(xi); }, homog, to_string(d.id)};
}

Multiplier bridge_w_multiplier(const KernelParams& p)
{
    return {[p](double xi) { return bridge_w_hat(p, xi); }, false, "bridge_w"};
}

Multiplier bridge_mu_multiplier(const KernelParams& p)
{
    return {[p](double xi) { return bridge_mu_hat(p, xi); }, false, "bridge_mu"};
}

SpectralField apply_multiplier(const SpectralField& u, const Multiplier& m) { return apply_impl(u, m, true); }

SpectralField apply_multiplier_serial(const SpectralField& u, const Multiplier& m)
{
    return apply_impl(u, m, false);
}

SpectralField solve_inhomogeneous(const SpectralField& f, const KernelParams& p)
{
    p.validate();
    Multiplier inv{[s = p.s, l = p.lambda](double xi) { return 1.0 / inhom_r(s, l, kFourPi2 * xi * xi); }, false,
                   "inverse_inhomogeneous"};
    return apply_multiplier(f, inv);
}

void audit_homogeneous_lattice(const SpectralGrid& g, double tol)
{
    g.validate();
    for (size_t i = 1; i < g.size(); ++i) {
        const double w = 2.0 * kPi * g.freq_norm(i);
        if (std::fabs(w - 1.0) < tol) {
            const auto k = g.freq_index(i);
            std::ostringstream msg;
            msg << "symbol zero on lattice at k = (" << k[0];
            for (int a = 1; a < g.n; ++a)
                msg << ", " << k[a];
            msg << ")";
            throw ContractError(msg.str());
        }
    }
}

SpectralField solve_homogeneous(const SpectralField& f, const KernelParams& p, ZeroModeRule rule)
{
    p.validate();
    audit_homogeneous_lattice(f.grid());
    const auto& c = f.coeffs();
    if (rule == ZeroModeRule::require_zero_mean) {
        double peak = 0.0;
        for (const auto& z : c)
            peak = std::max(peak, std::abs(z));
        if (std::abs(c[0]) > 1e-12 * std::max(peak, 1e-300))
            throw ContractError("polynomial ambiguity: right-hand side has non-zero lattice mean");
    }
    Multiplier inv{[s = p.s](double xi) {
                       const double h = hom_r(s, kFourPi2 * xi * xi);
                       return h == 0.0 ? 0.0 : 1.0 / h;
                   },
                   true, "inverse_homogeneous"};
    return apply_multiplier(f, inv);
}

double apriori_constant(const SpectralGrid& g, const KernelParams& p)
{
    p.validate();
    double c = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
        const double r = kFourPi2 * std::pow(g.freq_norm(i), 2);
        c = std::max(c, inhom_r(p.s, p.lambda, r) / (std::fabs(hom_r(p.s, r)) + 1.0));
    }
    return c;
}

SpectralField convolve_radial_kernel_1d(const SpectralField& f, const std::function<double(double)>& kernel)
{
    const SpectralGrid& g = f.grid();
    if (g.n != 1)
        throw ValidationError("kernel convolution oracle is one-dimensional");
    const int M = g.M;
    const double h = g.spacing();
    std::vector<double> samples(M / 2 + 1);
    bool failed = false;
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d <= M / 2; ++d) {
        try {
            samples[d] = kernel(d * h);
        } catch (const std::exception&) {
            failed = true;
        }
    }
    if (failed)
        throw ConvergenceError("kernel evaluation failed during convolution", 0.0, 0.0);
    std::vector<Complex> kv(M);
    for (int m = 0; m < M; ++m)
        kv[m] = samples[std::min(m, M - m)] * h;
    FftPlan plan({M});
    plan.forward(kv.data());
    SpectralField out(g);
    const auto& fc = f.coeffs();
    auto& oc = out.mutable_coeffs();
    // Circular convolution: the kernel's DFT acts diagonally on the coefficients.
    for (int m = 0; m < M; ++m)
        oc[m] = fc[m] * kv[m];
    return out;
}

double frac_constant_c(int n, double s)
{
    if (n < 1)
        throw ValidationError("dimension n must be >= 1");
    if (!(s > 0.0 && s < 1.0))
        throw ValidationError("s must lie in (0, 1)");
    return std::pow(4.0, s) * std::pow(kPi, -0.5 * n) * s * gamma(0.5 * n + s) / gamma(1.0 - s);
}

double frac_constant_b(int n, double s)
{
    if (n < 1)
        throw ValidationError("dimension n must be >= 1");
    if (!(s > 0.0 && s < 1.0))
        throw ValidationError("s must lie in (0, 1)");
    return std::log(4.0) + 1.0 / s + digamma(1.0 - s) + digamma(0.5 * n + s);
}

PointwiseResult apply_pointwise_frac_log(const std::function<double(double)>& u, double x, double s,
                                         double support, const QuadratureSpec& spec)
{
    if (!(s > 0.0 && s < 1.0))
        throw ValidationError("s must lie in (0, 1)");
    if (!(support > 0.0))
        throw ValidationError("support radius must be positive");
    spec.validate();
    const double ux = u(x);
    auto diff = [&](double rho) { return 2.0 * ux - u(x + rho) - u(x - rho); };

    // Second difference near zero: a rho^2 + b rho^4 through rho0 and 2 rho0.
    const double rho0 = 1e-2;
    const double d1 = diff(rho0);
    const double d2 = diff(2.0 * rho0);
    const double b4 = (d2 - 4.0 * d1) / (12.0 * std::pow(rho0, 4));
    const double a2 = (d1 - b4 * std::pow(rho0, 4)) / (rho0 * rho0);
    const double q = 2.0 * s;
    double frac = a2 * power_head(2.0 - q, rho0) + b4 * power_head(4.0 - q, rho0);
    double logp = a2 * log_power_head(2.0 - q, rho0) + b4 * log_power_head(4.0 - q, rho0);

    // Beyond rho_out both shifted points leave the support.
    const double rho_out = std::fabs(x) + support;
    std::vector<double> pts = {rho0};
    if (rho_out > 1.0)
        pts.push_back(1.0);
    pts.push_back(std::max(rho_out, rho0 * 2.0));
    QuadResult qf = integrate([&](double r) { return diff(r) * std::pow(r, -1.0 - q); }, pts, spec);
    QuadResult ql =
        integrate([&](double r) { return diff(r) * std::pow(r, -1.0 - q) * (-2.0 * std::log(r)); }, pts, spec);
    if (!qf.converged || !ql.converged) {
        throw ConvergenceError("pointwise singular integral did not converge", qf.value + frac,
                               qf.err_estimate + ql.err_estimate);
    }
    const double edge = pts.back();
    frac += qf.value + 2.0 * ux * power_tail(q, edge);
    logp += ql.value + 2.0 * ux * log_power_tail(q, edge);

    const double c = frac_constant_c(1, s);
    const double b = frac_constant_b(1, s);
    PointwiseResult out;
    out.frac_part = c * frac;
    out.log_part = logp;
    out.value = c * logp + b * out.frac_part;
    out.err = c * (ql.err_estimate + std::fabs(b) * qf.err_estimate);
    return out;
}

} // namespace logpot
