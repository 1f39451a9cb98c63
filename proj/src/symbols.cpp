/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "logpot/symbols.hpp"

#include <algorithm>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "logpot/asymptotics.hpp"
#include "logpot/errors.hpp"
#include "logpot/fft.hpp"

namespace logpot {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPi2 = 4.0 * kPi * kPi;

double freq_r(double xi) { return kFourPi2 * xi * xi; }

double hom(double s, double r) { return r == 0.0 ? 0.0 : std::pow(r, s) * std::log(r); }

double inhom(double s, double lambda, double r) { return std::pow(lambda + r, s) * std::log(lambda + r); }

double bridge_m(double s, double lambda, double r)
{
    if (r == 0.0)
        return 0.0;
    if (r < lambda)
        return hom(s, r) / inhom(s, lambda, r);
    const double q = lambda / r;
    const double lr = std::log(r);
    return lr / (std::pow(1.0 + q, s) * (lr + std::log1p(q)));
}

// m - 1 without cancellation at large r.
double bridge_m_minus_one(double s, double lambda, double r)
{
    if (r < lambda)
        return bridge_m(s, lambda, r) - 1.0;
    const double q = lambda / r;
    const double lq = std::log1p(q);
    const double lr = std::log(r);
    const double ps = std::pow(1.0 + q, s);
    return (-lr * std::expm1(s * lq) - ps * lq) / (ps * (lr + lq));
}

// theta_lambda - 1 = expm1(s d) a/b + d/b, a = ln(l1 + r), b = ln(l2 + r), d = a - b.
double theta_lambda_minus_one(double s, double l1, double l2, double r)
{
    const double d = std::log1p((l1 - l2) / (l2 + r));
    const double a = std::log(l1 + r);
    const double b = std::log(l2 + r);
    return std::expm1(s * d) * a / b + d / b;
}

double theta1_err(double s, double lambda, double r)
{
    return std::expm1(s * std::log1p((1.0 - lambda) / (lambda + r))) / std::log(lambda + r);
}

double lit_fwd_err(double s, double lambda, double r)
{
    const double l1 = std::log1p(r);
    const double l2 = std::log(lambda + r);
    const double d = std::log1p((lambda - 1.0) / (1.0 + r));
    return (std::expm1(s * d) * l2 + d) / (1.0 + l1);
}

double lit_bwd_err(double s, double lambda, double r)
{
    const double l1 = std::log1p(r);
    const double l2 = std::log(lambda + r);
    const double d = std::log1p((1.0 - lambda) / (lambda + r));
    return (std::expm1(s * d) * (1.0 + l1) + d) / l2;
}

// Weights of the k-th derivative at 0 on the given offsets.
std::vector<double> fd_weights(int k, const std::vector<double>& x)
{
    const int n = static_cast<int>(x.size()) - 1;
    std::vector<std::vector<double>> c(n + 1, std::vector<double>(k + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0];
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, k);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i];
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int m = mn; m >= 1; --m)
                    c[i][m] = c1 * (m * c[i - 1][m - 1] - c5 * c[i - 1][m]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int m = mn; m >= 1; --m)
                c[j][m] = (c4 * c[j][m] - m * c[j][m - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n + 1);
    for (int i = 0; i <= n; ++i)
        w[i] = c[i][k];
    return w;
}

struct Grid {
    double box = 0.0;
    int M = 0;
    double dx = 0.0;
};

Grid make_grid(int n, const SynthesisSpec& spec)
{
    if (spec.oversampling < 1)
        throw ValidationError("oversampling must be >= 1");
    Grid g;
    g.box = spec.box > 0.0 ? spec.box : (n == 1 ? 256.0 : n == 2 ? 64.0 : 96.0);
    // Band |eta| <= 2 has Nyquist rate 4.
    const double want = 4.0 * spec.oversampling * g.box;
    g.M = 16;
    while (g.M < want)
        g.M *= 2;
    g.dx = g.box / g.M;
    return g;
}

// Inverse transform of a radial symbol h(|eta|) supported in |eta| <= 2.
DyadicBlock synthesize_block(int n, const std::function<double(double)>& h, const Grid& g, bool keep)
{
    DyadicBlock b;
    b.x_step = g.dx;
    const int M = g.M;
    if (n == 1) {
        std::vector<Complex> a(M);
        for (int m = 0; m < M; ++m)
            a[m] = h(std::fabs(fft_index(m, M) / g.box));
        FftPlan plan({M});
        plan.backward(a.data());
        double l1 = 0.0;
        if (keep)
            b.grid_kernel.resize(M);
        for (int m = 0; m < M; ++m) {
            const double v = a[m].real() / g.box;
            l1 += std::fabs(v);
            if (keep)
                b.grid_kernel[fft_index(m, M) + M / 2] = v;
        }
        b.l1_norm = l1 * g.dx;
    } else if (n == 2) {
        std::vector<Complex> a(static_cast<size_t>(M) * M);
        for (int m1 = 0; m1 < M; ++m1) {
            const double e1 = fft_index(m1, M) / g.box;
            for (int m2 = 0; m2 < M; ++m2) {
                const double e2 = fft_index(m2, M) / g.box;
                a[static_cast<size_t>(m1) * M + m2] = h(std::hypot(e1, e2));
            }
        }
        FftPlan plan({M, M});
        plan.backward(a.data());
        const double scale = 1.0 / (g.box * g.box);
        double l1 = 0.0;
        if (keep)
            b.grid_kernel.assign(M, 0.0);
        for (int m1 = 0; m1 < M; ++m1) {
            double row = 0.0;
            for (int m2 = 0; m2 < M; ++m2) {
                const double v = a[static_cast<size_t>(m1) * M + m2].real() * scale;
                l1 += std::fabs(v);
                row += v;
            }
            if (keep)
                b.grid_kernel[fft_index(m1, M) + M / 2] = row * g.dx;
        }
        b.l1_norm = l1 * g.dx * g.dx;
    } else if (n == 3) {
        // g(x) = (2/x) int h(eta) eta sin(2 pi x eta) d eta; h is flat at the
        // ends of its support, so the trapezoid rule converges spectrally.
        constexpr int kNodes = 2048;
        const double lo = 0.0;
        const double hi = 2.0;
        const double de = (hi - lo) / kNodes;
        std::vector<double> eta, w;
        for (int i = 1; i < kNodes; ++i) {
            const double e = lo + i * de;
            const double v = h(e);
            if (v != 0.0) {
                eta.push_back(e);
                w.push_back(v * de);
            }
        }
        const int count = M / 2;
        b.grid_kernel.assign(count, 0.0);
        double l1 = 0.0;
        for (int i = 0; i < count; ++i) {
            const double x = i * g.dx;
            double acc = 0.0;
            if (i == 0) {
                for (size_t q = 0; q < eta.size(); ++q)
                    acc += w[q] * 4.0 * kPi * eta[q] * eta[q];
            } else {
                for (size_t q = 0; q < eta.size(); ++q)
                    acc += w[q] * eta[q] * std::sin(2.0 * kPi * x * eta[q]);
                acc *= 2.0 / x;
            }
            b.grid_kernel[i] = acc;
            l1 += std::fabs(acc) * x * x;
        }
        b.l1_norm = 4.0 * kPi * l1 * g.dx;
        if (!keep)
            b.grid_kernel.clear();
    } else {
        throw ValidationError("block synthesis supports n in {1, 2, 3}");
    }
    return b;
}

// Transform of a stored block at scaled frequency eta.
double block_transform(int n, const DyadicBlock& b, double eta)
{
    const auto& k = b.grid_kernel;
    if (k.empty())
        throw ContractError("block kernels were not kept");
    double acc = 0.0;
    if (n == 3) {
        if (eta == 0.0) {
            for (size_t i = 1; i < k.size(); ++i) {
                const double x = i * b.x_step;
                acc += 4.0 * kPi * k[i] * x * x;
            }
            return acc * b.x_step;
        }
        for (size_t i = 1; i < k.size(); ++i) {
            const double x = i * b.x_step;
            acc += k[i] * x * std::sin(2.0 * kPi * eta * x);
        }
        return 2.0 / eta * acc * b.x_step;
    }
    const int half = static_cast<int>(k.size()) / 2;
    for (size_t i = 0; i < k.size(); ++i) {
        const double x = (static_cast<int>(i) - half) * b.x_step;
        acc += k[i] * std::cos(2.0 * kPi * eta * x);
    }
    return acc * b.x_step;
}

DyadicBlockSet synthesize(const SymbolDescriptor& desc, const DyadicPartition& part, const SynthesisSpec& spec,
                          bool parallel)
{
    desc.params.validate();
    if (!desc.has_deviation())
        throw ValidationError("symbol " + to_string(desc.id) + " has no L1 deviation to synthesize");
    if (!(part.j_min < 0 && part.j_max > 0))
        throw ValidationError("partition needs j_min < 0 < j_max");
    const int n = desc.params.n;
    const Grid g = make_grid(n, spec);
    DyadicBlockSet set;
    set.n = n;
    const int count = part.j_max - part.j_min + 1;
    set.blocks.resize(count);
    bool failed = false;
    std::string error;
    auto work = [&](int idx) {
        const int j = part.j_min + idx;
        auto h = [&](double eta) {
            const double p = dyadic_phi(eta);
            if (p == 0.0)
                return 0.0;
            const double xi = std::ldexp(eta, j);
            return p * (j <= 0 ? desc.low_part(xi) : desc.high_part(xi));
        };
        set.blocks[idx] = synthesize_block(n, h, g, spec.keep_kernels || n == 3);
        set.blocks[idx].j = j;
    };
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int idx = 0; idx < count; ++idx) {
        try {
            work(idx);
        } catch (const std::exception& e) {
#pragma omp critical(logpot_synthesis_error)
            {
                failed = true;
                error = e.what();
            }
        }
    }
    if (failed)
        throw std::runtime_error("block synthesis failed: " + error);
    set.cutoff_coeff = desc.cutoff_coeff();
    set.cutoff = synthesize_block(n, dyadic_chi, g, true);
    set.cutoff.j = 0;
    set.cutoff_l1 = set.cutoff.l1_norm;
    set.total_l1 = std::fabs(set.cutoff_coeff) * set.cutoff_l1;
    for (const auto& b : set.blocks)
        set.total_l1 += b.l1_norm;

    const int hi_lo = std::max(1, part.j_max - 5);
    const int lo_hi = std::min(-1, part.j_min + 10);
    set.high_slope = block_slope(set, hi_lo, part.j_max);
    set.low_slope = block_slope(set, part.j_min, lo_hi);
    const double last = set.blocks.back().l1_norm;
    const double first = set.blocks.front().l1_norm;
    const double high_tail = set.high_slope < 0.0 ? last / (std::exp2(-set.high_slope) - 1.0) : kInf;
    const double low_tail = set.low_slope > 0.0 ? first / (std::exp2(set.low_slope) - 1.0) : kInf;
    set.converged = high_tail < spec.tol * set.total_l1 && low_tail < spec.tol * set.total_l1;
    if (!set.converged) {
        set.diagnostic = "tails not summable within tolerance: high slope " + std::to_string(set.high_slope) +
                         ", low slope " + std::to_string(set.low_slope);
    }
    if (!spec.keep_kernels && n != 3) {
        for (auto& b : set.blocks)
            b.grid_kernel.clear();
    }
    return set;
}

} // namespace

std::string to_string(SymbolId id)
{
    switch (id) {
    case SymbolId::m_log_homog:
        return "m_log_homog";
    case SymbolId::m_log_inhomog:
        return "m_log_inhomog";
    case SymbolId::bridge_ratio:
        return "bridge_ratio";
    case SymbolId::theta_lambda:
        return "theta_lambda";
    case SymbolId::theta1:
        return "theta1";
    case SymbolId::theta2:
        return "theta2";
    case SymbolId::lit_ratio_fwd:
        return "lit_ratio_fwd";
    case SymbolId::lit_ratio_bwd:
        return "lit_ratio_bwd";
    }
    return "unknown";
}

SymbolId parse_symbol_id(const std::string& name)
{
    if (name == "bridge")
        return SymbolId::bridge_ratio;
    for (auto id : {SymbolId::m_log_homog, SymbolId::m_log_inhomog, SymbolId::bridge_ratio, SymbolId::theta_lambda,
                    SymbolId::theta1, SymbolId::theta2, SymbolId::lit_ratio_fwd, SymbolId::lit_ratio_bwd}) {
        if (to_string(id) == name)
            return id;
    }
    throw ValidationError("unknown symbol '" + name + "'");
}

SymbolDescriptor SymbolDescriptor::make(SymbolId id, const KernelParams& p, double aux)
{
    p.validate();
    SymbolDescriptor d;
    d.id = id;
    d.params = p;
    d.N = p.n + 2;
    const double s = p.s;
    const double lam = p.lambda;
    const double m0 = inhom(s, lam, 0.0);
    switch (id) {
    case SymbolId::m_log_homog:
        d.value_at_zero = 0.0;
        break;
    case SymbolId::m_log_inhomog:
        d.value_at_zero = m0;
        break;
    case SymbolId::bridge_ratio:
        d.delta2 = 2.0 * s;
        d.value_at_zero = 0.0;
        break;
    case SymbolId::theta_lambda:
        if (aux != 0.0)
            d.lambda2 = aux;
        if (!(d.lambda2 > 1.0))
            throw ValidationError("lambda2 must exceed 1");
        d.value_at_zero = m0 / inhom(s, d.lambda2, 0.0);
        break;
    case SymbolId::theta1:
        d.value_at_zero = 1.0 / m0;
        break;
    case SymbolId::theta2:
        if (aux != 0.0)
            d.eps = aux;
        if (!(d.eps > 0.0))
            throw ValidationError("eps must be positive");
        d.delta1 = 0.5 * d.eps;
        d.value_at_zero = m0;
        break;
    case SymbolId::lit_ratio_fwd:
        d.value_at_zero = m0;
        break;
    case SymbolId::lit_ratio_bwd:
        d.value_at_zero = 1.0 / m0;
        break;
    }
    return d;
}

double SymbolDescriptor::operator()(double xi) const
{
    if (!(xi >= 0.0))
        throw ValidationError("|xi| must be non-negative");
    const double s = params.s;
    const double lam = params.lambda;
    const double r = freq_r(xi);
    switch (id) {
    case SymbolId::m_log_homog:
        return hom(s, r);
    case SymbolId::m_log_inhomog:
        return inhom(s, lam, r);
    case SymbolId::bridge_ratio:
        return bridge_m(s, lam, r);
    case SymbolId::theta_lambda:
        return 1.0 + theta_lambda_minus_one(s, lam, lambda2, r);
    case SymbolId::theta1:
        return std::exp(s * (std::log1p(r) - std::log(lam + r))) / std::log(lam + r);
    case SymbolId::theta2:
        return std::exp(s * std::log(lam + r) - (s + 0.5 * eps) * std::log1p(r)) * std::log(lam + r);
    case SymbolId::lit_ratio_fwd:
        return std::exp(s * (std::log(lam + r) - std::log1p(r))) * std::log(lam + r) / (1.0 + std::log1p(r));
    case SymbolId::lit_ratio_bwd:
        return std::exp(s * (std::log1p(r) - std::log(lam + r))) * (1.0 + std::log1p(r)) / std::log(lam + r);
    }
    return 0.0;
}

bool SymbolDescriptor::has_deviation() const
{
    return id != SymbolId::m_log_homog && id != SymbolId::m_log_inhomog;
}

double SymbolDescriptor::low_part(double xi) const
{
    if (id == SymbolId::bridge_ratio)
        return (*this)(xi);
    return deviation(xi);
}

double SymbolDescriptor::high_part(double xi) const
{
    if (id == SymbolId::bridge_ratio)
        return bridge_m_minus_one(params.s, params.lambda, freq_r(xi));
    return deviation(xi);
}

double SymbolDescriptor::cutoff_coeff() const
{
    return id == SymbolId::bridge_ratio ? -1.0 : 0.0;
}

double SymbolDescriptor::deviation(double xi) const
{
    const double s = params.s;
    const double lam = params.lambda;
    const double r = freq_r(xi);
    const double chi = dyadic_chi(xi);
    switch (id) {
    case SymbolId::bridge_ratio:
        return bridge_m_minus_one(s, lam, r);
    case SymbolId::theta_lambda:
        return theta_lambda_minus_one(s, lam, lambda2, r) - (value_at_zero - 1.0) * chi;
    case SymbolId::theta1:
        return theta1_err(s, lam, r) - theta1_err(s, lam, 0.0) * chi;
    case SymbolId::theta2:
        return (*this)(xi)-value_at_zero * chi;
    case SymbolId::lit_ratio_fwd:
        return lit_fwd_err(s, lam, r) - lit_fwd_err(s, lam, 0.0) * chi;
    case SymbolId::lit_ratio_bwd:
        return lit_bwd_err(s, lam, r) - lit_bwd_err(s, lam, 0.0) * chi;
    default:
        throw ValidationError("symbol " + to_string(id) + " has no L1 deviation");
    }
}

double eval_symbol(const SymbolDescriptor& desc, double xi_norm) { return desc(xi_norm); }

double dyadic_chi(double t)
{
    t = std::fabs(t);
    if (t <= 1.0)
        return 1.0;
    if (t >= 2.0)
        return 0.0;
    // S(x) = e^{-1/x} / (e^{-1/x} + e^{-1/(1-x)}) at x = 2 - t.
    const double x = 2.0 - t;
    return 1.0 / (1.0 + std::exp(1.0 / x - 1.0 / (1.0 - x)));
}

double dyadic_phi(double t) { return dyadic_chi(t) - dyadic_chi(2.0 * t); }

double DyadicPartition::sum(double xi) const
{
    double acc = 0.0;
    for (int j = j_min; j <= j_max; ++j)
        acc += phi(j, xi);
    return acc;
}

DyadicPartition build_partition(int j_min, int j_max)
{
    if (!(j_min < 0 && 0 < j_max))
        throw ValidationError("partition needs j_min < 0 < j_max");
    return DyadicPartition{j_min, j_max};
}

SymbolMinimum symbol_min_check(double s)
{
    if (!(s > 0.0))
        throw ValidationError("s must be positive");
    SymbolMinimum out;
    out.t_star = std::exp(-1.0 / s);
    out.min_value = -1.0 / (std::numbers::e * s);
    out.c0 = 2.0 / (std::numbers::e * s);
    const auto grid = log_spaced(1e-12, 10.0, 20001);
    for (double t : grid) {
        const double v = std::pow(t, s) * std::log(t);
        if (v < out.min_value - 1e-12 * std::fabs(out.min_value))
            throw ContractError("grid search found t^s ln t below the closed-form minimum");
    }
    return out;
}

DyadicBlockSet synthesize_l1_kernel(const SymbolDescriptor& desc, const DyadicPartition& part,
                                    const SynthesisSpec& spec)
{
    return synthesize(desc, part, spec, true);
}

DyadicBlockSet synthesize_l1_kernel_serial(const SymbolDescriptor& desc, const DyadicPartition& part,
                                           const SynthesisSpec& spec)
{
    return synthesize(desc, part, spec, false);
}

double block_slope(const DyadicBlockSet& set, int j_lo, int j_hi)
{
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (const auto& b : set.blocks) {
        if (b.j >= j_lo && b.j <= j_hi && b.l1_norm > 0.0) {
            x.push_back({1.0, static_cast<double>(b.j)});
            y.push_back(std::log2(b.l1_norm));
        }
    }
    if (y.size() < 2)
        throw ValidationError("slope window holds fewer than 2 blocks");
    return least_squares(x, y)[1];
}

double DyadicBlockSet::reconstruct(double xi) const
{
    double acc = 0.0;
    for (const auto& b : blocks) {
        const double eta = std::ldexp(xi, -b.j);
        if (eta > 2.5)
            continue;
        acc += block_transform(n, b, eta);
    }
    if (cutoff_coeff != 0.0 && xi <= 2.5)
        acc += cutoff_coeff * block_transform(n, cutoff, xi);
    return acc;
}

void DyadicBlockSet::write_csv(std::ostream& os) const
{
    os << "j,l1_norm,slope_window_flag\n" << std::setprecision(17);
    const int j_min = blocks.empty() ? 0 : blocks.front().j;
    const int j_max = blocks.empty() ? 0 : blocks.back().j;
    for (const auto& b : blocks) {
        std::string flag = "none";
        if (b.j >= std::max(1, j_max - 5))
            flag = "high";
        else if (b.j <= std::min(-1, j_min + 10))
            flag = "low";
        os << b.j << ',' << b.l1_norm << ',' << flag << '\n';
    }
}

double bernstein_rhs(const SymbolDescriptor& desc, int j, int N)
{
    if (N < 0)
        throw ValidationError("N must be non-negative");
    auto h = [&](double eta) {
        const double p = dyadic_phi(eta);
        if (p == 0.0)
            return 0.0;
        const double xi = std::ldexp(eta, j);
        return p * (j <= 0 ? desc.low_part(xi) : desc.high_part(xi));
    };
    constexpr double step = 0.01;
    double total = 0.0;
    for (int k = 0; k <= N; ++k) {
        const int m = 3 + k / 2;
        std::vector<double> off;
        for (int i = -m; i <= m; ++i)
            off.push_back(i * step);
        const auto w = fd_weights(k, off);
        double sup = 0.0;
        for (double eta = 0.5; eta <= 2.0; eta += 0.005) {
            double d = 0.0;
            for (size_t i = 0; i < off.size(); ++i)
                d += w[i] * h(eta + off[i]);
            sup = std::max(sup, std::fabs(d));
        }
        total += sup;
    }
    return total;
}

double bridge_w_hat(const KernelParams& p, double xi)
{
    const double r = freq_r(xi);
    const double c0 = 2.0 / (std::numbers::e * p.s);
    return inhom(p.s, p.lambda, r) / (hom(p.s, r) + c0);
}

double bridge_mu_hat(const KernelParams& p, double xi)
{
    return 2.0 / (std::numbers::e * p.s) * bridge_w_hat(p, xi);
}

double bridge_identity_check(const KernelParams& p, const std::vector<double>& xi_samples)
{
    p.validate();
    double worst = 0.0;
    for (double xi : xi_samples) {
        const double r = freq_r(xi);
        const double lhs = inhom(p.s, p.lambda, r);
        const double rhs = bridge_mu_hat(p, xi) + bridge_w_hat(p, xi) * hom(p.s, r);
        worst = std::max(worst, std::fabs(lhs - rhs) / (1.0 + std::fabs(lhs)));
    }
    return worst;
}

double slow_part_laplace(SlowPart id, double lambda, double xi)
{
    const double r = freq_r(xi);
    if (id == SlowPart::inv_log_shifted && !(lambda > 1.0))
        throw ValidationError("lambda must exceed 1");
    auto f = [&](double p) {
        if (id == SlowPart::inv_log_shifted)
            return std::pow(lambda + r, -p);
        return std::exp(-p) * std::pow(1.0 + r, -p);
    };
    // The exp_tail map is regular only for decay rates >= 1; rescale p by the rate.
    const double rate = id == SlowPart::inv_log_shifted ? std::log(lambda + r) : 1.0 + std::log1p(r);
    auto g = [&](double q) { return f(q / rate) / rate; };
    QuadratureSpec spec;
    spec.rel_tol = 1e-13;
    spec.abs_tol = 1e-300;
    spec.transform = Transform::exp_tail;
    QuadResult q = integrate(g, 0.0, kInf, spec);
    if (!q.converged)
        throw ConvergenceError("slow-part p-integral did not converge", q.value, q.err_estimate);
    return q.value;
}

void write_symbol_csv(std::ostream& os, const SymbolDescriptor& desc, const std::vector<double>& xi)
{
    os << "xi,value\n" << std::setprecision(17);
    for (double x : xi)
        os << x << ',' << desc(x) << '\n';
}

} // namespace logpot
