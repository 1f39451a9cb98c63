/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "logpot/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "logpot/errors.hpp"
#include "logpot/special_fn.hpp"

namespace logpot {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn4 = 1.3862943611198906;
const double kLog4Pi = std::log(4.0 * kPi);

// Panel tolerance for inner (line) integrals and the outer alpha integral.
constexpr double kInnerTol = 1e-12;
constexpr double kOuterTol = 1e-11;

double golden_max(const std::function<double(double)>& f, double a, double b, double c, double fb)
{
    const double g = 0.3819660112501051;
    for (int it = 0; it < 60 && (c - a) > 1e-4 * std::max(1.0, std::fabs(b)); ++it) {
        const bool right = (c - b) > (b - a);
        const double x = right ? b + g * (c - b) : b - g * (b - a);
        const double fx = f(x);
        if (fx > fb) {
            if (right)
                a = b;
            else
                c = b;
            b = x;
            fb = fx;
        } else {
            if (right)
                c = x;
            else
                a = x;
        }
    }
    return b;
}

// Pole-plus-branch-cut form of the Fourier-Bessel integral; valid for 0 < s < 1.
double log_kernel_cut(int n, double s, double lambda, double r, double& err)
{
    const double nu = 0.5 * n - 1.0;
    const double sq = std::sqrt(lambda);
    const double gap = std::sqrt(lambda - 1.0);
    const double pole = std::pow(r, 1.0 - 0.5 * n) / gap * std::pow(gap / (2.0 * kPi), 0.5 * n) *
                        bessel_k(nu, r * gap);
    const double sps = std::sin(kPi * s);
    const double cps = std::cos(kPi * s);
    auto f = [&](double y) {
        const double w = std::exp(y);
        const double tt = std::sqrt(w + lambda);
        const double dz = r * w / (tt + sq);
        const double bk = bessel_k_scaled(nu, r * tt) * std::exp(-dz);
        const double t = tt / (2.0 * kPi);
        return std::pow(t, 0.5 * n - 1.0) * bk * std::exp((1.0 - s) * y) * (y * sps + kPi * cps) /
               (y * y + kPi * kPi);
    };
    QuadratureSpec spec;
    spec.rel_tol = kInnerTol;
    spec.abs_tol = 1e-300;
    spec.transform = Transform::exp_tail;
    const double c = 1.0 / (1.0 - s);
    QuadResult left = integrate([&](double u) { return c * f(-c * u); }, 0.0, kInf, spec);
    const double x = 60.0 / r;
    const double w_max = 1.1 * (x + 2.0 * sq) * (x + 2.0 * sq) + lambda;
    const double y_max = std::log(w_max);
    std::vector<double> pts;
    for (double y = 0.0; y < y_max; y += 2.0)
        pts.push_back(y);
    pts.push_back(y_max);
    spec.transform = Transform::none;
    QuadResult right = integrate(f, pts, spec);
    const double scale = std::pow(r, 1.0 - 0.5 * n) * std::exp(-r * sq) / (2.0 * kPi * kPi);
    const double e = scale * (left.value + right.value);
    err = scale * (left.err_estimate + right.err_estimate);
    if (!left.converged || !right.converged)
        throw ConvergenceError("branch-cut integral did not converge", pole + e, err);
    return pole + e;
}

KernelValue shifted_heat(int n, double lambda, double alpha, double r)
{
    const double c = alpha - 0.5 * n;
    if (r == 0.0 && c <= 0.0)
        throw ValidationError("shifted kernel is singular at r = 0 when alpha <= n/2");
    const double lr = r > 0.0 ? std::log(r) : -kInf;
    const double ll = std::log(lambda);
    auto phi = [=](double x) {
        double v = c * x - lambda * std::exp(x);
        if (r > 0.0)
            v -= std::exp(2.0 * lr - x - kLn4);
        return v;
    };
    double lt;
    if (r == 0.0) {
        lt = std::log(c / lambda);
    } else {
        const double root = std::hypot(c, std::exp(0.5 * ll + lr));
        lt = c >= 0.0 ? std::log((c + root) / (2.0 * lambda)) : 2.0 * lr - std::log(2.0 * (root - c));
    }
    LineIntegral li = integrate_exp_line(phi, lt, -kInf, kInf, kInnerTol);
    const double logv = li.log_value() - 0.5 * n * kLog4Pi - log_gamma(alpha);
    KernelValue kv;
    kv.value = std::exp(logv);
    kv.err = kv.value * (li.err / std::max(li.value, 1e-300));
    kv.route = Route::heat;
    kv.converged = li.converged;
    return kv;
}

KernelValue log_kernel_heat(const KernelParams& p, double r)
{
    const double s = p.s;
    const double half = 0.5 * p.n;
    const double ll = std::log(p.lambda);
    std::vector<double> pts = {s};
    const double big_l = r > 0.0 && r < 1.0 ? -std::log(r) : 1.0;
    auto add_geometric = [&](double from, double to) {
        for (double d = 0.5 / big_l; from + d < to; d *= 2.0)
            pts.push_back(from + d);
        pts.push_back(to);
    };
    double a = s;
    if (half > s) {
        add_geometric(s, half);
        a = half;
    }
    const double alpha_peak = r * std::sqrt(p.lambda) / (2.0 * std::sqrt(ll));
    const double a0 = std::max(s + std::max(50.0, std::log(1e14) / ll), alpha_peak + 30.0);
    add_geometric(a, a + 4.0);
    for (double x = pts.back() + 4.0; x < a0; x += 4.0)
        pts.push_back(x);
    double err_inner = 0.0;
    bool inner_ok = true;
    auto g = [&](double alpha) {
        KernelValue kv = shifted_heat(p.n, p.lambda, alpha, r);
        err_inner = std::max(err_inner, kv.err);
        inner_ok = inner_ok && kv.converged;
        return kv.value;
    };
    QuadratureSpec spec;
    spec.rel_tol = kOuterTol;
    spec.abs_tol = 1e-300;
    QuadResult q = integrate(g, pts, spec);
    // Extend while the tail still matters; G_alpha decays at least like lambda^{-alpha}.
    double hi = pts.back();
    for (int k = 0; k < 200; ++k) {
        QuadratureSpec ext = spec;
        ext.abs_tol = 1e-3 * kOuterTol * std::fabs(q.value);
        QuadResult t = integrate(g, hi, hi + 10.0, ext);
        q += t;
        hi += 10.0;
        if (std::fabs(t.value) < 1e-3 * kOuterTol * std::fabs(q.value))
            break;
    }
    KernelValue kv;
    kv.value = q.value;
    kv.err = q.err_estimate + err_inner * (hi - s) + g(hi) / ll;
    kv.route = Route::heat;
    kv.converged = q.converged && inner_ok;
    return kv;
}

double log_inner_H(double s, double t)
{
    const double lt = std::log(t);
    auto phi = [=](double q) { return q * lt - log_gamma(s + q); };
    LineIntegral li = integrate_exp_line(phi, std::max(0.0, t - s), 0.0, kInf, kInnerTol);
    return li.log_value();
}

KernelValue log_kernel_laplace(const KernelParams& p, double r)
{
    const double c = p.s - 0.5 * p.n;
    const double lr = r > 0.0 ? std::log(r) : -kInf;
    const double lambda = p.lambda;
    auto phi = [&](double x) {
        double v = c * x - lambda * std::exp(x);
        if (r > 0.0)
            v -= std::exp(2.0 * lr - x - kLn4);
        return v + log_inner_H(p.s, std::exp(x));
    };
    double lt;
    if (r == 0.0) {
        lt = std::log(std::max(c, 0.1) / lambda);
    } else {
        const double root = std::hypot(c, std::exp(0.5 * std::log(lambda) + lr));
        lt = c >= 0.0 ? std::log((c + root) / (2.0 * lambda)) : 2.0 * lr - std::log(2.0 * (root - c));
    }
    LineIntegral li = integrate_exp_line(phi, lt, -kInf, kInf, 1e-11);
    KernelValue kv;
    kv.value = std::exp(li.log_value() - 0.5 * p.n * kLog4Pi);
    kv.err = kv.value * (li.err / std::max(li.value, 1e-300) + 1e-11);
    kv.route = Route::laplace;
    kv.converged = li.converged;
    return kv;
}

KernelValue log_kernel_hankel(const KernelParams& p, double r)
{
    KernelValue kv;
    kv.route = Route::hankel;
    const double s0 = p.s <= 0.75 ? p.s : 0.5;
    double err = 0.0;
    double v = log_kernel_cut(p.n, s0, p.lambda, r, err);
    if (p.s > s0) {
        QuadratureSpec spec;
        spec.rel_tol = kInnerTol;
        spec.abs_tol = 1e-300;
        QuadResult red = integrate(
            [&](double alpha) { return shifted_kernel_closed_form(p.n, p.lambda, alpha, r); }, s0, p.s,
            spec);
        v -= red.value;
        err += red.err_estimate;
        kv.converged = red.converged;
    }
    kv.value = v;
    kv.err = err;
    return kv;
}

void check_radius(double r)
{
    if (!(r >= 0.0) || std::isinf(r))
        throw ValidationError("radius must be finite and non-negative");
}

} // namespace

KernelParams KernelParams::make(int n, double s, double lambda)
{
    KernelParams p{n, s, lambda};
    p.validate();
    return p;
}

void KernelParams::validate() const
{
    if (n < 1)
        throw ValidationError("dimension n must be >= 1");
    if (n > 12)
        throw ValidationError("dimension n must be <= 12");
    if (!(s > 0.0) || std::isinf(s))
        throw ValidationError("s must be positive");
    if (!(lambda > 1.0) || std::isinf(lambda))
        throw ValidationError("lambda must exceed 1");
}

Regime KernelParams::regime() const
{
    const double d = n - 2.0 * s;
    if (std::fabs(d) < 1e-12)
        return Regime::critical;
    return d > 0.0 ? Regime::singular : Regime::continuous;
}

std::string to_string(Regime r)
{
    switch (r) {
    case Regime::singular:
        return "singular";
    case Regime::critical:
        return "critical";
    case Regime::continuous:
        return "continuous";
    }
    return "unknown";
}

std::string to_string(Route r)
{
    switch (r) {
    case Route::heat:
        return "heat";
    case Route::hankel:
        return "hankel";
    case Route::laplace:
        return "laplace";
    case Route::automatic:
        return "auto";
    }
    return "unknown";
}

Route parse_route(const std::string& name)
{
    if (name == "heat")
        return Route::heat;
    if (name == "hankel")
        return Route::hankel;
    if (name == "laplace")
        return Route::laplace;
    if (name == "auto")
        return Route::automatic;
    throw ValidationError("unknown route '" + name + "' (expected heat, hankel, laplace or auto)");
}

double LineIntegral::log_value() const
{
    return log_scale + std::log(value);
}

LineIntegral integrate_exp_line(const RealFn& phi, double x0, double lo, double hi, double rel_tol)
{
    LineIntegral out;
    long evals = 0;
    auto f = [&](double x) {
        ++evals;
        const double v = phi(x);
        if (std::isnan(v))
            throw std::domain_error("line integrand returned NaN");
        return v;
    };
    x0 = std::clamp(x0, lo, hi);

    // Bracket the maximum by expanding steps uphill, then refine.
    double b = x0;
    double fb = f(b);
    double step = 1.0;
    double xr = std::min(b + step, hi);
    double xl = std::max(b - step, lo);
    double fr = xr > b ? f(xr) : -kInf;
    double fl = xl < b ? f(xl) : -kInf;
    double peak = b;
    if (fr > fb || fl > fb) {
        const int dir = fr > fb ? 1 : -1;
        double prev = b;
        double cur = dir > 0 ? xr : xl;
        double fcur = dir > 0 ? fr : fl;
        bool bracketed = false;
        for (int it = 0; it < 200; ++it) {
            step *= 2.0;
            double nxt = cur + dir * step;
            nxt = std::clamp(nxt, lo, hi);
            if (nxt == cur)
                break;
            const double fn = f(nxt);
            if (fn <= fcur) {
                const double a = std::min(prev, nxt);
                const double c = std::max(prev, nxt);
                peak = golden_max(f, a, cur, c, fcur);
                bracketed = true;
                break;
            }
            prev = cur;
            cur = nxt;
            fcur = fn;
        }
        if (!bracketed)
            peak = cur;
    } else if (xl < b && xr > b) {
        peak = golden_max(f, xl, b, xr, fb);
    }
    const double fpk = f(peak);

    // Local width from curvature and slope.
    const double d = 1e-2;
    double sigma = 20.0;
    const double fp = peak + d <= hi ? f(peak + d) : -kInf;
    const double fm = peak - d >= lo ? f(peak - d) : -kInf;
    if (std::isfinite(fp) && std::isfinite(fm)) {
        const double c2 = (fp - 2.0 * fpk + fm) / (d * d);
        if (c2 < 0.0)
            sigma = 1.0 / std::sqrt(-c2);
        const double slope = std::fabs(fp - fm) / (2.0 * d);
        if (slope > 0.0)
            sigma = std::min(sigma, 2.0 / slope + 1.0 / std::sqrt(std::max(-c2, 1e-300)));
    } else {
        const double fin = std::isfinite(fp) ? fp : fm;
        const double slope = std::fabs(fin - fpk) / d;
        if (slope > 0.0)
            sigma = std::min(sigma, 1.0 / slope);
    }
    sigma = std::clamp(sigma, 1e-4, 20.0);

    out.log_scale = fpk;
    auto e = [&](double x) { return std::exp(f(x) - fpk); };
    QuadratureSpec spec;
    spec.rel_tol = rel_tol;
    spec.abs_tol = 1e-300;
    const double c_lo = std::max(lo, peak - sigma);
    const double c_hi = std::min(hi, peak + sigma);
    QuadResult total = c_hi > c_lo ? integrate(e, c_lo, c_hi, spec) : QuadResult{};
    for (int dir : {1, -1}) {
        double edge = dir > 0 ? c_hi : c_lo;
        const double lim = dir > 0 ? hi : lo;
        double w = sigma;
        for (int it = 0; it < 400 && edge != lim; ++it) {
            w *= 1.5;
            double next = edge + dir * w;
            next = dir > 0 ? std::min(next, hi) : std::max(next, lo);
            spec.abs_tol = std::max(1e-300, 0.01 * rel_tol * std::fabs(total.value));
            QuadResult q = dir > 0 ? integrate(e, edge, next, spec) : integrate(e, next, edge, spec);
            total += q;
            edge = next;
            if (f(edge) - fpk < -60.0 && std::fabs(q.value) < 1e-3 * rel_tol * std::fabs(total.value))
                break;
        }
    }
    out.value = total.value;
    out.err = total.err_estimate;
    // Judge the sum, not each panel: a steep edge may cap one panel near round-off.
    out.converged = total.converged || total.err_estimate <= 100.0 * rel_tol * std::fabs(total.value);
    out.evaluations = evals;
    return out;
}

double bessel_kernel_Gs(int n, double s, double r)
{
    if (n < 1)
        throw ValidationError("dimension n must be >= 1");
    if (!(s > 0.0))
        throw ValidationError("s must be positive");
    check_radius(r);
    if (r == 0.0 && n >= 2.0 * s)
        throw ValidationError("G_s is singular at r = 0 when n >= 2s");
    return shifted_heat(n, 1.0, s, r).value;
}

KernelValue shifted_kernel_eval(int n, double lambda, double alpha, double r, Route route)
{
    if (n < 1)
        throw ValidationError("dimension n must be >= 1");
    if (!(lambda > 0.0))
        throw ValidationError("lambda must be positive");
    if (!(alpha > 0.0))
        throw ValidationError("alpha must be positive");
    check_radius(r);
    if (r == 0.0 && alpha <= 0.5 * n)
        throw ValidationError("G^lambda_alpha is singular at r = 0 when alpha <= n/2");
    if (route == Route::automatic)
        route = r <= 1.0 ? Route::heat : Route::hankel;
    if (route == Route::hankel) {
        QuadratureSpec spec;
        spec.rel_tol = 1e-11;
        spec.abs_tol = 1e-300;
        auto g = [&](double rho) { return std::pow(lambda + 4.0 * kPi * kPi * rho * rho, -alpha); };
        HankelResult h = integrate_oscillatory_hankel(g, 0.5 * n - 1.0, r, spec);
        if (h.converged && h.value > 0.0) {
            KernelValue kv;
            kv.value = h.value;
            kv.err = h.err_estimate;
            kv.route = Route::hankel;
            return kv;
        }
        KernelValue kv = shifted_heat(n, lambda, alpha, r);
        kv.fallback = true;
        return kv;
    }
    return shifted_heat(n, lambda, alpha, r);
}

double shifted_kernel(int n, double lambda, double alpha, double r, Route route)
{
    return shifted_kernel_eval(n, lambda, alpha, r, route).value;
}

double shifted_kernel_closed_form(int n, double lambda, double alpha, double r)
{
    if (!(r > 0.0))
        throw ValidationError("closed form needs r > 0");
    const double mu = alpha - 0.5 * n;
    const double z = std::sqrt(lambda) * r;
    const double lg = std::log(2.0) - log_gamma(alpha) - 0.5 * n * kLog4Pi +
                      mu * std::log(r / (2.0 * std::sqrt(lambda))) + std::log(bessel_k_scaled(mu, z)) - z;
    return std::exp(lg);
}

double laplace_approx_shifted(int n, double lambda, double alpha, double r)
{
    return std::pow(lambda, -alpha) * std::pow(4.0 * kPi * alpha / lambda, -0.5 * n) *
           std::exp(-lambda * r * r / (4.0 * alpha));
}

KernelValue log_bessel_kernel_eval(const KernelParams& p, double r, Route route)
{
    p.validate();
    check_radius(r);
    if (r == 0.0) {
        if (p.regime() != Regime::continuous)
            throw ValidationError("K is singular at r = 0 unless n < 2s");
        KernelValue kv;
        kv.value = log_bessel_kernel_origin(p);
        kv.err = 1e-11 * kv.value;
        kv.route = Route::laplace;
        return kv;
    }
    if (route == Route::automatic)
        route = r <= 1.0 ? Route::heat : Route::hankel;
    switch (route) {
    case Route::hankel:
        if (p.s < 0.05) {
            KernelValue kv = log_kernel_heat(p, r);
            kv.fallback = true;
            return kv;
        }
        try {
            return log_kernel_hankel(p, r);
        } catch (const ConvergenceError&) {
            KernelValue kv = log_kernel_heat(p, r);
            kv.fallback = true;
            return kv;
        }
    case Route::laplace:
        return log_kernel_laplace(p, r);
    default:
        return log_kernel_heat(p, r);
    }
}

double log_bessel_kernel(const KernelParams& p, double r, Route route)
{
    return log_bessel_kernel_eval(p, r, route).value;
}

double log_bessel_kernel_origin(const KernelParams& p)
{
    p.validate();
    if (p.regime() != Regime::continuous)
        throw ValidationError("K(0) is finite only when n < 2s");
    const double half = 0.5 * p.n;
    const double ll = std::log(p.lambda);
    auto phi = [&](double q) {
        return log_gamma(p.s + q - half) - log_gamma(p.s + q) + (half - p.s - q) * ll;
    };
    LineIntegral li = integrate_exp_line(phi, 0.0, 0.0, kInf, 1e-13);
    return std::exp(li.log_value() - half * kLog4Pi);
}

double inner_mixture_H(double s, double t)
{
    if (!(s > 0.0) || !(t > 0.0))
        throw ValidationError("inner_mixture_H needs s > 0 and t > 0");
    return std::exp(log_inner_H(s, t));
}

std::vector<double> log_spaced(double lo, double hi, int points)
{
    if (!(lo > 0.0) || !(hi > lo))
        throw ValidationError("need 0 < r_min < r_max");
    if (points < 2)
        throw ValidationError("points must be >= 2");
    std::vector<double> r(points);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < points; ++i)
        r[i] = std::exp(a + (b - a) * i / (points - 1));
    r.front() = lo;
    r.back() = hi;
    return r;
}

namespace {

void eval_point(RadialProfile& prof, size_t i, Route route, bool& failed)
{
    try {
        KernelValue kv = log_bessel_kernel_eval(prof.params, prof.radii[i], route);
        prof.values[i] = kv.value;
        prof.errs[i] = kv.err;
        if (!kv.converged)
            failed = true;
    } catch (const std::exception&) {
        prof.values[i] = std::nan("");
        prof.errs[i] = std::nan("");
        failed = true;
    }
}

RadialProfile make_profile(const KernelParams& p, const std::vector<double>& radii, Route route)
{
    p.validate();
    for (size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1])))
            throw ValidationError("radii must be positive and strictly increasing");
    }
    RadialProfile prof;
    prof.params = p;
    prof.radii = radii;
    prof.values.assign(radii.size(), 0.0);
    prof.errs.assign(radii.size(), 0.0);
    prof.route = route;
    return prof;
}

} // namespace

RadialProfile tabulate_radii(const KernelParams& p, const std::vector<double>& radii, Route route)
{
    RadialProfile prof = make_profile(p, radii, route);
    const long count = static_cast<long>(radii.size());
    bool failed = false;
#pragma omp parallel for schedule(dynamic) reduction(|| : failed)
    for (long i = 0; i < count; ++i)
        eval_point(prof, static_cast<size_t>(i), route, failed);
    prof.partial = failed;
    return prof;
}

RadialProfile tabulate_profile(const KernelParams& p, double r_min, double r_max, int points, Route route)
{
    return tabulate_radii(p, log_spaced(r_min, r_max, points), route);
}

RadialProfile tabulate_profile_serial(const KernelParams& p, double r_min, double r_max, int points,
                                      Route route)
{
    RadialProfile prof = make_profile(p, log_spaced(r_min, r_max, points), route);
    bool failed = false;
    for (size_t i = 0; i < prof.radii.size(); ++i)
        eval_point(prof, i, route, failed);
    prof.partial = failed;
    return prof;
}

void RadialProfile::write_csv(std::ostream& os) const
{
    os << "r,value,err,route\n";
    const std::string name = to_string(route);
    os << std::setprecision(17);
    for (size_t i = 0; i < radii.size(); ++i)
        os << radii[i] << ',' << values[i] << ',' << errs[i] << ',' << name << '\n';
}

} // namespace logpot
