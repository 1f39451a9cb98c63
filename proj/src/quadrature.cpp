/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "logpot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>

#include "logpot/errors.hpp"
#include "logpot/special_fn.hpp"

namespace logpot {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMachEps = 2.220446049250313e-16;

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double checked(const RealFn& f, double x)
{
    const double v = f(x);
    if (std::isnan(v))
        throw std::domain_error("integrand returned NaN at x = " + std::to_string(x));
    return v;
}

struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gauss_kronrod(const RealFn& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    fv[7] = checked(f, c);
    for (int j = 0; j < 7; ++j) {
        fv[j] = checked(f, c - h * kXgk[j]);
        fv[14 - j] = checked(f, c + h * kXgk[j]);
    }
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    double resabs = std::fabs(resk);
    for (int j = 0; j < 7; ++j) {
        const double pair = fv[j] + fv[14 - j];
        resk += kWgk[j] * pair;
        resabs += kWgk[j] * (std::fabs(fv[j]) + std::fabs(fv[14 - j]));
        if (j % 2 == 1)
            resg += kWg[j / 2] * pair;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::fabs(fv[7] - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::fabs(fv[j] - mean) + std::fabs(fv[14 - j] - mean));
    resk *= h;
    resabs *= std::fabs(h);
    resasc *= std::fabs(h);
    double err = std::fabs((resk - resg * h));
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > 1e-290)
        err = std::max(50.0 * kMachEps * resabs, err);
    return {a, b, resk, err};
}

QuadResult adaptive_gk(const RealFn& f, const std::vector<double>& pts, const QuadratureSpec& spec)
{
    std::priority_queue<Panel> heap;
    QuadResult out;
    double total = 0.0;
    double total_err = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] == pts[i])
            continue;
        Panel p = gauss_kronrod(f, pts[i], pts[i + 1]);
        out.evaluations += 15;
        total += p.value;
        total_err += p.err;
        heap.push(p);
    }
    const long budget = 1L << std::min(spec.max_levels, 24);
    long splits = 0;
    while (!heap.empty() && total_err > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
        if (splits >= budget) {
            out.converged = false;
            break;
        }
        Panel p = heap.top();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b) || std::fabs(p.b - p.a) < 4 * kMachEps * std::fabs(mid)) {
            // Cannot refine further; accept this panel as it stands.
            out.converged = false;
            break;
        }
        heap.pop();
        Panel l = gauss_kronrod(f, p.a, mid);
        Panel r = gauss_kronrod(f, mid, p.b);
        out.evaluations += 30;
        ++splits;
        total += l.value + r.value - p.value;
        total_err += l.err + r.err - p.err;
        heap.push(l);
        heap.push(r);
    }
    // Re-sum to remove drift from the running updates.
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().err;
        heap.pop();
    }
    out.value = total;
    out.err_estimate = total_err;
    if (total_err > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)))
        out.converged = false;
    return out;
}

// tanh-sinh on [a, b] (b finite) or exp-sinh on [a, inf).
QuadResult double_exponential(const RealFn& f, double a, double b, const QuadratureSpec& spec)
{
    const bool semi = std::isinf(b);
    const double d = 0.5 * (b - a);
    const double tmax = semi ? 4.5 : 4.0;
    QuadResult out;
    auto term = [&](double tau) {
        const double ps = 0.5 * kPi * std::sinh(tau);
        if (semi) {
            const double e = std::exp(ps);
            const double x = a + e;
            if (!(x > a) || std::isinf(e))
                return 0.0;
            ++out.evaluations;
            return checked(f, x) * 0.5 * kPi * std::cosh(tau) * e;
        }
        const double ch = std::cosh(ps);
        const double w = d * 0.5 * kPi * std::cosh(tau) / (ch * ch);
        double x;
        if (tau > 0)
            x = b - d * 2.0 / (1.0 + std::exp(2.0 * ps));
        else
            x = a + d * 2.0 / (1.0 + std::exp(-2.0 * ps));
        if (!(x > a && x < b) || w == 0.0)
            return 0.0;
        ++out.evaluations;
        return checked(f, x) * w;
    };
    double h = 0.5;
    double sum = term(0.0);
    for (double t = h; t <= tmax; t += h)
        sum += term(t) + term(-t);
    double est = sum * h;
    double diff = kInf;
    const int levels = std::max(3, std::min(spec.max_levels, 12));
    for (int level = 0; level < levels; ++level) {
        h *= 0.5;
        for (double t = h; t <= tmax; t += 2 * h)
            sum += term(t) + term(-t);
        const double next = sum * h;
        diff = std::fabs(next - est);
        est = next;
        if (level >= 2 && diff <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(est)))
            break;
    }
    out.value = est;
    out.err_estimate = diff;
    out.converged = diff <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(est));
    return out;
}

} // namespace

void QuadratureSpec::validate() const
{
    if (!(rel_tol > 0.0))
        throw ValidationError("rel_tol must be positive");
    if (!(abs_tol > 0.0))
        throw ValidationError("abs_tol must be positive");
    if (max_levels < 3)
        throw ValidationError("max_levels must be at least 3");
}

QuadResult& QuadResult::operator+=(const QuadResult& o)
{
    value += o.value;
    err_estimate += o.err_estimate;
    evaluations += o.evaluations;
    converged = converged && o.converged;
    return *this;
}

QuadResult integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec)
{
    spec.validate();
    if (std::isinf(a))
        throw ValidationError("integrate: lower limit must be finite");
    if (b < a) {
        QuadResult r = integrate(f, b, a, spec);
        r.value = -r.value;
        return r;
    }
    if (a == b)
        return {0.0, 0.0, 1, true};
    if (spec.transform == Transform::double_exponential)
        return double_exponential(f, a, b, spec);
    if (!std::isinf(b))
        return adaptive_gk(f, {a, b}, spec);
    if (spec.transform == Transform::exp_tail) {
        // The mapped integrand tends to 0 at u = 1; nodes that round onto it are dropped.
        RealFn g = [&](double u) { return u >= 1.0 ? 0.0 : f(a - std::log1p(-u)) / (1.0 - u); };
        return adaptive_gk(g, {0.0, 1.0}, spec);
    }
    RealFn g = [&](double u) {
        const double w = 1.0 - u;
        return w <= 0.0 ? 0.0 : f(a + u / w) / (w * w);
    };
    return adaptive_gk(g, {0.0, 1.0}, spec);
}

QuadResult integrate(const RealFn& f, const std::vector<double>& points, const QuadratureSpec& spec)
{
    spec.validate();
    if (points.size() < 2)
        throw ValidationError("integrate: need at least two points");
    if (!std::is_sorted(points.begin(), points.end()))
        throw ValidationError("integrate: points must be increasing");
    if (std::isinf(points.back())) {
        std::vector<double> finite(points.begin(), points.end() - 1);
        QuadResult r = finite.size() >= 2 ? adaptive_gk(f, finite, spec) : QuadResult{};
        r += integrate(f, finite.back(), kInf, spec);
        return r;
    }
    if (spec.transform == Transform::double_exponential) {
        QuadResult r{};
        for (size_t i = 0; i + 1 < points.size(); ++i)
            r += double_exponential(f, points[i], points[i + 1], spec);
        return r;
    }
    return adaptive_gk(f, points, spec);
}

QuadResult integrate_nested(const std::function<double(double, double)>& f, double a, double b,
                            const RealFn& lo, const RealFn& hi, const QuadratureSpec& outer,
                            const QuadratureSpec& inner)
{
    double inner_err = 0.0;
    long inner_evals = 0;
    bool inner_ok = true;
    RealFn g = [&](double x) {
        QuadResult r = integrate([&](double y) { return f(x, y); }, lo(x), hi(x), inner);
        inner_err = std::max(inner_err, r.err_estimate);
        inner_evals += r.evaluations;
        inner_ok = inner_ok && r.converged;
        return r.value;
    };
    QuadResult out = integrate(g, a, b, outer);
    const double width = std::isinf(b) ? 1.0 : (b - a);
    out.err_estimate += inner_err * width;
    out.evaluations += inner_evals;
    out.converged = out.converged && inner_ok;
    return out;
}

double bessel_j_zero(double nu, int k)
{
    if (k < 1)
        throw ValidationError("bessel_j_zero: index must be >= 1");
    const double mu = 4.0 * nu * nu;
    const double beta = (k + 0.5 * nu - 0.25) * kPi;
    const double e = 8.0 * beta;
    double x = beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e) -
               32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * std::pow(e, 5));
    if (k <= 8) {
        for (int it = 0; it < 30; ++it) {
            const double j = bessel_j(nu, x);
            const double dj = (nu / x) * j - bessel_j(nu + 1.0, x);
            const double step = j / dj;
            x -= step;
            if (std::fabs(step) < 1e-15 * x)
                break;
        }
    }
    return x;
}

HankelResult integrate_oscillatory_hankel(const RealFn& g, double nu, double omega,
                                          const QuadratureSpec& spec)
{
    spec.validate();
    if (nu < -0.5)
        throw ValidationError("integrate_oscillatory_hankel: order must be >= -1/2");
    if (omega < 0.0)
        throw ValidationError("integrate_oscillatory_hankel: omega must be non-negative");
    const double n = 2.0 * nu + 2.0;
    HankelResult out;
    if (omega == 0.0) {
        QuadResult r = integrate([&](double rho) { return g(rho) * std::pow(rho, n - 1.0); }, 0.0,
                                 kInf, spec);
        const double area = 2.0 * std::pow(kPi, 0.5 * n) / gamma(0.5 * n);
        out.value = area * r.value;
        out.err_estimate = area * r.err_estimate;
        out.evaluations = r.evaluations;
        out.converged = r.converged;
        return out;
    }
    const double k2 = 2.0 * kPi * omega;
    const double pre = k2 * std::pow(omega, -0.5 * n);
    // 2 pi r^{1-n/2} rho^{n/2} J_nu(2 pi r rho) written to stay finite at rho -> 0
    auto h = [&](double rho) {
        if (rho == 0.0)
            return nu == -0.5 ? g(0.0) * std::sqrt(2.0 / (kPi * k2)) : 0.0;
        return g(rho) * std::pow(rho, 0.5 * n) * bessel_j(nu, k2 * rho);
    };
    QuadratureSpec panel_spec = spec;
    panel_spec.abs_tol = std::min(spec.abs_tol, 1e-300);

    std::vector<double> first = {0.0};
    const double z1 = bessel_j_zero(nu, 1) / k2;
    for (double p = 1.0 / 64.0; p < z1; p *= 2.0)
        first.push_back(p);
    first.push_back(z1);
    QuadResult r0 = integrate(h, first, panel_spec);
    std::vector<double> partial = {r0.value};
    double err = r0.err_estimate;
    long evals = r0.evaluations;
    bool ok = r0.converged;

    constexpr int kStages = 8;
    constexpr int kMaxPanels = 600;
    auto euler = [&](size_t end) {
        std::vector<double> w(partial.begin() + (end - kStages), partial.begin() + end + 1);
        for (int s = 0; s < kStages; ++s)
            for (size_t i = 0; i + 1 < w.size() - s; ++i)
                w[i] = 0.5 * (w[i] + w[i + 1]);
        return w[0];
    };
    double lo = z1;
    double prev_acc = kInf;
    double acc = 0.0;
    int small_run = 0;
    bool done = false;
    for (int k = 2; k <= kMaxPanels; ++k) {
        const double hi = bessel_j_zero(nu, k) / k2;
        QuadResult rk = integrate(h, lo, hi, panel_spec);
        lo = hi;
        err += rk.err_estimate;
        evals += rk.evaluations;
        ok = ok && rk.converged;
        partial.push_back(partial.back() + rk.value);
        const double tol = std::max(spec.abs_tol / pre, spec.rel_tol * std::fabs(partial.back()));
        small_run = std::fabs(rk.value) < 0.1 * tol ? small_run + 1 : 0;
        if (small_run >= 3) {
            acc = partial.back();
            out.accelerated = false;
            done = true;
            break;
        }
        if (partial.size() > kStages + 1) {
            acc = euler(partial.size() - 1);
            const double tol_acc = std::max(spec.abs_tol / pre, spec.rel_tol * std::fabs(acc));
            if (std::fabs(acc - prev_acc) < tol_acc && k > 16) {
                err += std::fabs(acc - prev_acc);
                out.accelerated = true;
                done = true;
                break;
            }
            prev_acc = acc;
        }
    }
    out.value = pre * acc;
    out.err_estimate = pre * err;
    out.evaluations = evals;
    out.panels = static_cast<int>(partial.size());
    // Panel cancellation leaves no significant digits.
    const bool significant = std::fabs(acc) > 10.0 * err;
    out.converged = ok && done && significant;
    return out;
}

} // namespace logpot
