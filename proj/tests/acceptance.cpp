// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "logpot/analysis.hpp"
#include "logpot/asymptotics.hpp"
#include "logpot/kernels.hpp"
#include "logpot/special_fn.hpp"
#include "logpot/spectral.hpp"
#include "logpot/symbols.hpp"

using namespace logpot;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

KernelParams kp(int n, double s, double lambda) { return KernelParams::make(n, s, lambda); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.values().size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
    return d;
}

Outcome mass_identities() {
    Timer t;
    double worst_g = 0.0, worst_k = 0.0;
    bool conv = true;
    for (int n = 1; n <= 3; ++n)
        for (double s : {0.25, 0.5, 1.0})
            for (double lambda : {1.5, 2.0, 4.0}) {
                const auto g = shifted_kernel_mass(n, lambda, s, 1e-8);
                const auto k = kernel_mass(kp(n, s, lambda), 1e-8);
                conv = conv && g.converged && k.converged;
                worst_g = std::max(worst_g, rel(g.value, std::pow(lambda, -s)));
                worst_k = std::max(worst_k, rel(k.value, std::pow(lambda, -s) / std::log(lambda)));
            }
    const double secs = t.seconds();
    return {conv && worst_g <= 1e-6 && worst_k <= 1e-6 && secs < 60.0,
            "worst rel G " + fmt("%.2e", worst_g) + ", K " + fmt("%.2e", worst_k) + ", " + fmt("%.1f s", secs)};
}

Outcome route_cross_validation() {
    Timer t;
    double worst = 0.0;
    for (auto p : {kp(1, 0.5, 2.0), kp(2, 1.0, 3.0), kp(3, 0.7, 1.5), kp(2, 0.3, 4.0)}) {
        const auto heat = tabulate_profile(p, 0.01, 20.0, 50, Route::heat);
        const auto hankel = tabulate_profile(p, 0.01, 20.0, 50, Route::hankel);
        if (heat.partial || hankel.partial) return {false, "partial profile"};
        for (size_t i = 0; i < heat.values.size(); ++i) worst = std::max(worst, rel(hankel.values[i], heat.values[i]));
    }
    const double secs = t.seconds();
    return {worst <= 1e-6 && secs < 120.0, "worst rel " + fmt("%.2e", worst) + ", " + fmt("%.1f s", secs)};
}

Outcome trichotomy() {
    bool ok = true;
    std::string d;
    double worst_sing = 0.0;
    for (auto p : {kp(1, 0.25, 2.0), kp(3, 1.0, 2.0), kp(2, 0.5, 2.0)}) {
        const auto rep = verify_origin(p, tabulate_radii(p, origin_radii(p)));
        ok = ok && rep.converged && rep.regime == AsymptoticRegime::origin_singular;
        worst_sing = std::max(worst_sing, rep.rel_deviation);
    }
    ok = ok && worst_sing <= 0.02;
    d += "singular " + fmt("%.2e", worst_sing);

    double worst_h = 0.0, worst_crit = 0.0;
    for (auto p : {kp(2, 1.0, 2.0), kp(3, 1.5, 2.0)}) {
        for (double t : {1e-6, 1e-8}) worst_h = std::max(worst_h, critical_inner_deviation(p.n, t));
        const auto rep = verify_origin(p, tabulate_radii(p, origin_radii(p)));
        ok = ok && rep.regime == AsymptoticRegime::origin_critical;
        worst_crit = std::max(worst_crit, rep.rel_deviation);
    }
    ok = ok && worst_h <= 0.05 && worst_crit <= 0.30;
    d += ", critical H " + fmt("%.2e", worst_h) + " outer " + fmt("%.2e", worst_crit);

    const auto p = kp(1, 1.0, 2.0);
    const double k0 = log_bessel_kernel_origin(p);
    const double cont = rel(log_bessel_kernel(p, 1e-6), k0);
    const auto rep = verify_origin(p, tabulate_radii(p, origin_radii(p)));
    ok = ok && cont <= 1e-3 && rep.rel_deviation <= 1e-3;
    d += ", continuous " + fmt("%.2e", std::max(cont, rep.rel_deviation));
    return {ok, d};
}

Outcome far_field() {
    bool ok = true;
    double worst_rate = 0.0, worst_const = 0.0, worst_spread = 0.0;
    const std::pair<int, double> sets[] = {{1, 2.0}, {3, 2.0}, {3, 5.0}};
    for (auto [n, lambda] : sets) {
        std::vector<double> consts;
        for (double s : {0.3, 0.7, 1.2}) {
            const auto p = kp(n, s, lambda);
            const auto law = infinity_prefactor(p);
            const auto rep = verify_infinity(p, tabulate_profile(p, 5.0, 40.0, 40, Route::hankel));
            ok = ok && rep.converged;
            const double rate = fitted_decay_rate(tabulate_profile(p, 10.0, 40.0, 20, Route::hankel));
            worst_rate = std::max(worst_rate, rel(rate, law.rate));
            worst_const = std::max(worst_const, rel(rep.constant_extrapolated, law.constant));
            consts.push_back(rep.constant_extrapolated);
        }
        for (size_t i = 0; i < consts.size(); ++i)
            for (size_t j = i + 1; j < consts.size(); ++j) worst_spread = std::max(worst_spread, rel(consts[i], consts[j]));
    }
    ok = ok && worst_rate <= 0.005 && worst_const <= 0.01 && worst_spread <= 0.02;
    return {ok, "rate " + fmt("%.2e", worst_rate) + ", prefactor " + fmt("%.2e", worst_const) + ", s-spread " +
                    fmt("%.2e", worst_spread)};
}

Outcome dyadic_synthesis() {
    const auto d = SymbolDescriptor::make(SymbolId::bridge_ratio, kp(1, 0.5, 2.0));
    const auto part = build_partition(-24, 10);
    const auto set = synthesize_l1_kernel(d, part);
    double worst = 0.0;
    for (double xi = std::exp2(part.j_min); xi <= std::exp2(part.j_max); xi *= 1.02)
        worst = std::max(worst, std::abs(set.reconstruct(xi) - d.deviation(xi)));
    const bool ok = set.converged && std::isfinite(set.total_l1) && set.high_slope <= -1.8 &&
                    set.low_slope >= 2 * 0.5 - 0.3 && worst <= 1e-6;
    return {ok, "high slope " + fmt("%.3f", set.high_slope) + ", low slope " + fmt("%.3f", set.low_slope) +
                    ", total_l1 " + fmt("%.4f", set.total_l1) + ", reconstruction " + fmt("%.2e", worst)};
}

Outcome bridge_identity() {
    double pointwise = 0.0, op = 0.0;
    for (auto p : {kp(1, 0.5, 2.0), kp(2, 1.0, 3.0), kp(3, 0.25, 1.5), kp(1, 1.5, 4.0)}) {
        std::vector<double> xi;
        for (int i = 0; i < 256; ++i) xi.push_back(i == 0 ? 0.0 : std::pow(10.0, -6.0 + 9.0 * (i - 1) / 254.0));
        pointwise = std::max(pointwise, bridge_identity_check(p, xi));
        if (p.n <= 2) {
            const auto g = SpectralGrid::make(p.n, 12.0, p.n == 1 ? 1024 : 128);
            const auto u = random_bandlimited_field(g, g.M / 4, 17);
            const auto direct = apply_multiplier(u, inhom_multiplier(p));
            auto sum = apply_multiplier(u, bridge_mu_multiplier(p));
            const auto w = apply_multiplier(apply_multiplier(u, hom_multiplier(p.s)), bridge_w_multiplier(p));
            for (size_t i = 0; i < sum.values().size(); ++i) sum.mutable_values()[i] += w.values()[i];
            op = std::max(op, max_abs_diff(direct, sum) / direct.sup_norm());
        }
    }
    return {pointwise <= 1e-12 && op <= 1e-12, "pointwise " + fmt("%.2e", pointwise) + ", lattice " + fmt("%.2e", op)};
}

Outcome solver_exactness() {
    double ident = 0.0, iso = 0.0;
    for (int n = 1; n <= 2; ++n)
        for (int M : {256, 1024}) {
            const auto g = SpectralGrid::make(n, 20.0, M);
            const auto p = kp(n, 0.5, 2.0);
            for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                const auto f = random_bandlimited_field(g, M / 4, seed);
                const auto u = solve_inhomogeneous(f, p);
                const auto back = apply_multiplier(u, inhom_multiplier(p));
                ident = std::max(ident, max_abs_diff(back, f) / f.sup_norm());
                iso = std::max(iso, rel(back.l2_norm(), f.l2_norm()));
            }
        }
    const auto g = SpectralGrid::make(1, 40.0, 2048);
    const auto p = kp(1, 1.0, 2.0);
    const auto f = SpectralField::sample(g, [](const double* x) { return std::exp(-x[0] * x[0]); });
    const auto spectral = solve_inhomogeneous(f, p);
    const auto conv = convolve_radial_kernel_1d(f, [&](double r) { return log_bessel_kernel(p, r); });
    const double oracle = max_abs_diff(spectral, conv) / spectral.sup_norm();
    return {ident <= 1e-12 && iso <= 1e-12 && oracle <= 1e-3,
            "identity " + fmt("%.2e", ident) + ", isometry " + fmt("%.2e", iso) + ", convolution " + fmt("%.2e", oracle)};
}

Outcome pointwise_representation() {
    Timer t;
    const double c = frac_constant_c(1, 0.5), b = frac_constant_b(1, 0.5);
    const double ce = rel(c, 1.0 / M_PI), be = rel(b, 2.0 - 2.0 * 0.57721566490153286);
    const auto g = SpectralGrid::make(1, 2048.0, 1 << 18);
    auto u = [](double x) { return std::abs(x) < 1.0 ? std::pow(1.0 - x * x, 4) : 0.0; };
    const auto f = SpectralField::sample(g, [&](const double* x) { return u(x[0]); });
    double worst = 0.0;
    for (double s : {0.25, 0.5, 0.75}) {
        const auto spec = apply_multiplier(f, hom_multiplier(s));
        for (double x : {0.0, 0.125, 0.25, 0.5, 0.75}) {
            const int m = static_cast<int>(std::lround(x / g.spacing())) + g.M / 2;
            worst = std::max(worst, rel(apply_pointwise_frac_log(u, x, s, 1.0).value, spec.values()[m]));
        }
    }
    const double secs = t.seconds();
    return {ce <= 1e-12 && be <= 1e-12 && worst <= 1e-3 && secs < 300.0,
            "c " + fmt("%.1e", ce) + ", b " + fmt("%.1e", be) + ", pointwise vs spectral " + fmt("%.2e", worst) + ", " +
                fmt("%.1f s", secs)};
}

Outcome critical_integrability() {
    bool ok = true;
    std::string d;
    struct Set { int n; double s; double p; int M; double box; int kmax; };
    const Set sets[] = {{2, 0.5, 1.5, 256, 24.0, 48}, {3, 1.0, 1.2, 64, 16.0, 12}, {1, 0.25, 1.5, 4096, 40.0, 400}};
    double worst_young = 0.0;
    for (const auto& st : sets) {
        const auto p = kp(st.n, st.s, 2.0);
        const double r = critical_exponents(st.n, st.s).r;
        const auto norm = kernel_lr_norm(p, r);
        ok = ok && norm.converged && std::isfinite(norm.lr_norm);
        d += fmt("(%g", st.n) + fmt(",%g) ", st.s) + fmt("%.6g", norm.lr_norm) + "; ";

        // Riesz partial integrals grow by a fixed amount per decade, the log kernel's settle.
        const auto riesz = riesz_contrast(st.n, st.s, r, norm.partial_rho);
        const size_t m = riesz.size();
        const double decade = riesz[m - 1].numeric - riesz[m - 2].numeric;
        const double first = riesz[1].numeric - riesz[0].numeric;
        const double kernel_last = norm.partial_value[m - 1] - norm.partial_value[m - 2];
        ok = ok && rel(decade, first) <= 1e-6 && riesz[m - 1].numeric > 10 * decade && kernel_last < 0.1 * decade;
        for (const auto& rp : riesz) ok = ok && rel(rp.numeric, rp.analytic) <= 1e-6;

        const auto g = SpectralGrid::make(st.n, st.box, st.M);
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto y = young_mapping_check(norm, st.p, random_bandlimited_field(g, st.kmax, seed));
            ok = ok && y.holds;
            worst_young = std::max(worst_young, y.lhs / y.rhs);
        }
    }
    // Parseval values of the squared L2 norm, independently computed.
    const double parseval = std::max(rel(kernel_lr_norm(kp(2, 0.5, 2.0), 2.0).lr_norm, 1.0 / (4 * M_PI * std::log(2.0))),
                                     rel(kernel_lr_norm(kp(1, 0.25, 2.0), 2.0).lr_norm, 0.496563760492938146));
    ok = ok && parseval <= 1e-4;
    d += "Parseval " + fmt("%.1e", parseval) + "; Young max lhs/rhs " + fmt("%.3f", worst_young);
    return {ok, d};
}

Outcome log_modulus() {
    bool ok = true;
    std::string d;
    const auto g = SpectralGrid::make(1, 1.0, 1 << 20);
    for (double q : {4.0 / 3.0, 2.0, 4.0}) {
        const auto p = critical_line_params(1, q);
        const auto a = log_modulus_check(p, q, near_extremal_field(g, q));
        const auto b = log_modulus_check(p, q, random_bandlimited_field(g, 4096, 7));
        ok = ok && a.holds() && b.holds();
        d += fmt("p=%.3g: ", q) + fmt("%.2f", a.fitted_exponent) + fmt("/%.2f", b.fitted_exponent) +
             fmt(" <= %.2f; ", -1.0 / q + 0.15);
    }
    return {ok, d};
}

Outcome p1_blowup() {
    const auto res = p1_blowup_demo(kp(1, 0.5, 2.0), {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8});
    bool increasing = res.increasing;
    for (size_t i = 1; i < res.values.size(); ++i) increasing = increasing && res.values[i] > res.values[i - 1];
    double mass = 0.0;
    for (double m : res.masses) mass = std::max(mass, std::abs(m - 1.0));
    const double dev = rel(res.slope, res.expected_slope);
    return {increasing && dev <= 0.30 && mass <= 1e-10,
            "u(0) " + fmt("%.4f", res.values.front()) + fmt(" -> %.4f", res.values.back()) + ", slope " +
                fmt("%.4f", res.slope) + fmt(" vs %.4f", res.expected_slope) + fmt(" (%.0f%%)", 100 * dev)};
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"mass identities", mass_identities},
        {"heat vs Fourier-Bessel routes", route_cross_validation},
        {"near-origin trichotomy", trichotomy},
        {"far-field law", far_field},
        {"dyadic L1 synthesis", dyadic_synthesis},
        {"bridge identity", bridge_identity},
        {"solver exactness", solver_exactness},
        {"pointwise representation", pointwise_representation},
        {"critical integrability", critical_integrability},
        {"log modulus", log_modulus},
        {"p=1 blow-up", p1_blowup},
    };
    int failed = 0, id = 0;
    for (const auto& [name, check] : criteria) {
        ++id;
        Timer t;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("criterion %2d %s %s: %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), t.seconds());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
