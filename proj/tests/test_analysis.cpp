#include "doctest.h"

#include <cmath>
#include <sstream>

#include "logpot/analysis.hpp"
#include "logpot/asymptotics.hpp"
#include "logpot/errors.hpp"
#include "logpot/special_fn.hpp"

using namespace logpot;
using doctest::Approx;

namespace {
KernelParams kp(int n, double s, double lambda) { return KernelParams::make(n, s, lambda); }
} // namespace

TEST_CASE("critical exponents") {
    CHECK(critical_exponents(2, 0.5).r == 2.0);
    CHECK(std::isnan(critical_exponents(2, 0.5).p_star));
    CHECK(critical_exponents(3, 0.5, 2.0).p_star == Approx(6.0).epsilon(1e-15));
    CHECK(critical_exponents(1, 0.25, 1.5).p_star == Approx(6.0).epsilon(1e-15));
    CHECK_THROWS_WITH_AS(critical_exponents(1, 1.0, 1.0), doctest::Contains("n > 2s"), ValidationError);
    // n = 2sp exactly is not subcritical
    CHECK_THROWS_WITH_AS(critical_exponents(1, 0.25, 2.0), doctest::Contains("n > 2sp"), ValidationError);
}

// Parseval: ||K||_2^2 = int (lambda + r)^{-2s} ln(lambda + r)^{-2} d xi, evaluated
// independently to 18 digits (n = 2 in closed form, 1 / (4 pi ln lambda)).
TEST_CASE("L2 norms against Parseval") {
    const auto a = kernel_lr_norm(kp(2, 0.5, 2.0), 2.0);
    CHECK(a.converged);
    CHECK(a.lr_norm == Approx(1.0 / (4 * M_PI * std::log(2.0))).epsilon(1e-7));
    CHECK(std::abs(a.lr_norm - 0.1148060235658212928) <= 3 * a.err + 1e-12 * a.lr_norm);

    const auto b = kernel_lr_norm(kp(1, 0.25, 2.0), 2.0);
    CHECK(b.converged);
    CHECK(b.lr_norm == Approx(0.496563760492938146).epsilon(2e-6));
    CHECK(std::abs(b.lr_norm - 0.496563760492938146) <= 3 * b.err);

    CHECK(b.lr_norm >= b.near_origin_part);
    CHECK(b.lr_norm >= b.tail_part);
    CHECK(b.lr_norm == Approx(b.near_origin_part + b.tail_part).epsilon(1e-14));
    CHECK(b.norm() == Approx(std::sqrt(b.lr_norm)));
}

TEST_CASE("r = 1 is the mass") {
    for (auto p : {kp(1, 0.5, 2.0), kp(3, 1.0, 2.0)}) {
        const auto r = kernel_lr_norm(p, 1.0);
        CHECK(r.converged);
        CHECK(r.lr_norm == Approx(std::pow(p.lambda, -p.s) / std::log(p.lambda)).epsilon(1e-6));
    }
}

TEST_CASE("finite across the exponent window") {
    const auto p = kp(3, 1.0, 2.0);
    const double rc = critical_exponents(3, 1.0).r;
    double prev = 0.0;
    for (double r : {1.0, 0.5 * (1.0 + rc), rc}) {
        const auto rep = kernel_lr_norm(p, r);
        CAPTURE(r);
        CHECK(rep.converged);
        CHECK(std::isfinite(rep.lr_norm));
        CHECK(rep.lr_norm > 0.0);
        CHECK(rep.lr_norm != prev);
        prev = rep.lr_norm;
    }
    CHECK(prev == Approx(0.0004562902873).epsilon(1e-4));
}

TEST_CASE("past the critical exponent the integral diverges") {
    const auto rep = kernel_lr_norm(kp(2, 0.5, 2.0), 2.5);
    CHECK_FALSE(rep.converged);
    CHECK(std::isinf(rep.lr_norm));
}

TEST_CASE("tail decays") {
    const auto p = kp(2, 0.5, 2.0);
    double prev = HUGE_VAL;
    for (double R : {1.0, 5.0, 10.0, 20.0, 30.0}) {
        const double t = kernel_lr_tail(p, 2.0, R);
        CHECK(t >= 0.0);
        CHECK(t < prev);
        prev = t;
    }
    CHECK(prev < 1e-12);
}

TEST_CASE("Riesz contrast diverges logarithmically") {
    const std::vector<double> rho = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    const int n = 2;
    const double s = 0.5, r = 2.0;
    const auto parts = riesz_contrast(n, s, r, rho);
    REQUIRE(parts.size() == rho.size());
    const double c = logpot::gamma(0.5 * n - s) / (std::pow(M_PI, 0.5 * n) * std::pow(4.0, s) * logpot::gamma(s));
    const double step = sphere_area(n) * std::pow(c, r) * std::log(10.0);
    for (size_t i = 0; i < parts.size(); ++i) {
        CHECK(parts[i].numeric == Approx(parts[i].analytic).epsilon(1e-8));
        CHECK(parts[i].analytic == Approx(sphere_area(n) * std::pow(c, r) * std::log(0.25 / rho[i])).epsilon(1e-12));
        if (i > 0) CHECK(parts[i].numeric - parts[i - 1].numeric == Approx(step).epsilon(1e-7));
    }
    // the log kernel's partial integrals over the same windows settle
    const auto k = kernel_lr_norm(kp(n, s, 2.0), r);
    REQUIRE(k.partial_value.size() >= 4);
    const size_t m = k.partial_value.size();
    CHECK(k.partial_value[m - 1] - k.partial_value[m - 2] < 0.5 * (k.partial_value[1] - k.partial_value[0]));
    CHECK_THROWS_AS(riesz_contrast(n, s, r, {0.5}), ValidationError);
}

TEST_CASE("Young inequality") {
    const auto p = kp(1, 0.25, 2.0);
    const double q = 1.5;
    const auto norm = kernel_lr_norm(p, critical_exponents(1, 0.25).r);
    const auto g = SpectralGrid::make(1, 40.0, 4096);

    const auto gauss = SpectralField::sample(g, [](const double* x) { return std::exp(-x[0] * x[0]); });
    const auto y = young_mapping_check(norm, q, gauss);
    CHECK(y.p_star == Approx(6.0));
    CHECK(y.holds);
    CHECK(y.lhs <= y.rhs);

    auto twice = gauss;
    for (auto& v : twice.mutable_values()) v *= 2.0;
    const auto y2 = young_mapping_check(norm, q, twice);
    CHECK(y2.lhs == Approx(2 * y.lhs).epsilon(1e-12));
    CHECK(y2.rhs == Approx(2 * y.rhs).epsilon(1e-12));

    const auto z = young_mapping_check(norm, q, SpectralField(g));
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto f = random_bandlimited_field(g, 200, seed);
        CHECK(young_mapping_check(norm, q, f).holds);
    }
    CHECK_THROWS_AS(young_mapping_check(norm, 2.0, gauss), ValidationError);
}

TEST_CASE("log modulus") {
    const auto g = SpectralGrid::make(1, 1.0, 1 << 16);
    for (double q : {4.0 / 3.0, 2.0, 4.0}) {
        const auto p = critical_line_params(1, q);
        CHECK(p.s == Approx(0.5 / q));
        const auto rep = log_modulus_check(p, q, near_extremal_field(g, q));
        CAPTURE(q);
        CHECK(rep.holds());
        for (size_t i = 1; i < rep.sup_differences.size(); ++i) {
            CHECK(rep.h_values[i] < rep.h_values[i - 1]);
            CHECK(rep.sup_differences[i] >= 0.0);
            CHECK(rep.sup_differences[i] <= rep.sup_differences[i - 1] + 1e-12);
        }
    }
    // a single mode is Lipschitz: far below the log bound
    const auto mode = SpectralField::sample(g, [](const double* x) { return std::cos(2 * M_PI * x[0]); });
    const auto rep = log_modulus_check(critical_line_params(1, 2.0), 2.0, mode);
    CHECK(rep.holds());
    CHECK(rep.sup_differences.back() / rep.sup_differences.front() ==
          Approx(rep.h_values.back() / rep.h_values.front()).epsilon(0.01));

    CHECK_THROWS_AS(log_modulus_check(kp(1, 0.3, 2.0), 2.0, mode), ValidationError);
    std::ostringstream os;
    ModulusReport::write_csv_header(os);
    CHECK(os.str() == "p,h,sup_diff,fitted_exponent\n");
}

TEST_CASE("p = 1 blow-up") {
    const auto p = kp(1, 0.5, 2.0);
    const auto res = p1_blowup_demo(p, {1e-2, 1e-4, 1e-6});
    CHECK(res.increasing);
    for (size_t i = 1; i < res.values.size(); ++i) CHECK(res.values[i] > res.values[i - 1]);
    for (double m : res.masses) CHECK(m == Approx(1.0).epsilon(1e-10));
    CHECK(res.expected_slope == Approx(1.0 / (2 * M_PI)).epsilon(1e-13));
    CHECK(res.values[0] == Approx(0.6676).epsilon(1e-3));
    CHECK_THROWS_AS(p1_blowup_demo(kp(1, 0.25, 2.0), {1e-2, 1e-3}), ValidationError);
    CHECK_THROWS_AS(p1_blowup_demo(p, {1e-3, 1e-2}), ValidationError);
}

TEST_CASE("report CSV") {
    const auto rep = kernel_lr_norm(kp(1, 0.5, 2.0), 1.0);
    std::ostringstream os;
    NormReport::write_csv_header(os);
    rep.write_csv_row(os);
    CHECK(os.str().rfind("n,s,lambda,r,lr_norm,near_origin,tail,extension,err,converged\n1,0.5,2,1,", 0) == 0);
}
