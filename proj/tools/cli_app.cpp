/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "cli_app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "logpot/analysis.hpp"
#include "logpot/asymptotics.hpp"
#include "logpot/csv.hpp"
#include "logpot/errors.hpp"
#include "logpot/field_io.hpp"
#include "logpot/kernels.hpp"
#include "logpot/spectral.hpp"
#include "logpot/symbols.hpp"

namespace logpot::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Parameter string for the provenance header: every option of the command
// except outputs, with its effective value.
std::string canonical(const CLI::App* cmd)
{
    std::map<std::string, std::string> kv;
    for (const CLI::Option* opt : cmd->get_options()) {
        if (opt->get_lnames().empty())
            continue;
        const std::string name = opt->get_lnames().front();
        if (name == "help" || name == "out" || name == "field-out")
            continue;
        std::string value = opt->get_default_str();
        if (opt->count() > 0) {
            value.clear();
            for (const auto& r : opt->results())
                value += (value.empty() ? "" : " ") + r;
        }
        kv[name] = value;
    }
    return canonical_params(kv);
}

// --out path, or the fallback stream when the path is empty.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw ValidationError("cannot open output file '" + path + "'");
            os_ = file_.get();
        }
    }
    std::ostream& operator*() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

struct KernelOpts {
    int n = 1;
    double s = 0.5;
    double lambda = 2.0;

    void add(CLI::App* cmd)
    {
        cmd->add_option("--n", n, "dimension");
        cmd->add_option("--s", s, "order s > 0");
        cmd->add_option("--lambda", lambda, "shift, > 1");
    }
    KernelParams params() const { return KernelParams::make(n, s, lambda); }
};

double residual_l2(const SpectralField& a, const SpectralField& b)
{
    const auto& va = a.values();
    const auto& vb = b.values();
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < va.size(); ++i) {
        num += (va[i] - vb[i]) * (va[i] - vb[i]);
        den += vb[i] * vb[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

} // namespace

std::map<std::string, std::string> read_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key=value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args = args_in;
    try {
        // Config entries become flags unless the same flag is on the command line.
        std::string config;
        for (size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) {
                config = args[i + 1];
                args.erase(args.begin() + i, args.begin() + i + 2);
                break;
            }
            if (args[i].rfind("--config=", 0) == 0) {
                config = args[i].substr(9);
                args.erase(args.begin() + i);
                break;
            }
        }
        if (!config.empty()) {
            for (const auto& [k, v] : read_config(config)) {
                const std::string flag = "--" + k;
                const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
                    return a == flag || a.rfind(flag + "=", 0) == 0;
                });
                if (!given) {
                    args.push_back(flag);
                    args.push_back(v);
                }
            }
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }

    CLI::App app{"logpotential: logarithmic Bessel and Riesz potential kernels"};
    app.name("logpotential");
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "seed for randomized fields");

    // eval
    CLI::App* eval = app.add_subcommand("eval", "tabulate K on a log-spaced radius grid");
    KernelOpts eval_k;
    eval_k.add(eval);
    double r_min = 1e-3, r_max = 10.0;
    int points = 64;
    std::string route = "auto", eval_out;
    eval->add_option("--r-min", r_min);
    eval->add_option("--r-max", r_max);
    eval->add_option("--points", points);
    eval->add_option("--route", route, "heat | hankel | laplace | auto");
    eval->add_option("--out", eval_out, "CSV path (stdout if omitted)");

    // asymp
    CLI::App* asymp = app.add_subcommand("asymp", "fit origin or far-field asymptotics");
    KernelOpts asymp_k;
    asymp_k.add(asymp);
    std::string regime = "origin", asymp_out;
    int asymp_points = 40;
    double a_min = 0.0, a_max = 0.0;
    asymp->add_option("--regime", regime, "origin | infinity")->check(CLI::IsMember({"origin", "infinity"}));
    asymp->add_option("--points", asymp_points);
    asymp->add_option("--r-min", a_min, "window start (0: default window)");
    asymp->add_option("--r-max", a_max, "window end (0: default window)");
    asymp->add_option("--out", asymp_out);

    // solve
    CLI::App* solve = app.add_subcommand("solve", "invert an operator spectrally on a periodic grid");
    KernelOpts solve_k;
    solve_k.add(solve);
    int grid_m = 256;
    double box = 40.0;
    std::string equation = "inhom", input, solve_out, field_out, zero_mode = "require";
    solve->add_option("--grid", grid_m, "points per axis (power of two)");
    solve->add_option("--box", box, "box length");
    solve->add_option("--equation", equation)->check(CLI::IsMember({"inhom", "hom"}));
    solve->add_option("--zero-mode", zero_mode)->check(CLI::IsMember({"require", "project"}));
    solve->add_option("--input", input, "field file (Gaussian if omitted)");
    solve->add_option("--out", solve_out);
    solve->add_option("--field-out", field_out, "write the solution field");

    // dyadic
    CLI::App* dyadic = app.add_subcommand("dyadic", "dyadic L1 synthesis of a symbol deviation");
    KernelOpts dy_k;
    dy_k.add(dyadic);
    std::string symbol = "bridge", dy_out;
    double aux = 0.0, dy_box = 0.0, dy_tol = 1e-4;
    int j_min = -24, j_max = 10, oversampling = 8;
    dyadic->add_option("--symbol", symbol);
    dyadic->add_option("--aux", aux, "lambda2 (theta_lambda) or eps (theta2); 0 keeps the default");
    dyadic->add_option("--j-min", j_min);
    dyadic->add_option("--j-max", j_max);
    dyadic->add_option("--oversampling", oversampling);
    dyadic->add_option("--box", dy_box, "scaled box (0: automatic)");
    dyadic->add_option("--tol", dy_tol);
    dyadic->add_option("--out", dy_out);

    // norms
    CLI::App* norms = app.add_subcommand("norms", "L^r norm of K");
    KernelOpts nm_k;
    nm_k.add(norms);
    std::string r_spec = "critical", nm_out;
    double rho_c = 1e-12;
    norms->add_option("--r", r_spec, "exponent, or 'critical' for n/(n-2s)");
    norms->add_option("--rho-c", rho_c, "radius below which the fitted origin law is used");
    norms->add_option("--out", nm_out);

    // modulus
    CLI::App* modulus = app.add_subcommand("modulus", "log modulus of continuity on the line n = 2sp");
    int md_n = 1, md_m = 1 << 20, kmax = 4096;
    double md_p = 2.0, md_lambda = 2.0, md_box = 1.0;
    std::string field_kind = "extremal", md_out;
    modulus->add_option("--n", md_n);
    modulus->add_option("--p", md_p);
    modulus->add_option("--lambda", md_lambda);
    modulus->add_option("--grid", md_m);
    modulus->add_option("--box", md_box);
    modulus->add_option("--field", field_kind)->check(CLI::IsMember({"extremal", "random"}));
    modulus->add_option("--kmax", kmax, "band limit of random fields");
    modulus->add_option("--out", md_out);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (eval->parsed()) {
            const KernelParams p = eval_k.params();
            const Route rt = parse_route(route);
            const RadialProfile prof = tabulate_profile(p, r_min, r_max, points, rt);
            Sink sink(eval_out, out);
            write_provenance(*sink, "eval", canonical(eval));
            prof.write_csv(*sink);
            if (prof.partial) {
                err << "error: some radii failed to converge (NaN rows)\n";
                return no_convergence;
            }
            return ok;
        }
        if (asymp->parsed()) {
            const KernelParams p = asymp_k.params();
            if (asymp_points < 3)
                throw ValidationError("points must be >= 3");
            AsymptoticReport rep;
            if (regime == "origin") {
                const auto radii = a_min > 0.0 && a_max > 0.0 ? log_spaced(a_min, a_max, asymp_points)
                                                              : origin_radii(p, asymp_points);
                rep = verify_origin(p, tabulate_radii(p, radii));
            } else {
                const double lo = a_min > 0.0 ? a_min : 5.0;
                const double hi = a_max > 0.0 ? a_max : 40.0;
                rep = verify_infinity(p, tabulate_profile(p, lo, hi, asymp_points));
            }
            Sink sink(asymp_out, out);
            write_provenance(*sink, "asymp", canonical(asymp));
            AsymptoticReport::write_csv_header(*sink);
            rep.write_csv_row(*sink);
            if (!rep.note.empty())
                err << "note: " << rep.note << '\n';
            if (!rep.converged) {
                err << "error: asymptotic fit did not converge (residual " << rep.fit_residual << ")\n";
                return no_convergence;
            }
            return ok;
        }
        if (solve->parsed()) {
            KernelParams p = solve_k.params();
            SpectralField f;
            if (!input.empty()) {
                f = load_field(input);
                if (f.grid().n != p.n)
                    throw ValidationError("input field dimension differs from --n");
            } else {
                const SpectralGrid g = SpectralGrid::make(p.n, box, grid_m);
                f = SpectralField::sample(g, [&](const double* x) {
                    double r2 = 0.0;
                    for (int a = 0; a < g.n; ++a)
                        r2 += x[a] * x[a];
                    return std::exp(-r2);
                });
            }
            SpectralField u, back, target = f;
            if (equation == "inhom") {
                u = solve_inhomogeneous(f, p);
                back = apply_multiplier(u, inhom_multiplier(p));
            } else {
                const auto rule = zero_mode == "project" ? ZeroModeRule::project : ZeroModeRule::require_zero_mean;
                u = solve_homogeneous(f, p, rule);
                back = apply_multiplier(u, hom_multiplier(p.s));
                target.mutable_coeffs()[0] = 0.0;
            }
            Sink sink(solve_out, out);
            write_provenance(*sink, "solve", canonical(solve));
            *sink << "equation,n,M,box,residual,l2_input,l2_solution\n"
                  << equation << ',' << f.grid().n << ',' << f.grid().M << ',' << fmt_double(f.grid().box) << ','
                  << fmt_double(residual_l2(back, target)) << ',' << fmt_double(f.l2_norm()) << ','
                  << fmt_double(u.l2_norm()) << '\n';
            if (!field_out.empty()) {
                std::ostringstream prov;
                write_provenance(prov, "solve", canonical(solve));
                save_field(field_out, u, prov.str());
            }
            return ok;
        }
        if (dyadic->parsed()) {
            const KernelParams p = dy_k.params();
            const SymbolDescriptor desc = SymbolDescriptor::make(parse_symbol_id(symbol), p, aux);
            SynthesisSpec spec;
            spec.oversampling = oversampling;
            spec.box = dy_box;
            spec.tol = dy_tol;
            spec.keep_kernels = false;
            const DyadicBlockSet set = synthesize_l1_kernel(desc, build_partition(j_min, j_max), spec);
            Sink sink(dy_out, out);
            write_provenance(*sink, "dyadic", canonical(dyadic));
            set.write_csv(*sink);
            err << "total_l1=" << fmt_double(set.total_l1) << " high_slope=" << fmt_double(set.high_slope)
                << " low_slope=" << fmt_double(set.low_slope) << " converged=" << (set.converged ? "true" : "false")
                << '\n';
            if (!set.converged) {
                err << "error: dyadic sum not converged: " << set.diagnostic << '\n';
                return no_convergence;
            }
            return ok;
        }
        if (norms->parsed()) {
            const KernelParams p = nm_k.params();
            double r = 0.0;
            if (r_spec == "critical") {
                r = critical_exponents(p.n, p.s).r;
            } else {
                try {
                    r = std::stod(r_spec);
                } catch (const std::exception&) {
                    throw ValidationError("--r must be a number or 'critical'");
                }
            }
            const NormReport rep = kernel_lr_norm(p, r, rho_c);
            Sink sink(nm_out, out);
            write_provenance(*sink, "norms", canonical(norms));
            NormReport::write_csv_header(*sink);
            rep.write_csv_row(*sink);
            if (!rep.converged) {
                err << "error: L^r integral not converged" << (rep.note.empty() ? "" : ": " + rep.note) << '\n';
                return no_convergence;
            }
            return ok;
        }
        if (modulus->parsed()) {
            const KernelParams p = critical_line_params(md_n, md_p, md_lambda);
            const SpectralGrid g = SpectralGrid::make(md_n, md_box, md_m);
            const SpectralField f =
                field_kind == "random" ? random_bandlimited_field(g, kmax, seed) : near_extremal_field(g, md_p);
            const ModulusReport rep = log_modulus_check(p, md_p, f);
            Sink sink(md_out, out);
            write_provenance(*sink, "modulus", canonical(modulus) + ";seed=" + std::to_string(seed));
            ModulusReport::write_csv_header(*sink);
            rep.write_csv(*sink);
            err << "fitted_exponent=" << fmt_double(rep.fitted_exponent)
                << " bound=" << fmt_double(-1.0 / md_p + 0.15) << '\n';
            if (!rep.holds()) {
                err << "error: fitted exponent exceeds the -1/p bound\n";
                return contract;
            }
            return ok;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << " (best " << e.best_value << ", err " << e.err_estimate << ")\n";
        return no_convergence;
    } catch (const ContractError& e) {
        err << "error: " << e.what() << '\n';
        return contract;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return no_convergence;
    }
    return usage;
}

} // namespace logpot::cli
