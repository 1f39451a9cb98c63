/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

#include "logpot/kernels.hpp"

namespace logpot {

// Radial symbols in the variable r = 4 pi^2 |xi|^2:
//   m_log_homog    r^s ln r                              (0 at xi = 0)
//   m_log_inhomog  M = (lambda + r)^s ln(lambda + r)
//   bridge_ratio   r^s ln r / M                          (0 at xi = 0)
//   theta_lambda   M_{lambda} / M_{lambda2}
//   theta1         (1 + r)^s / M
//   theta2         M / (1 + r)^{s + eps/2}
//   lit_ratio_fwd  M / N,  N = (1 + r)^s (1 + ln(1 + r))
//   lit_ratio_bwd  N / M
enum class SymbolId {
    m_log_homog,
    m_log_inhomog,
    bridge_ratio,
    theta_lambda,
    theta1,
    theta2,
    lit_ratio_fwd,
    lit_ratio_bwd
};

std::string to_string(SymbolId id);
SymbolId parse_symbol_id(const std::string& name);

struct SymbolDescriptor {
    SymbolId id = SymbolId::bridge_ratio;
    KernelParams params;
    double lambda2 = 4.0; // theta_lambda only
    double eps = 0.5;     // theta2 only
    double delta1 = 2.0;  // high-frequency decay exponent of the deviation
    double delta2 = 2.0;  // low-frequency vanishing exponent of the deviation
    int N = 3;            // derivative count for Bernstein bounds, > n
    double value_at_zero = 0.0;

    // aux is lambda2 for theta_lambda, eps for theta2, ignored otherwise.
    static SymbolDescriptor make(SymbolId id, const KernelParams& p, double aux = 0.0);

    double operator()(double xi_norm) const;

    // Deviation from the limit whose dyadic blocks are L^1 summable:
    //   deviation = chi (low + cutoff_coeff) + (1 - chi) high.
    // Blocks j <= 0 use low, j >= 1 use high; the chi term is separate.
    double low_part(double xi_norm) const;
    double high_part(double xi_norm) const;
    double cutoff_coeff() const;
    double deviation(double xi_norm) const;
    bool has_deviation() const;
};

double eval_symbol(const SymbolDescriptor& desc, double xi_norm);

// chi0(t) = 1 for t <= 1, 0 for t >= 2, C-infinity in between.
double dyadic_chi(double t);
// phi(t) = chi0(t) - chi0(2t), supported on [1/2, 2].
double dyadic_phi(double t);

struct DyadicPartition {
    int j_min = -8;
    int j_max = 8;

    double phi(int j, double xi_norm) const { return dyadic_phi(std::ldexp(xi_norm, -j)); }
    // Sum of phi_j over j <= 0; equals 1 on |xi| <= 1.
    double chi(double xi_norm) const { return dyadic_chi(xi_norm); }
    // Sum of phi_j over [j_min, j_max].
    double sum(double xi_norm) const;
};

DyadicPartition build_partition(int j_min, int j_max);

struct SymbolMinimum {
    double t_star = 0.0;
    double min_value = 0.0;
    double c0 = 0.0; // 2/(e s); t^s ln t + c0 >= 1/(e s)
};

// Minimizer of t^s ln t; confirmed by a grid search over (0, 10], ContractError otherwise.
SymbolMinimum symbol_min_check(double s);

struct DyadicBlock {
    int j = 0;
    double l1_norm = 0.0;
    // n = 1: kernel samples; n = 2: projection onto the first axis;
    // n = 3: radial samples. Spacing x_step in the scaled variable.
    std::vector<double> grid_kernel;
    double x_step = 0.0;
};

struct SynthesisSpec {
    int oversampling = 8;  // sampling rate over the Nyquist rate of the band |eta| <= 2
    double box = 0.0;      // scaled spatial box; 0 picks 256 (n=1), 64 (n=2), 96 (n=3)
    double tol = 1e-4;     // estimated dyadic tails must fall below tol * total_l1
    bool keep_kernels = true;
};

struct DyadicBlockSet {
    int n = 1;
    std::vector<DyadicBlock> blocks;
    double cutoff_coeff = 0.0;
    double cutoff_l1 = 0.0; // L^1 norm of the inverse transform of chi
    DyadicBlock cutoff;
    double total_l1 = 0.0;  // sum of block norms + |cutoff_coeff| cutoff_l1
    double high_slope = 0.0;
    double low_slope = 0.0;
    bool converged = false;
    std::string diagnostic;

    // Fourier transform of the synthesized kernel at |xi|, by direct summation
    // over the stored discrete kernels.
    double reconstruct(double xi_norm) const;
    void write_csv(std::ostream& os) const;
};

DyadicBlockSet synthesize_l1_kernel(const SymbolDescriptor& desc, const DyadicPartition& part,
                                    const SynthesisSpec& spec = {});
// Single-threaded reference.
DyadicBlockSet synthesize_l1_kernel_serial(const SymbolDescriptor& desc, const DyadicPartition& part,
                                           const SynthesisSpec& spec = {});

// Least-squares slope of log2 ||g_j||_1 against j over [j_lo, j_hi].
double block_slope(const DyadicBlockSet& set, int j_lo, int j_hi);

// sum_{k <= N} 2^{jk} sup |d^k/d|xi|^k (phi_j f)|, radial derivatives by sixth-order
// central differences in the scaled variable.
double bernstein_rhs(const SymbolDescriptor& desc, int j, int N);

// Bridge symbols: w_hat = inhom / (hom + c0), mu_hat = c0 w_hat, c0 = 2/(e s).
double bridge_w_hat(const KernelParams& p, double xi_norm);
double bridge_mu_hat(const KernelParams& p, double xi_norm);

// max |inhom - (mu_hat + w_hat hom)| / (1 + |inhom|) over the samples.
double bridge_identity_check(const KernelParams& p, const std::vector<double>& xi_samples);

enum class SlowPart { inv_log_shifted, inv_one_plus_log };

// 1/ln(lambda + r) = int_0^inf (lambda + r)^{-p} dp, or
// 1/(1 + ln(1 + r)) = int_0^inf e^{-p} (1 + r)^{-p} dp, by quadrature.
double slow_part_laplace(SlowPart id, double lambda, double xi_norm);

void write_symbol_csv(std::ostream& os, const SymbolDescriptor& desc, const std::vector<double>& xi);

} // namespace logpot
