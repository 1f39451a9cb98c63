/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <stdexcept>
#include <string>

namespace logpot {

// Bad parameters or inputs; maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to reach its tolerance; exit code 3.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best = 0.0, double err = 0.0)
        : std::runtime_error(what), best_value(best), err_estimate(err) {}
    double best_value;
    double err_estimate;
};

// A mathematical contract of the operator was violated; exit code 4.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace logpot
