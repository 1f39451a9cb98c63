/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace logpot {

using Complex = std::complex<double>;

// In-place complex FFT of a fixed row-major shape. Plans are built under a
// global lock; execution is thread-safe. Neither direction is normalized:
//   forward:  X_k = sum_m x_m e^{-2 pi i k m / M}
//   backward: x_m = sum_k X_k e^{+2 pi i k m / M}
class FftPlan {
public:
    explicit FftPlan(std::vector<int> shape);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    void forward(Complex* data) const;
    void backward(Complex* data) const;
    size_t size() const { return size_; }
    const std::vector<int>& shape() const { return shape_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::vector<int> shape_;
    size_t size_ = 0;
};

// Signed lattice index of FFT slot m on an axis of length M: m for m < M/2, m - M otherwise.
inline int fft_index(int m, int M) { return m < M / 2 ? m : m - M; }

} // namespace logpot
