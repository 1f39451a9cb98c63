/*
 * Copyright 2026 The logpotential authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include "logpot/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "logpot/errors.hpp"

namespace logpot {

namespace {

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

} // namespace

struct FftPlan::Impl {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

FftPlan::FftPlan(std::vector<int> shape) : impl_(std::make_unique<Impl>()), shape_(std::move(shape))
{
    if (shape_.empty() || shape_.size() > 3)
        throw ValidationError("FFT rank must be 1, 2 or 3");
    size_ = 1;
    for (int m : shape_) {
        if (m < 1)
            throw ValidationError("FFT axis length must be positive");
        size_ *= static_cast<size_t>(m);
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* buf = fftw_alloc_complex(size_);
    const int rank = static_cast<int>(shape_.size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    impl_->fwd = fftw_plan_dft(rank, shape_.data(), buf, buf, FFTW_FORWARD, flags);
    impl_->bwd = fftw_plan_dft(rank, shape_.data(), buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
    if (impl_->fwd == nullptr || impl_->bwd == nullptr)
        throw std::runtime_error("FFTW planning failed");
}

FftPlan::~FftPlan()
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (impl_->fwd != nullptr)
        fftw_destroy_plan(impl_->fwd);
    if (impl_->bwd != nullptr)
        fftw_destroy_plan(impl_->bwd);
}

void FftPlan::forward(Complex* data) const
{
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(impl_->fwd, p, p);
}

void FftPlan::backward(Complex* data) const
{
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(impl_->bwd, p, p);
}

} // namespace logpot
