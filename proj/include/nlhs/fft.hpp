// SPDX-License-Identifier: Apache-2.0
//
// fft.hpp - thin RAII wrapper over FFTW's real-to-complex transform.

#pragma once

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "nlhs/series.hpp"

namespace nlhs::fft {

namespace detail {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct BufferDeleter {
    void operator()(void* p) const { fftw_free(p); }
};

// FFTW planning is not thread-safe; execution with new-array execute is.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

inline fftw_plan r2c_plan(std::size_t n) {
    static std::map<std::size_t, PlanPtr> cache;
    std::lock_guard lock(planner_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) {
        return it->second.get();
    }
    std::unique_ptr<double, BufferDeleter> in(fftw_alloc_real(n));
    std::unique_ptr<fftw_complex, BufferDeleter> out(fftw_alloc_complex(n / 2 + 1));
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
    require(plan != nullptr, "FFT planning failed");
    cache.emplace(n, PlanPtr(plan));
    return plan;
}

}  // namespace detail

/// One-sided DFT (bins 0..n/2) of `x` zero-padded to length n.
inline std::vector<std::complex<double>> rfft(std::span<const double> x, std::size_t n) {
    require(n >= x.size() && n >= 2, "FFT length shorter than input");
    fftw_plan plan = detail::r2c_plan(n);
    std::unique_ptr<double, detail::BufferDeleter> in(fftw_alloc_real(n));
    std::unique_ptr<fftw_complex, detail::BufferDeleter> out(fftw_alloc_complex(n / 2 + 1));
    std::copy(x.begin(), x.end(), in.get());
    std::fill(in.get() + x.size(), in.get() + n, 0.0);
    fftw_execute_dft_r2c(plan, in.get(), out.get());
    std::vector<std::complex<double>> result(n / 2 + 1);
    for (std::size_t k = 0; k < result.size(); ++k) {
        result[k] = {out.get()[k][0], out.get()[k][1]};
    }
    return result;
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

}  // namespace nlhs::fft
