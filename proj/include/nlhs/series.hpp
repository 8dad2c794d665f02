// SPDX-License-Identifier: Apache-2.0
//
// series.hpp - uniformly sampled time series and radar configuration types.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlhs {

using cdouble = std::complex<double>;

/// Raised for invalid input and violated preconditions across the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) {
        throw Error(what);
    }
}

/// Uniformly sampled real signal (displacement, derivatives, envelopes).
struct RealSeries {
    std::vector<double> samples;
    double t0 = 0.01;          ///< sampling interval [s]
    double start_time = 0.0;   ///< time of samples[0] [s]

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double fs() const { return 1.0 / t0; }
    double time(std::size_t i) const { return start_time + static_cast<double>(i) * t0; }
    double duration() const { return static_cast<double>(samples.size()) * t0; }

    void validate() const {
        require(t0 > 0.0 && std::isfinite(t0), "sampling interval must be positive");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!std::isfinite(samples[i])) {
                throw Error("non-finite sample at index " + std::to_string(i));
            }
        }
    }
};

/// Uniformly sampled complex slow-time signal (one range bin).
struct ComplexSeries {
    std::vector<cdouble> samples;
    double t0 = 0.01;
    double start_time = 0.0;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double fs() const { return 1.0 / t0; }
    double time(std::size_t i) const { return start_time + static_cast<double>(i) * t0; }

    void validate() const {
        require(t0 > 0.0 && std::isfinite(t0), "sampling interval must be positive");
        require(!samples.empty(), "empty input");
    }
};

/// Complex slow-time data for a set of range bins, stored row-major
/// as [slow-time index][range-bin index].
class RangeBinMatrix {
public:
    RangeBinMatrix() = default;
    RangeBinMatrix(std::size_t n_times, std::size_t n_bins, double t0, double bin_spacing = 0.0,
                   double start_time = 0.0)
        : n_times_(n_times), n_bins_(n_bins), data_(n_times * n_bins), t0_(t0),
          bin_spacing_(bin_spacing), start_time_(start_time) {
        require(t0 > 0.0, "sampling interval must be positive");
    }

    std::size_t n_times() const { return n_times_; }
    std::size_t n_bins() const { return n_bins_; }
    bool empty() const { return n_times_ == 0 || n_bins_ == 0; }
    double t0() const { return t0_; }
    double bin_spacing() const { return bin_spacing_; }
    double start_time() const { return start_time_; }

    cdouble& operator()(std::size_t t, std::size_t bin) { return data_[t * n_bins_ + bin]; }
    const cdouble& operator()(std::size_t t, std::size_t bin) const { return data_[t * n_bins_ + bin]; }

    ComplexSeries column(std::size_t bin) const {
        require(bin < n_bins_, "range bin index out of range");
        ComplexSeries s;
        s.t0 = t0_;
        s.start_time = start_time_;
        s.samples.resize(n_times_);
        for (std::size_t t = 0; t < n_times_; ++t) {
            s.samples[t] = (*this)(t, bin);
        }
        return s;
    }

    void set_column(std::size_t bin, const std::vector<cdouble>& values) {
        require(bin < n_bins_ && values.size() == n_times_, "column shape mismatch");
        for (std::size_t t = 0; t < n_times_; ++t) {
            (*this)(t, bin) = values[t];
        }
    }

private:
    std::size_t n_times_ = 0;
    std::size_t n_bins_ = 0;
    std::vector<cdouble> data_;
    double t0_ = 0.01;
    double bin_spacing_ = 0.0;
    double start_time_ = 0.0;
};

inline constexpr double speed_of_light = 299792458.0;

/// Radar wavelength and slow-time rate. The default wavelength is the
/// 62 GHz band centre of a 60-64 GHz FMCW sensor; slow time is sampled
/// every 10 ms.
struct RadarConfig {
    double wavelength = speed_of_light / 62e9;
    double fs = 100.0;

    void validate() const {
        require(wavelength > 0.0, "wavelength must be positive");
        require(fs > 0.0, "fs must be positive");
    }
};

}  // namespace nlhs
