#pragma once

// Thin FFTW wrapper for square 2D real-to-complex transforms.
//
// Plans are created once per grid size with FFTW_ESTIMATE | FFTW_UNALIGNED and
// executed through the new-array interface, so a single plan can be shared by
// all callers and all threads. Planning itself is serialized by a mutex.

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace besov_mhd::detail {

using Complex = std::complex<double>;

class FftPlan {
public:
    explicit FftPlan(int n) : n_(n) {
        const std::size_t real_size = static_cast<std::size_t>(n) * n;
        const std::size_t spec_size = static_cast<std::size_t>(n) * (n / 2 + 1);
        std::vector<double> r(real_size);
        std::vector<Complex> c(spec_size);
        auto* cptr = reinterpret_cast<fftw_complex*>(c.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        forward_ = fftw_plan_dft_r2c_2d(n, n, r.data(), cptr, flags);
        inverse_ = fftw_plan_dft_c2r_2d(n, n, cptr, r.data(), flags);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(inverse_);
    }

    int n() const { return n_; }

    // Unnormalized forward transform (FFTW sign convention e^{-ikx}).
    void forward(const double* in, Complex* out) const {
        // r2c preserves its input by default.
        fftw_execute_dft_r2c(forward_, const_cast<double*>(in),
                             reinterpret_cast<fftw_complex*>(out));
    }

    // Unnormalized inverse transform. c2r destroys its input, so the
    // coefficients are copied into per-thread scratch first.
    void inverse(const Complex* in, double* out) const {
        thread_local std::vector<Complex> scratch;
        const std::size_t m = static_cast<std::size_t>(n_) * (n_ / 2 + 1);
        scratch.assign(in, in + m);
        fftw_execute_dft_c2r(inverse_, reinterpret_cast<fftw_complex*>(scratch.data()), out);
    }

    static const FftPlan& for_size(int n) {
        static std::mutex mutex;
        static std::map<int, std::unique_ptr<FftPlan>> cache;
        std::lock_guard<std::mutex> lock(mutex);
        auto& slot = cache[n];
        if (!slot) slot = std::make_unique<FftPlan>(n);
        return *slot;
    }

private:
    int n_;
    fftw_plan forward_{};
    fftw_plan inverse_{};
};

}  // namespace besov_mhd::detail
