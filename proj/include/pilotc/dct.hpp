#pragma once

// DCT-II / DCT-III pair with the codec's scale factors:
//   forward  C_0 = sqrt(1/n) * sum v_i,   C_k = 2 * sum v_i cos((2i+1)k pi / 2n)  (k >= 1)
//   inverse  v_i = (1/n) * sum_k C_k cos((2i+1)k pi / 2n)                         (all k)
// For zero-sum input C_0 is zero and the pair round-trips exactly. A nonzero
// C_0 is carried through with the 1/n inverse weight and does not round-trip.

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <unordered_map>
#include <vector>

#include "pilotc/fft.hpp"

namespace pilotc {

/// Below this length the O(n^2) sum beats the FFT path.
inline constexpr std::size_t kDctFastPathMin = 16;

inline std::vector<double> dct_forward_direct(std::span<const double> v)
{
    const std::size_t n = v.size();
    std::vector<double> c(n, 0.0);
    if (n == 0) {
        return c;
    }
    double sum = 0.0;
    for (const double x : v) {
        sum += x;
    }
    c[0] = std::sqrt(1.0 / static_cast<double>(n)) * sum;
    const double base = std::numbers::pi / (2.0 * static_cast<double>(n));
    for (std::size_t k = 1; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            // (2i+1)k mod 4n keeps the cosine argument in [0, 2pi).
            const std::size_t phase = ((2 * i + 1) * k) % (4 * n);
            acc += v[i] * std::cos(base * static_cast<double>(phase));
        }
        c[k] = 2.0 * acc;
    }
    return c;
}

inline std::vector<double> dct_inverse_direct(std::span<const double> c)
{
    const std::size_t n = c.size();
    std::vector<double> v(n, 0.0);
    const double base = std::numbers::pi / (2.0 * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t phase = ((2 * i + 1) * k) % (4 * n);
            acc += c[k] * std::cos(base * static_cast<double>(phase));
        }
        v[i] = acc / static_cast<double>(n);
    }
    return v;
}

/// FFT-backed transform for one length. Forward uses the 2n-point symmetric
/// extension; inverse uses a 2n-point zero-padded phase-shifted spectrum.
class DctPlan {
public:
    explicit DctPlan(std::size_t n) : n_(n), fft_(2 * n), phase_(n)
    {
        for (std::size_t k = 0; k < n; ++k) {
            const double angle = -std::numbers::pi * static_cast<double>(k) /
                                 (2.0 * static_cast<double>(n));
            phase_[k] = {std::cos(angle), std::sin(angle)};
        }
    }

    std::size_t size() const noexcept { return n_; }

    std::vector<double> forward(std::span<const double> v) const
    {
        std::vector<detail::cplx> work(2 * n_);
        for (std::size_t i = 0; i < n_; ++i) {
            work[i] = v[i];
            work[2 * n_ - 1 - i] = v[i];
        }
        fft_.forward(work);
        std::vector<double> c(n_);
        c[0] = std::sqrt(1.0 / static_cast<double>(n_)) * 0.5 * work[0].real();
        for (std::size_t k = 1; k < n_; ++k) {
            c[k] = (phase_[k] * work[k]).real();
        }
        return c;
    }

    std::vector<double> inverse(std::span<const double> c) const
    {
        std::vector<detail::cplx> work(2 * n_, detail::cplx{0.0, 0.0});
        // conj of C_k e^{+i pi k / 2n}; a forward FFT of the conjugate gives the
        // positive-exponent sum up to conjugation, which Re() ignores.
        for (std::size_t k = 0; k < n_; ++k) {
            work[k] = c[k] * phase_[k];
        }
        fft_.forward(work);
        std::vector<double> v(n_);
        const double scale = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            v[i] = work[i].real() * scale;
        }
        return v;
    }

private:
    std::size_t n_;
    detail::Fft fft_;
    std::vector<detail::cplx> phase_;
};

namespace detail {

inline const DctPlan& cached_plan(std::size_t n)
{
    thread_local std::unordered_map<std::size_t, std::unique_ptr<const DctPlan>> cache;
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<const DctPlan>(n);
    }
    return *slot;
}

} // namespace detail

inline std::vector<double> dct_forward(std::span<const double> v)
{
    if (v.size() < kDctFastPathMin) {
        return dct_forward_direct(v);
    }
    return detail::cached_plan(v.size()).forward(v);
}

inline std::vector<double> dct_inverse(std::span<const double> c)
{
    if (c.size() < kDctFastPathMin) {
        return dct_inverse_direct(c);
    }
    return detail::cached_plan(c.size()).inverse(c);
}

} // namespace pilotc
