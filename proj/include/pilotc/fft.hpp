#pragma once

// Complex FFT of arbitrary length: iterative radix-2 for powers of two,
// Bluestein's chirp-z for everything else. Plans are immutable once built.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace pilotc::detail {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) noexcept
{
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

class Radix2Fft {
public:
    explicit Radix2Fft(std::size_t n) : n_(n), twiddle_(n / 2), bitrev_(n)
    {
        unsigned log2n = 0;
        while ((std::size_t{1} << log2n) < n) {
            ++log2n;
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (unsigned b = 0; b < log2n; ++b) {
                r |= ((i >> b) & 1u) << (log2n - 1 - b);
            }
            bitrev_[i] = r;
        }
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) /
                                 static_cast<double>(n);
            twiddle_[k] = {std::cos(angle), std::sin(angle)};
        }
    }

    std::size_t size() const noexcept { return n_; }

    /// In-place forward transform (e^{-i...}); `inverse` conjugates the
    /// twiddles and does not scale.
    void transform(std::span<cplx> data, bool inverse) const
    {
        for (std::size_t i = 0; i < n_; ++i) {
            if (i < bitrev_[i]) {
                std::swap(data[i], data[bitrev_[i]]);
            }
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len / 2;
            const std::size_t stride = n_ / len;
            for (std::size_t start = 0; start < n_; start += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    cplx w = twiddle_[j * stride];
                    if (inverse) {
                        w = std::conj(w);
                    }
                    const cplx t = w * data[start + j + half];
                    data[start + j + half] = data[start + j] - t;
                    data[start + j] += t;
                }
            }
        }
    }

private:
    std::size_t n_;
    std::vector<cplx> twiddle_;
    std::vector<std::size_t> bitrev_;
};

class Fft {
public:
    explicit Fft(std::size_t n)
        : n_(n), inner_(is_pow2(n) ? n : next_pow2(2 * n - 1))
    {
        if (is_pow2(n)) {
            return;
        }
        chirp_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            // k^2 mod 2n keeps the angle small and accurate for large k.
            const std::size_t k2 = (k * k) % (2 * n);
            const double angle = -std::numbers::pi * static_cast<double>(k2) /
                                 static_cast<double>(n);
            chirp_[k] = {std::cos(angle), std::sin(angle)};
        }
        const std::size_t m = inner_.size();
        kernel_.assign(m, cplx{0.0, 0.0});
        kernel_[0] = std::conj(chirp_[0]);
        for (std::size_t k = 1; k < n; ++k) {
            kernel_[k] = std::conj(chirp_[k]);
            kernel_[m - k] = std::conj(chirp_[k]);
        }
        inner_.transform(kernel_, false);
    }

    std::size_t size() const noexcept { return n_; }

    /// Unscaled forward DFT: X_k = sum_j x_j e^{-2 pi i jk/n}.
    void forward(std::span<cplx> data) const
    {
        if (chirp_.empty()) {
            inner_.transform(data, false);
            return;
        }
        const std::size_t m = inner_.size();
        std::vector<cplx> work(m, cplx{0.0, 0.0});
        for (std::size_t k = 0; k < n_; ++k) {
            work[k] = data[k] * chirp_[k];
        }
        inner_.transform(work, false);
        for (std::size_t k = 0; k < m; ++k) {
            work[k] *= kernel_[k];
        }
        inner_.transform(work, true);
        const double scale = 1.0 / static_cast<double>(m);
        for (std::size_t k = 0; k < n_; ++k) {
            data[k] = work[k] * scale * chirp_[k];
        }
    }

private:
    std::size_t n_;
    Radix2Fft inner_;
    std::vector<cplx> chirp_;
    std::vector<cplx> kernel_;
};

} // namespace pilotc::detail
