#pragma once

// One block of one spatial dimension: velocities, zero-centering, DCT,
// quantization, truncation, and the inverse.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pilotc/codec.hpp"
#include "pilotc/dct.hpp"
#include "pilotc/errors.hpp"

namespace pilotc {

struct BlockParams {
    QuantStep eps_f;   ///< frequency precision
    double r_ret;      ///< retention rate, (0, 1]
    std::size_t b_s;   ///< nominal velocities per block

    BlockParams(QuantStep eps_f_, double r_ret_, std::size_t b_s_)
        : eps_f(eps_f_), r_ret(r_ret_), b_s(b_s_)
    {
        if (!(r_ret > 0.0 && r_ret <= 1.0)) {
            throw InvalidArgumentError("retention rate must be in (0, 1]");
        }
        if (b_s < 2) {
            throw InvalidArgumentError("block size must be at least 2");
        }
    }
};

struct EncodedBlock {
    std::vector<std::int64_t> q_coeffs;  ///< quantized C_1..C_cF; last entry nonzero
    std::int64_t end_delta_q = 0;        ///< endpoint index delta, filled by the pipeline

    std::size_t c_f() const noexcept { return q_coeffs.size(); }

    friend bool operator==(const EncodedBlock&, const EncodedBlock&) = default;
};

/// Slot count K = max(1, ceil(m * r_ret)); coefficients C_1..C_{K-1} may be kept.
inline std::size_t retained_slots(std::size_t m, double r_ret)
{
    const double raw = std::ceil(static_cast<double>(m) * r_ret - 1e-12);
    return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

/// Zero-centred velocity array V_i = (S_{i+1} - S_i) - (S_m - S_0)/m.
inline std::vector<double> centered_velocities(std::span<const double> samples)
{
    if (samples.size() < 2) {
        throw InvalidArgumentError("a block needs at least one velocity");
    }
    const std::size_t m = samples.size() - 1;
    const double v_avg = (samples[m] - samples[0]) / static_cast<double>(m);
    std::vector<double> v(m);
    for (std::size_t i = 0; i < m; ++i) {
        v[i] = (samples[i + 1] - samples[i]) - v_avg;
    }
    return v;
}

/// Quantizes the retained AC coefficients of `samples` (m + 1 values) and
/// strips trailing zeros. end_delta_q is left at 0.
inline EncodedBlock block_compress(std::span<const double> samples, const BlockParams& p)
{
    if (samples.size() < 2) {
        throw InvalidArgumentError("empty block: need at least two samples");
    }
    const std::size_t m = samples.size() - 1;
    const std::vector<double> v = centered_velocities(samples);
    const std::vector<double> c = dct_forward(v);
    const std::size_t k = std::min(retained_slots(m, p.r_ret), m);

    EncodedBlock out;
    out.q_coeffs.reserve(k > 0 ? k - 1 : 0);
    for (std::size_t j = 1; j < k; ++j) {
        out.q_coeffs.push_back(quantize(c[j], p.eps_f));
    }
    while (!out.q_coeffs.empty() && out.q_coeffs.back() == 0) {
        out.q_coeffs.pop_back();
    }
    return out;
}

/// Rebuilds m + 1 samples from start_value to end_value. The final sample is
/// set to end_value exactly so consecutive blocks share a bit-identical seam.
inline std::vector<double> block_decompress(const EncodedBlock& e, std::size_t m, double start_value,
                                            double end_value, QuantStep eps_f)
{
    if (m == 0) {
        throw InvalidArgumentError("empty block: m must be at least 1");
    }
    if (e.c_f() >= m) {
        throw CorruptionError("malformed block: c_F = " + std::to_string(e.c_f()) +
                              " but only " + std::to_string(m - 1) + " AC slots exist");
    }
    std::vector<double> c(m, 0.0);
    for (std::size_t j = 0; j < e.c_f(); ++j) {
        c[j + 1] = dequantize(e.q_coeffs[j], eps_f);
    }
    const double v_avg = (end_value - start_value) / static_cast<double>(m);
    std::vector<double> s(m + 1);
    s[0] = start_value;
    if (e.c_f() == 0) {
        for (std::size_t i = 0; i < m; ++i) {
            s[i + 1] = start_value + v_avg * static_cast<double>(i + 1);
        }
    } else {
        const std::vector<double> v = dct_inverse(c);
        for (std::size_t i = 0; i < m; ++i) {
            s[i + 1] = s[i] + v[i] + v_avg;
        }
    }
    s[m] = end_value;
    return s;
}

inline std::vector<double> block_decompress(const EncodedBlock& e, std::size_t m, double start_value,
                                            double end_value, const BlockParams& p)
{
    return block_decompress(e, m, start_value, end_value, p.eps_f);
}

} // namespace pilotc
