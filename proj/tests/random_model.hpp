#pragma once

// Random structurally valid containers for round-trip and fuzz tests.

#include <cstdint>
#include <random>

#include "pilotc/container.hpp"

namespace pilotc::test_support {

inline CompressedTrajectory random_model(std::mt19937_64& rng)
{
    auto pick = [&](std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    };
    // Mostly small magnitudes with the occasional wide one.
    auto value = [&]() -> std::int64_t {
        switch (pick(0, 9)) {
        case 0:
            return pick(-(std::int64_t{1} << 50), std::int64_t{1} << 50);
        case 1:
            return 0;
        default:
            return pick(-300, 300);
        }
    };

    CompressedTrajectory m;
    m.dim = static_cast<std::uint8_t>(pick(1, 4));
    m.flags = static_cast<std::uint8_t>(pick(0, 255));
    m.chunk_bits = static_cast<std::uint8_t>(pick(1, 9));
    m.eps_t = std::uniform_real_distribution<double>(0.001, 2.0)(rng);
    m.dt = m.eps_t * static_cast<double>(pick(1, 20));
    m.eps = std::uniform_real_distribution<double>(0.1, 200.0)(rng);
    m.eps_p = m.eps * 0.5;
    m.eps_f = m.eps / 0.6;
    m.block_size = static_cast<std::uint64_t>(pick(2, 40));
    m.point_count = static_cast<std::uint64_t>(pick(0, 100000));

    std::int64_t t = pick(0, 1000000);
    for (std::int64_t i = 0, n = pick(0, 5); i < n; ++i) {
        OutlierEntry e;
        e.t_index = t;
        t += pick(1, 5000);
        for (std::size_t d = 0; d < m.dim; ++d) {
            e.coords.push_back(value());
        }
        m.outliers.push_back(e);
    }
    t = pick(0, 1000000);
    for (std::int64_t i = 0, n = pick(0, 6); i < n; ++i) {
        CorrectionEntry e;
        e.t_index = t;
        t += pick(1, 5000);
        for (std::size_t d = 0; d < m.dim; ++d) {
            e.deltas.push_back(value());
        }
        m.corrections.push_back(e);
    }
    t = pick(0, 1000000);
    for (std::int64_t s = 0, n = pick(0, 3); s < n; ++s) {
        SubTrajectory sub;
        sub.t0_index = t;
        sub.sample_count = static_cast<std::uint64_t>(pick(2, 120));
        for (std::size_t d = 0; d < m.dim; ++d) {
            sub.p0.push_back(value());
        }
        const std::uint64_t nb = block_count(sub.sample_count, m.block_size);
        sub.blocks.resize(m.dim);
        for (std::size_t d = 0; d < m.dim; ++d) {
            for (std::uint64_t j = 0; j < nb; ++j) {
                EncodedBlock b;
                b.end_delta_q = value();
                const auto slots = static_cast<std::int64_t>(block_length(sub.sample_count, m.block_size, j));
                const std::int64_t cf = pick(0, slots - 1);
                for (std::int64_t k = 0; k < cf; ++k) {
                    b.q_coeffs.push_back(value());
                }
                if (cf > 0 && b.q_coeffs.back() == 0) {
                    b.q_coeffs.back() = 1;
                }
                sub.blocks[d].push_back(b);
            }
        }
        t = m.end_index(sub) + pick(-3, 2000);
        m.subs.push_back(sub);
    }
    return m;
}

} // namespace pilotc::test_support
