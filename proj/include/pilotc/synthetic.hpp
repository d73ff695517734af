#pragma once

// Synthetic trajectory generator: accelerate / cruise / brake speed profiles
// with smoothly varying heading, optional climb for 3-D, sensor jitter,
// irregular sampling gaps, long pauses and isolated glitch points.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "pilotc/trajectory.hpp"

namespace pilotc {

struct SyntheticSpec {
    std::size_t points = 1000;
    std::size_t dim = 2;
    double sample_dt = 1.0;          ///< nominal gap between samples, s
    double time_resolution = 1.0;    ///< timestamps are multiples of this
    double jitter = 0.0;             ///< white position noise sigma, m
    double max_speed = 30.0;         ///< m/s
    bool irregular = false;          ///< gaps drawn from 1..5 x sample_dt
    double pause_probability = 0.0;  ///< per sample, a gap of 100..1000 x sample_dt
    double glitch_probability = 0.0; ///< per sample, a point displaced by ~10 km
    double t_start = 1.6e9;
    std::uint64_t seed = 1;
};

inline TrajectoryRecord generate_trajectory(const SyntheticSpec& spec)
{
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    TrajectoryRecord out(spec.dim);
    out.reserve(spec.points);

    enum class Phase { accelerate, cruise, brake };
    Phase phase = Phase::accelerate;
    double phase_left = 10.0 + 50.0 * unit(rng);
    double target_speed = spec.max_speed * (0.3 + 0.7 * unit(rng));
    double accel = 0.5 + 1.5 * unit(rng);
    double speed = 0.0;
    double heading = 2.0 * std::numbers::pi * unit(rng);
    double turn_rate = 0.0;
    double turn_target = 0.0;
    double climb = 0.0;
    double climb_target = 0.0;
    std::vector<double> pos(spec.dim, 0.0);
    pos[0] = 1e5 * unit(rng);
    if (spec.dim > 1) {
        pos[1] = 1e5 * unit(rng);
    }

    auto quantized = [&](double t) {
        return std::round(t / spec.time_resolution) * spec.time_resolution;
    };
    double t = quantized(spec.t_start + 1000.0 * unit(rng));
    std::vector<double> sample(spec.dim);

    for (std::size_t i = 0; i < spec.points; ++i) {
        if (i > 0) {
            double gap = spec.sample_dt;
            if (spec.irregular) {
                gap *= static_cast<double>(1 + static_cast<int>(unit(rng) * 5.0));
            }
            if (unit(rng) < spec.pause_probability) {
                gap *= 100.0 + 900.0 * unit(rng);
            }
            gap = std::max(spec.time_resolution, quantized(gap));

            // Integrate in sub-steps so long gaps keep smooth motion.
            double remaining = gap;
            while (remaining > 0.0) {
                const double h = std::min(remaining, 1.0);
                remaining -= h;
                phase_left -= h;
                if (phase_left <= 0.0) {
                    phase = phase == Phase::accelerate ? Phase::cruise
                          : phase == Phase::cruise     ? Phase::brake
                                                       : Phase::accelerate;
                    phase_left = 10.0 + 60.0 * unit(rng);
                    accel = 0.5 + 1.5 * unit(rng);
                    if (phase == Phase::accelerate) {
                        target_speed = spec.max_speed * (0.3 + 0.7 * unit(rng));
                    }
                    turn_target = 0.05 * (unit(rng) - 0.5);
                    climb_target = 2.0 * (unit(rng) - 0.5);
                }
                if (phase == Phase::accelerate) {
                    speed = std::min(target_speed, speed + accel * h);
                } else if (phase == Phase::brake) {
                    speed = std::max(0.0, speed - accel * h);
                }
                turn_rate += (turn_target - turn_rate) * std::min(1.0, h / 10.0);
                climb += (climb_target - climb) * std::min(1.0, h / 20.0);
                heading += turn_rate * h;
                pos[0] += speed * h * std::cos(heading);
                if (spec.dim > 1) {
                    pos[1] += speed * h * std::sin(heading);
                }
                if (spec.dim > 2) {
                    pos[2] += climb * h;
                }
            }
            t = quantized(t + gap);
        }
        for (std::size_t d = 0; d < spec.dim; ++d) {
            sample[d] = pos[d] + spec.jitter * gauss(rng);
        }
        if (spec.glitch_probability > 0.0 && unit(rng) < spec.glitch_probability) {
            sample[0] += 1e4;
        }
        out.push_back(t, sample);
    }
    return out;
}

} // namespace pilotc
