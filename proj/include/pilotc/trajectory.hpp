#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pilotc/errors.hpp"

namespace pilotc {

/// Timestamped points in `dim` spatial dimensions, stored row-major.
struct TrajectoryRecord {
    std::size_t dim = 2;
    std::vector<double> times;
    std::vector<double> coords;  ///< size() * dim values

    TrajectoryRecord() = default;
    explicit TrajectoryRecord(std::size_t dimensions) : dim(dimensions) {}

    std::size_t size() const noexcept { return times.size(); }
    bool empty() const noexcept { return times.empty(); }

    std::span<const double> point(std::size_t i) const noexcept
    {
        return {coords.data() + i * dim, dim};
    }

    void push_back(double t, std::span<const double> p)
    {
        if (p.size() != dim) {
            throw InvalidArgumentError("point has " + std::to_string(p.size()) +
                                       " coordinates, expected " + std::to_string(dim));
        }
        times.push_back(t);
        coords.insert(coords.end(), p.begin(), p.end());
    }

    void reserve(std::size_t n)
    {
        times.reserve(n);
        coords.reserve(n * dim);
    }

    /// Throws InvalidInputError on a non-finite value or a timestamp that
    /// does not strictly increase.
    void validate() const
    {
        if (dim == 0 || dim > 255) {
            throw InvalidInputError("dimension must be in [1, 255]");
        }
        if (coords.size() != times.size() * dim) {
            throw InvalidInputError("coordinate count does not match point count");
        }
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (!std::isfinite(times[i])) {
                throw InvalidInputError("non-finite timestamp at point " + std::to_string(i));
            }
            if (i > 0 && !(times[i] > times[i - 1])) {
                throw InvalidInputError("timestamps not strictly increasing at point " +
                                        std::to_string(i));
            }
        }
        for (std::size_t i = 0; i < coords.size(); ++i) {
            if (!std::isfinite(coords[i])) {
                throw InvalidInputError("non-finite coordinate at point " +
                                        std::to_string(i / dim));
            }
        }
    }
};

/// One sub-trajectory resampled on the grid t0 + j * dt, j = 0..M.
struct UniformSeries {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<std::vector<double>> samples;  ///< [dim][M + 1]

    std::size_t dim() const noexcept { return samples.size(); }
    std::size_t sample_count() const noexcept { return samples.empty() ? 0 : samples[0].size(); }
};

inline double distance(std::span<const double> a, std::span<const double> b) noexcept
{
    double acc = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

} // namespace pilotc
