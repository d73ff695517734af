#pragma once

// Evaluation metrics and the closed-form error predictors of the
// uniform-quantization-noise model.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pilotc/errors.hpp"
#include "pilotc/trajectory.hpp"

namespace pilotc {

struct EvalReport {
    std::string name;
    double compression_ratio = 0.0;
    double max_sed = 0.0;
    double mean_sed = 0.0;
    double corrected_fraction = 0.0;
    std::uint64_t raw_bytes = 0;
    std::uint64_t compressed_bytes = 0;
    std::uint64_t points = 0;
};

/// 8-byte reals for the timestamp and each coordinate.
inline std::uint64_t raw_size_bytes(std::size_t points, std::size_t dim)
{
    return static_cast<std::uint64_t>(points) * 8u * (dim + 1);
}

inline double compression_ratio(std::uint64_t compressed_bytes, std::uint64_t raw_bytes)
{
    if (raw_bytes == 0) {
        throw InvalidArgumentError("compression ratio of an empty input");
    }
    return static_cast<double>(compressed_bytes) / static_cast<double>(raw_bytes);
}

/// Sum of container sizes over sum of raw sizes.
inline double compression_ratio(std::span<const TrajectoryRecord> originals,
                                std::span<const std::size_t> container_bytes)
{
    if (originals.empty() || originals.size() != container_bytes.size()) {
        throw InvalidArgumentError("compression ratio needs matched, non-empty sets");
    }
    std::uint64_t raw = 0;
    std::uint64_t packed = 0;
    for (std::size_t i = 0; i < originals.size(); ++i) {
        raw += raw_size_bytes(originals[i].size(), originals[i].dim);
        packed += container_bytes[i];
    }
    return compression_ratio(packed, raw);
}

/// Per-point Euclidean distances between row-major point arrays.
inline std::vector<double> sed_values(std::span<const double> original, std::span<const double> reconstructed,
                                      std::size_t dim)
{
    if (original.size() != reconstructed.size() || dim == 0 || original.size() % dim != 0) {
        throw InvalidArgumentError("SED needs equal-length point sequences");
    }
    const std::size_t n = original.size() / dim;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = distance(original.subspan(i * dim, dim), reconstructed.subspan(i * dim, dim));
    }
    return out;
}

inline double max_sed(std::span<const double> original, std::span<const double> reconstructed, std::size_t dim)
{
    double best = 0.0;
    for (const double e : sed_values(original, reconstructed, dim)) {
        best = std::max(best, e);
    }
    return best;
}

inline double mean_sed(std::span<const double> original, std::span<const double> reconstructed, std::size_t dim)
{
    const std::vector<double> e = sed_values(original, reconstructed, dim);
    if (e.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const double v : e) {
        sum += v;
    }
    return sum / static_cast<double>(e.size());
}

/// Var(dS_k) = (k b_s - k^2) eps_f^2 / (6 b_s^2): variance of the position
/// error k samples into a block when every AC coefficient carries an
/// independent uniform error in [-eps_f, eps_f).
inline double var_delta_s(std::size_t k, std::size_t b_s, double eps_f)
{
    if (k < 1 || k > b_s) {
        throw InvalidArgumentError("k must lie in [1, b_s]");
    }
    const double kk = static_cast<double>(k);
    const double b = static_cast<double>(b_s);
    return (kk * b - kk * kk) * eps_f * eps_f / (6.0 * b * b);
}

/// P(error at the block midpoint exceeds eps) for dim = 2: exp(-12 eps^2 / eps_f^2).
inline double predicted_exceedance(double eps, double eps_f)
{
    if (!(eps > 0.0) || !(eps_f >= 0.0)) {
        throw InvalidArgumentError("eps must be positive and eps_f non-negative");
    }
    if (eps_f == 0.0) {
        return 0.0;
    }
    return std::exp(-12.0 * eps * eps / (eps_f * eps_f));
}

/// P(|X| > r) for X with `dim` independent N(0, sigma^2) components, dim 2 or 3.
inline double chi_exceedance(double r, double sigma, std::size_t dim)
{
    if (!(sigma > 0.0)) {
        throw InvalidArgumentError("sigma must be positive");
    }
    const double z = r / sigma;
    switch (dim) {
    case 2:
        return std::exp(-0.5 * z * z);
    case 3:
        return std::erfc(z / std::numbers::sqrt2) +
               std::sqrt(2.0 / std::numbers::pi) * z * std::exp(-0.5 * z * z);
    default:
        throw InvalidArgumentError("chi distribution implemented for dim 2 and 3 only");
    }
}

/// E|X| / sigma for the same distribution.
inline double chi_mean_factor(std::size_t dim)
{
    switch (dim) {
    case 2:
        return std::sqrt(std::numbers::pi / 2.0);
    case 3:
        return 2.0 * std::sqrt(2.0 / std::numbers::pi);
    default:
        throw InvalidArgumentError("chi distribution implemented for dim 2 and 3 only");
    }
}

/// Expected mean point error over a block, using the large-block limit
/// mean_k sqrt(x - x^2) -> pi/8. With the default eps_f = eps / 0.6 this is
/// about 0.335 eps for dim 2 and 0.426 eps for dim 3.
inline double predicted_mean_error(double eps, std::size_t dim, double eps_f_ratio = 0.6)
{
    if (eps < 0.0) {
        throw InvalidArgumentError("eps must be non-negative");
    }
    const double eps_f = eps / eps_f_ratio;
    return eps_f / std::sqrt(6.0) * (std::numbers::pi / 8.0) * chi_mean_factor(dim);
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least-squares line through (x, y) with its coefficient of determination.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw InvalidArgumentError("linear fit needs at least two matched points");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw InvalidArgumentError("linear fit needs distinct x values");
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

inline bool non_increasing(std::span<const double> v)
{
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[i - 1]) {
            return false;
        }
    }
    return true;
}

} // namespace pilotc
