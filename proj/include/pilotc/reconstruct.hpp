#pragma once

// Decompression: rebuild the uniform series of every sub-trajectory and
// answer position queries at arbitrary timestamps.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pilotc/block_coder.hpp"
#include "pilotc/codec.hpp"
#include "pilotc/container.hpp"
#include "pilotc/errors.hpp"
#include "pilotc/trajectory.hpp"

namespace pilotc {

/// Uniform series of one sub-trajectory, chaining blocks on dequantized
/// cumulative endpoints.
inline UniformSeries decompress_sub(const CompressedTrajectory& model, const SubTrajectory& sub)
{
    const std::size_t dim = model.dim;
    const QuantStep p0_step = model.p0_step();
    const QuantStep end_step = model.endpoint_step();
    const QuantStep freq_step = model.freq_step();
    const std::uint64_t b_s = model.block_size;
    const std::uint64_t nb = block_count(sub.sample_count, b_s);

    UniformSeries out;
    out.t0 = static_cast<double>(sub.t0_index) * model.eps_t;
    out.dt = model.dt;
    out.samples.assign(dim, std::vector<double>(sub.sample_count));
    for (std::size_t d = 0; d < dim; ++d) {
        if (sub.blocks.size() != dim || sub.blocks[d].size() != nb) {
            throw CorruptionError("block count does not match sample count");
        }
        std::vector<double>& series = out.samples[d];
        const double p0 = dequantize(sub.p0[d], p0_step);
        series[0] = p0;
        std::int64_t end_q = quantize(p0, end_step);
        double start_value = p0;
        for (std::uint64_t j = 0; j < nb; ++j) {
            const EncodedBlock& block = sub.blocks[d][j];
            const std::uint64_t m = block_length(sub.sample_count, b_s, j);
            end_q = detail::checked_add_parse(end_q, block.end_delta_q);
            const double end_value = dequantize(end_q, end_step);
            const std::vector<double> s =
                block_decompress(block, static_cast<std::size_t>(m), start_value, end_value, freq_step);
            std::copy(s.begin() + 1, s.end(), series.begin() + static_cast<std::ptrdiff_t>(j * b_s + 1));
            start_value = end_value;
        }
    }
    return out;
}

inline std::vector<UniformSeries> decompress_uniform(const CompressedTrajectory& model)
{
    std::vector<UniformSeries> out;
    out.reserve(model.subs.size());
    for (const SubTrajectory& sub : model.subs) {
        out.push_back(decompress_sub(model, sub));
    }
    return out;
}

/// Decoded, immutable view of a container that answers timestamp queries.
class Reconstruction {
public:
    explicit Reconstruction(CompressedTrajectory model)
        : model_(std::move(model)), series_(decompress_uniform(model_))
    {
        const auto by_time = [](const auto& a, const auto& b) { return a.t_index < b.t_index; };
        if (!std::is_sorted(model_.outliers.begin(), model_.outliers.end(), by_time) ||
            !std::is_sorted(model_.corrections.begin(), model_.corrections.end(), by_time)) {
            throw CorruptionError("outlier or correction entries out of time order");
        }
        const auto by_start = [](const SubTrajectory& a, const SubTrajectory& b) {
            return a.t0_index < b.t0_index;
        };
        if (!std::is_sorted(model_.subs.begin(), model_.subs.end(), by_start)) {
            throw CorruptionError("sub-trajectories out of time order");
        }
    }

    const CompressedTrajectory& model() const noexcept { return model_; }
    const std::vector<UniformSeries>& series() const noexcept { return series_; }
    std::size_t dim() const noexcept { return model_.dim; }

    /// Position at `t`; writes dim values into `out`.
    void position(double t, std::span<double> out, bool apply_corrections = true) const
    {
        const std::size_t dim = model_.dim;
        const std::int64_t ti = time_index(t, model_.eps_t);

        const auto outlier = std::lower_bound(
            model_.outliers.begin(), model_.outliers.end(), ti,
            [](const OutlierEntry& e, std::int64_t key) { return e.t_index < key; });
        if (outlier != model_.outliers.end() && outlier->t_index == ti) {
            const QuantStep step = model_.outlier_step();
            for (std::size_t d = 0; d < dim; ++d) {
                out[d] = dequantize(outlier->coords[d], step);
            }
        } else {
            interpolate(t, ti, out);
        }

        if (!apply_corrections) {
            return;
        }
        const auto corr = std::lower_bound(
            model_.corrections.begin(), model_.corrections.end(), ti,
            [](const CorrectionEntry& e, std::int64_t key) { return e.t_index < key; });
        if (corr != model_.corrections.end() && corr->t_index == ti) {
            const QuantStep step = model_.endpoint_step();
            for (std::size_t d = 0; d < dim; ++d) {
                out[d] += dequantize(corr->deltas[d], step);
            }
        }
    }

    /// Positions at every timestamp, row-major (timestamps.size() x dim).
    std::vector<double> query(std::span<const double> timestamps) const
    {
        std::vector<double> out(timestamps.size() * model_.dim);
        for (std::size_t i = 0; i < timestamps.size(); ++i) {
            position(timestamps[i], std::span<double>(out.data() + i * model_.dim, model_.dim));
        }
        return out;
    }

private:
    void interpolate(double t, std::int64_t ti, std::span<double> out) const
    {
        // Latest sub-trajectory starting at or before ti; later ones shadow
        // the grid overshoot of earlier ones.
        const auto it = std::upper_bound(
            model_.subs.begin(), model_.subs.end(), ti,
            [](std::int64_t key, const SubTrajectory& s) { return key < s.t0_index; });
        if (it == model_.subs.begin()) {
            throw OutOfRangeError(t);
        }
        const std::size_t idx = static_cast<std::size_t>(std::distance(model_.subs.begin(), it)) - 1;
        const SubTrajectory& sub = model_.subs[idx];
        if (ti > model_.end_index(sub)) {
            throw OutOfRangeError(t);
        }
        const UniformSeries& s = series_[idx];
        const double last = static_cast<double>(sub.sample_count - 1);
        const double u = std::clamp((t - s.t0) / s.dt, 0.0, last);
        const std::size_t b = std::min(static_cast<std::size_t>(u), sub.sample_count - 2);
        const double frac = u - static_cast<double>(b);
        for (std::size_t d = 0; d < s.samples.size(); ++d) {
            const double lo = s.samples[d][b];
            const double hi = s.samples[d][b + 1];
            out[d] = lo + frac * (hi - lo);
        }
    }

    CompressedTrajectory model_;
    std::vector<UniformSeries> series_;
};

/// Convenience: decode `model` and query every timestamp.
inline std::vector<double> query(const CompressedTrajectory& model, std::span<const double> timestamps)
{
    return Reconstruction(model).query(timestamps);
}

} // namespace pilotc
