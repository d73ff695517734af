#pragma once

// End-to-end compression: fragment segmentation, grid selection, uniform
// resampling, per-dimension block coding, outlier collection and the
// post-compression correction pass.

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
#include "pilotc/params.hpp"
#include "pilotc/reconstruct.hpp"
#include "pilotc/trajectory.hpp"

namespace pilotc {

/// Half-open index range [begin, end) of a trajectory.
struct Fragment {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const Fragment&, const Fragment&) = default;
};

struct Segmentation {
    std::vector<Fragment> fragments;          ///< at least 3 points each
    std::vector<std::size_t> outlier_points;  ///< indices of points in shorter runs
};

/// Splits `traj` into temporally continuous fragments. A new fragment starts
/// at point j when the jump exceeds v_max times the gap, or the gap exceeds
/// b_s times the running mean spacing of the current fragment (`default_dt`
/// while it holds a single point). Runs of one or two points are outliers.
inline Segmentation segment(const TrajectoryRecord& traj, const CodecParams& params, double default_dt)
{
    Segmentation out;
    const std::size_t n = traj.size();
    if (n == 0) {
        return out;
    }
    const double b_s = static_cast<double>(params.b_s);
    auto close = [&](std::size_t begin, std::size_t end) {
        if (end - begin >= 3) {
            out.fragments.push_back({begin, end});
        } else {
            for (std::size_t i = begin; i < end; ++i) {
                out.outlier_points.push_back(i);
            }
        }
    };

    std::size_t start = 0;
    for (std::size_t j = 1; j < n; ++j) {
        const double gap = traj.times[j] - traj.times[j - 1];
        const double jump = distance(traj.point(j), traj.point(j - 1));
        const std::size_t count = j - start;
        const double mean_gap =
            count == 1 ? default_dt : (traj.times[j] - traj.times[start]) / static_cast<double>(count);
        if (jump > gap * params.v_max || gap > b_s * mean_gap) {
            close(start, j);
            start = j;
        }
    }
    close(start, n);
    return out;
}

/// Duration sum over point-count sum, snapped to a positive multiple of eps_t.
inline double choose_dt(const TrajectoryRecord& traj, std::span<const Fragment> fragments, double eps_t)
{
    if (fragments.empty()) {
        throw InvalidArgumentError("choose_dt needs at least one fragment");
    }
    double duration = 0.0;
    double points = 0.0;
    for (const Fragment& f : fragments) {
        duration += traj.times[f.end - 1] - traj.times[f.begin];
        points += static_cast<double>(f.size());
    }
    const double steps = std::round(duration / points / eps_t);
    return std::max(1.0, steps) * eps_t;
}

/// Linear interpolation onto t0 + j * dt, j = 0..M with
/// M = max(1, ceil((t_last - t0) / dt)). Grid points outside the fragment's
/// time span clamp to its first or last point.
inline UniformSeries resample(const TrajectoryRecord& traj, const Fragment& frag, double dt, double t0)
{
    if (frag.size() < 2) {
        throw InvalidArgumentError("resample needs at least two points");
    }
    if (!(dt > 0.0)) {
        throw InvalidArgumentError("resample needs a positive dt");
    }
    const std::size_t dim = traj.dim;
    const double t_first = traj.times[frag.begin];
    const double t_last = traj.times[frag.end - 1];
    const double raw = std::ceil((t_last - t0) / dt - 1e-9);
    const std::size_t m = raw < 1.0 ? 1 : static_cast<std::size_t>(raw);

    UniformSeries out;
    out.t0 = t0;
    out.dt = dt;
    out.samples.assign(dim, std::vector<double>(m + 1));
    std::size_t a = frag.begin;
    for (std::size_t j = 0; j <= m; ++j) {
        const double tau = t0 + static_cast<double>(j) * dt;
        if (tau <= t_first) {
            for (std::size_t d = 0; d < dim; ++d) {
                out.samples[d][j] = traj.point(frag.begin)[d];
            }
            continue;
        }
        if (tau >= t_last) {
            for (std::size_t d = 0; d < dim; ++d) {
                out.samples[d][j] = traj.point(frag.end - 1)[d];
            }
            continue;
        }
        while (traj.times[a + 1] < tau) {
            ++a;
        }
        const double ta = traj.times[a];
        const double tb = traj.times[a + 1];
        const double w = (tau - ta) / (tb - ta);
        const auto pa = traj.point(a);
        const auto pb = traj.point(a + 1);
        for (std::size_t d = 0; d < dim; ++d) {
            out.samples[d][j] = pa[d] + w * (pb[d] - pa[d]);
        }
    }
    return out;
}

inline UniformSeries resample(const TrajectoryRecord& traj, const Fragment& frag, double dt)
{
    return resample(traj, frag, dt, traj.times[frag.begin]);
}

namespace detail {

inline double median_gap(const TrajectoryRecord& traj, double fallback)
{
    if (traj.size() < 2) {
        return fallback;
    }
    std::vector<double> gaps(traj.size() - 1);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        gaps[i - 1] = traj.times[i] - traj.times[i - 1];
    }
    const auto mid = gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2);
    std::nth_element(gaps.begin(), mid, gaps.end());
    return *mid;
}

inline SubTrajectory encode_fragment(const TrajectoryRecord& traj, const Fragment& frag,
                                     const CodecParams& params, const CompressedTrajectory& model)
{
    const std::size_t dim = traj.dim;
    SubTrajectory sub;
    sub.t0_index = time_index(traj.times[frag.begin], params.eps_t);
    const double t0 = static_cast<double>(sub.t0_index) * params.eps_t;
    const UniformSeries series = resample(traj, frag, model.dt, t0);
    sub.sample_count = series.sample_count();

    const BlockParams bp = params.block_params();
    const QuantStep p0_step = model.p0_step();
    const QuantStep end_step = model.endpoint_step();
    const std::uint64_t nb = block_count(sub.sample_count, params.b_s);
    sub.p0.resize(dim);
    sub.blocks.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        const std::vector<double>& s = series.samples[d];
        sub.p0[d] = quantize(s[0], p0_step);
        std::int64_t prev_q = quantize(dequantize(sub.p0[d], p0_step), end_step);
        sub.blocks[d].reserve(nb);
        for (std::uint64_t j = 0; j < nb; ++j) {
            const std::size_t begin = static_cast<std::size_t>(j * params.b_s);
            const std::size_t m = static_cast<std::size_t>(block_length(sub.sample_count, params.b_s, j));
            EncodedBlock block = block_compress(std::span<const double>(s.data() + begin, m + 1), bp);
            const std::int64_t end_q = quantize(s[begin + m], end_step);
            block.end_delta_q = checked_sub(end_q, prev_q);
            prev_q = end_q;
            sub.blocks[d].push_back(std::move(block));
        }
    }
    return sub;
}

} // namespace detail

/// Decodes `model` at every original timestamp and appends a correction
/// entry for each point further than eps from its original. Returns the
/// number of entries added.
inline std::size_t validate_and_correct(const TrajectoryRecord& traj, CompressedTrajectory& model)
{
    const std::size_t dim = traj.dim;
    const Reconstruction rec(model);
    const QuantStep step = model.endpoint_step();
    std::vector<CorrectionEntry> added;
    std::vector<double> p(dim);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        rec.position(traj.times[i], p, false);
        const auto orig = traj.point(i);
        if (distance(orig, p) > model.eps) {
            CorrectionEntry e;
            e.t_index = time_index(traj.times[i], model.eps_t);
            e.deltas.resize(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                e.deltas[d] = quantize(orig[d] - p[d], step);
            }
            added.push_back(std::move(e));
        }
    }
    const std::size_t count = added.size();
    model.corrections.insert(model.corrections.end(), std::make_move_iterator(added.begin()),
                             std::make_move_iterator(added.end()));
    std::sort(model.corrections.begin(), model.corrections.end(),
              [](const CorrectionEntry& a, const CorrectionEntry& b) { return a.t_index < b.t_index; });
    return count;
}

/// Compresses one trajectory. Timestamps must be non-negative and map to
/// distinct multiples of eps_t.
inline CompressedTrajectory compress(const TrajectoryRecord& traj, const CodecParams& params)
{
    traj.validate();
    params.validate();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.times[i] < 0.0) {
            throw InvalidInputError("negative timestamp at point " + std::to_string(i));
        }
        if (i > 0 && time_index(traj.times[i], params.eps_t) <= time_index(traj.times[i - 1], params.eps_t)) {
            throw InvalidInputError("timestamps closer than eps_t at point " + std::to_string(i));
        }
    }

    CompressedTrajectory model;
    model.dim = static_cast<std::uint8_t>(traj.dim);
    model.chunk_bits = static_cast<std::uint8_t>(params.chunk_bits);
    model.eps = params.eps;
    model.eps_t = params.eps_t;
    model.eps_p = params.eps_p;
    model.eps_f = params.eps_f;
    model.block_size = params.b_s;
    model.point_count = traj.size();

    const double default_dt = detail::median_gap(traj, params.eps_t);
    const Segmentation seg = segment(traj, params, default_dt);
    if (seg.fragments.empty()) {
        model.dt = std::max(1.0, std::round(default_dt / params.eps_t)) * params.eps_t;
    } else {
        model.dt = choose_dt(traj, seg.fragments, params.eps_t);
    }

    model.subs.reserve(seg.fragments.size());
    for (const Fragment& f : seg.fragments) {
        model.subs.push_back(detail::encode_fragment(traj, f, params, model));
    }

    const QuantStep outlier_step = model.outlier_step();
    std::vector<std::size_t> outliers = seg.outlier_points;
    std::sort(outliers.begin(), outliers.end());
    for (const std::size_t i : outliers) {
        OutlierEntry e;
        e.t_index = time_index(traj.times[i], params.eps_t);
        e.coords.resize(traj.dim);
        for (std::size_t d = 0; d < traj.dim; ++d) {
            e.coords[d] = quantize(traj.point(i)[d], outlier_step);
        }
        model.outliers.push_back(std::move(e));
    }

    validate_and_correct(traj, model);
    return model;
}

inline std::vector<std::uint8_t> compress_to_bytes(const TrajectoryRecord& traj, const CodecParams& params)
{
    return serialize(compress(traj, params));
}

} // namespace pilotc
