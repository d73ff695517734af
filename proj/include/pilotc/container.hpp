#pragma once

// In-memory compressed trajectory and its bit-exact .plc serialization.
//
// Layout, version 1 (Varint/signed fields use the header's chunk length l;
// "signed" means enhanced Zigzag then Varint):
//
//   bytes   "PLTC" | version | dim | flags | l
//   f64 LE  dt | eps | eps_t | eps_p | eps_f
//   varint  b_s | point_count | sub_count | outlier_count | correction_count
//   outliers     varint t-index delta, dim x signed coordinate-index delta
//   corrections  varint t-index delta, dim x signed residual index
//   sub-trajectories
//            signed t0-index delta from the previous sub-trajectory's end index
//            dim x signed p0 index (step eps_p)
//            varint sample count (M + 1)
//            per dimension, per block: signed end delta (step eps_p / sqrt(dim)),
//                                      varint c_F, c_F x signed coefficient
//   zero bits to the next byte boundary
//
// Archives concatenate containers, each prefixed by its byte length as a
// 7-bit-chunk Varint (which is byte aligned, i.e. LEB128).

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pilotc/bitstream.hpp"
#include "pilotc/block_coder.hpp"
#include "pilotc/codec.hpp"
#include "pilotc/errors.hpp"

namespace pilotc {

inline constexpr std::array<std::uint8_t, 4> kMagic{'P', 'L', 'T', 'C'};
inline constexpr std::uint8_t kFormatVersion = 1;

struct SubTrajectory {
    std::int64_t t0_index = 0;             ///< round(t0 / eps_t)
    std::vector<std::int64_t> p0;          ///< per-dimension index, step eps_p
    std::uint64_t sample_count = 0;        ///< M + 1 uniform samples
    std::vector<std::vector<EncodedBlock>> blocks;  ///< [dim][block]

    friend bool operator==(const SubTrajectory&, const SubTrajectory&) = default;
};

/// Outlier point; coordinates are absolute indices with step eps / sqrt(dim).
struct OutlierEntry {
    std::int64_t t_index = 0;
    std::vector<std::int64_t> coords;

    friend bool operator==(const OutlierEntry&, const OutlierEntry&) = default;
};

/// Residual added at reconstruction; step eps_p / sqrt(dim).
struct CorrectionEntry {
    std::int64_t t_index = 0;
    std::vector<std::int64_t> deltas;

    friend bool operator==(const CorrectionEntry&, const CorrectionEntry&) = default;
};

struct CompressedTrajectory {
    std::uint8_t dim = 2;
    std::uint8_t flags = 0;
    std::uint8_t chunk_bits = 2;
    double dt = 1.0;
    double eps = 1.0;
    double eps_t = 1.0;
    double eps_p = 0.5;
    double eps_f = 1.0;
    std::uint64_t block_size = 2;
    std::uint64_t point_count = 0;  ///< informational
    std::vector<SubTrajectory> subs;
    std::vector<OutlierEntry> outliers;
    std::vector<CorrectionEntry> corrections;

    std::int64_t dt_index() const { return static_cast<std::int64_t>(std::llround(dt / eps_t)); }
    QuantStep endpoint_step() const { return QuantStep{eps_p / std::sqrt(double(dim))}; }
    QuantStep outlier_step() const { return QuantStep{eps / std::sqrt(double(dim))}; }
    QuantStep p0_step() const { return QuantStep{eps_p}; }
    QuantStep freq_step() const { return QuantStep{eps_f}; }
    ChunkLength chunk_length() const { return ChunkLength{chunk_bits}; }

    /// Last time index covered by the uniform grid of `sub`.
    std::int64_t end_index(const SubTrajectory& sub) const
    {
        return sub.t0_index + static_cast<std::int64_t>(sub.sample_count - 1) * dt_index();
    }

    friend bool operator==(const CompressedTrajectory&, const CompressedTrajectory&) = default;
};

/// Nearest multiple of eps_t, as an index.
inline std::int64_t time_index(double t, double eps_t)
{
    const double q = std::round(t / eps_t);
    if (!(std::abs(q) < 9.2e18)) {
        throw RangeError("time index out of 64-bit range");
    }
    return static_cast<std::int64_t>(q);
}

/// Blocks covering M velocities with nominal size b_s.
inline std::uint64_t block_count(std::uint64_t sample_count, std::uint64_t b_s)
{
    if (sample_count < 2) {
        return 0;
    }
    return (sample_count - 1 + b_s - 1) / b_s;
}

/// Velocity count of block `j` out of `count`.
inline std::uint64_t block_length(std::uint64_t sample_count, std::uint64_t b_s, std::uint64_t j)
{
    const std::uint64_t m_total = sample_count - 1;
    return std::min<std::uint64_t>(b_s, m_total - j * b_s);
}

namespace detail {

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_sub_overflow(a, b, &out)) {
        throw RangeError("index difference overflows 64 bits");
    }
    return out;
}

inline std::int64_t checked_add_parse(std::int64_t a, std::int64_t b)
{
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw CorruptionError("accumulated index overflows 64 bits");
    }
    return out;
}

inline void write_f64(BitWriter& out, double value)
{
    const auto bits = std::bit_cast<std::uint64_t>(value);
    std::array<std::uint8_t, 8> le{};
    for (unsigned i = 0; i < 8; ++i) {
        le[i] = static_cast<std::uint8_t>(bits >> (8 * i));
    }
    out.write_bytes(le);
}

inline double read_f64(BitReader& in)
{
    std::array<std::uint8_t, 8> le{};
    in.read_bytes(le);
    std::uint64_t bits = 0;
    for (unsigned i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(le[i]) << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

inline std::int64_t unsigned_to_index(std::uint64_t u)
{
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        throw CorruptionError("unsigned delta exceeds 63 bits");
    }
    return static_cast<std::int64_t>(u);
}

inline void check_model(const CompressedTrajectory& m)
{
    if (m.dim == 0) {
        throw InvalidArgumentError("model dimension must be at least 1");
    }
    if (m.block_size < 2) {
        throw InvalidArgumentError("model block size must be at least 2");
    }
    if (!(m.dt > 0) || !(m.eps > 0) || !(m.eps_t > 0) || !(m.eps_p > 0) || !(m.eps_f > 0)) {
        throw InvalidArgumentError("model precisions must be positive");
    }
}

} // namespace detail

inline std::vector<std::uint8_t> serialize(const CompressedTrajectory& model)
{
    detail::check_model(model);
    const ChunkLength l = model.chunk_length();
    const std::size_t dim = model.dim;
    BitWriter out;

    out.write_bytes(kMagic);
    const std::array<std::uint8_t, 4> header{kFormatVersion, model.dim, model.flags,
                                             model.chunk_bits};
    out.write_bytes(header);
    for (const double v : {model.dt, model.eps, model.eps_t, model.eps_p, model.eps_f}) {
        detail::write_f64(out, v);
    }
    write_unsigned(out, model.block_size, l);
    write_unsigned(out, model.point_count, l);
    write_unsigned(out, model.subs.size(), l);
    write_unsigned(out, model.outliers.size(), l);
    write_unsigned(out, model.corrections.size(), l);

    auto write_time_delta = [&](std::int64_t t, std::int64_t prev, bool first) {
        const std::int64_t delta = detail::checked_sub(t, prev);
        if (delta < 0 || (!first && delta == 0)) {
            throw InvalidArgumentError("entry time indices must be non-negative and increasing");
        }
        write_unsigned(out, static_cast<std::uint64_t>(delta), l);
    };

    std::int64_t prev_t = 0;
    std::vector<std::int64_t> prev_coords(dim, 0);
    for (std::size_t i = 0; i < model.outliers.size(); ++i) {
        const OutlierEntry& e = model.outliers[i];
        if (e.coords.size() != dim) {
            throw InvalidArgumentError("outlier dimension mismatch");
        }
        write_time_delta(e.t_index, prev_t, i == 0);
        prev_t = e.t_index;
        for (std::size_t d = 0; d < dim; ++d) {
            write_signed(out, detail::checked_sub(e.coords[d], prev_coords[d]), l);
            prev_coords[d] = e.coords[d];
        }
    }

    prev_t = 0;
    for (std::size_t i = 0; i < model.corrections.size(); ++i) {
        const CorrectionEntry& e = model.corrections[i];
        if (e.deltas.size() != dim) {
            throw InvalidArgumentError("correction dimension mismatch");
        }
        write_time_delta(e.t_index, prev_t, i == 0);
        prev_t = e.t_index;
        for (const std::int64_t v : e.deltas) {
            write_signed(out, v, l);
        }
    }

    std::int64_t prev_end = 0;
    for (const SubTrajectory& sub : model.subs) {
        if (sub.p0.size() != dim || sub.blocks.size() != dim || sub.sample_count < 2) {
            throw InvalidArgumentError("sub-trajectory shape mismatch");
        }
        write_signed(out, detail::checked_sub(sub.t0_index, prev_end), l);
        for (const std::int64_t v : sub.p0) {
            write_signed(out, v, l);
        }
        write_unsigned(out, sub.sample_count, l);
        const std::uint64_t nb = block_count(sub.sample_count, model.block_size);
        for (std::size_t d = 0; d < dim; ++d) {
            if (sub.blocks[d].size() != nb) {
                throw InvalidArgumentError("block count does not match sample count");
            }
            for (std::uint64_t j = 0; j < nb; ++j) {
                const EncodedBlock& b = sub.blocks[d][j];
                if (b.c_f() >= block_length(sub.sample_count, model.block_size, j)) {
                    throw InvalidArgumentError("block stores more coefficients than AC slots");
                }
                write_signed(out, b.end_delta_q, l);
                write_unsigned(out, b.c_f(), l);
                for (const std::int64_t q : b.q_coeffs) {
                    write_signed(out, q, l);
                }
            }
        }
        prev_end = model.end_index(sub);
    }
    return std::move(out).finish();
}

inline CompressedTrajectory parse(std::span<const std::uint8_t> bytes)
{
    BitReader in(bytes);
    std::array<std::uint8_t, 4> magic{};
    in.read_bytes(magic);
    if (magic != kMagic) {
        throw FormatError("bad magic: not a .plc container");
    }
    std::array<std::uint8_t, 4> header{};
    in.read_bytes(header);
    if (header[0] != kFormatVersion) {
        throw FormatError("unsupported format version " + std::to_string(header[0]));
    }

    CompressedTrajectory m;
    m.dim = header[1];
    m.flags = header[2];
    m.chunk_bits = header[3];
    if (m.dim == 0) {
        throw CorruptionError("dimension 0 in header");
    }
    if (m.chunk_bits < ChunkLength::kMin || m.chunk_bits > ChunkLength::kMax) {
        throw CorruptionError("chunk length out of range in header");
    }
    m.dt = detail::read_f64(in);
    m.eps = detail::read_f64(in);
    m.eps_t = detail::read_f64(in);
    m.eps_p = detail::read_f64(in);
    m.eps_f = detail::read_f64(in);
    for (const double v : {m.dt, m.eps, m.eps_t, m.eps_p, m.eps_f}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw CorruptionError("non-positive precision in metadata");
        }
    }
    const double dt_ratio = m.dt / m.eps_t;
    if (!(dt_ratio >= 0.5 && dt_ratio < 1e12)) {
        throw CorruptionError("grid spacing inconsistent with time precision");
    }
    const ChunkLength l = m.chunk_length();
    const std::size_t dim = m.dim;

    m.block_size = read_unsigned(in, l);
    if (m.block_size < 2) {
        throw CorruptionError("block size below 2");
    }
    m.point_count = read_unsigned(in, l);
    const std::uint64_t sub_count = read_unsigned(in, l);
    const std::uint64_t outlier_count = read_unsigned(in, l);
    const std::uint64_t correction_count = read_unsigned(in, l);

    auto read_time = [&](std::int64_t prev, bool first) {
        const std::int64_t delta = detail::unsigned_to_index(read_unsigned(in, l));
        if (!first && delta == 0) {
            throw CorruptionError("entry time indices not strictly increasing");
        }
        return detail::checked_add_parse(prev, delta);
    };

    // Counts are untrusted: every entry consumes bits, so a bogus count ends
    // in a truncation error rather than a huge allocation.
    std::int64_t prev_t = 0;
    std::vector<std::int64_t> prev_coords(dim, 0);
    for (std::uint64_t i = 0; i < outlier_count; ++i) {
        OutlierEntry e;
        e.t_index = read_time(prev_t, i == 0);
        prev_t = e.t_index;
        e.coords.resize(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            e.coords[d] = detail::checked_add_parse(prev_coords[d], read_signed(in, l));
            prev_coords[d] = e.coords[d];
        }
        m.outliers.push_back(std::move(e));
    }

    prev_t = 0;
    for (std::uint64_t i = 0; i < correction_count; ++i) {
        CorrectionEntry e;
        e.t_index = read_time(prev_t, i == 0);
        prev_t = e.t_index;
        e.deltas.resize(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            e.deltas[d] = read_signed(in, l);
        }
        m.corrections.push_back(std::move(e));
    }

    std::int64_t prev_end = 0;
    for (std::uint64_t s = 0; s < sub_count; ++s) {
        SubTrajectory sub;
        sub.t0_index = detail::checked_add_parse(prev_end, read_signed(in, l));
        sub.p0.resize(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            sub.p0[d] = read_signed(in, l);
        }
        sub.sample_count = read_unsigned(in, l);
        if (sub.sample_count < 2) {
            throw CorruptionError("sub-trajectory with fewer than two samples");
        }
        const std::uint64_t nb = block_count(sub.sample_count, m.block_size);
        sub.blocks.resize(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            for (std::uint64_t j = 0; j < nb; ++j) {
                EncodedBlock b;
                b.end_delta_q = read_signed(in, l);
                const std::uint64_t cf = read_unsigned(in, l);
                if (cf >= block_length(sub.sample_count, m.block_size, j)) {
                    throw CorruptionError("malformed block: c_F exceeds AC slots");
                }
                for (std::uint64_t k = 0; k < cf; ++k) {
                    b.q_coeffs.push_back(read_signed(in, l));
                }
                if (cf > 0 && b.q_coeffs.back() == 0) {
                    throw CorruptionError("malformed block: trailing zero coefficient");
                }
                sub.blocks[d].push_back(std::move(b));
            }
        }
        const std::uint64_t span = (sub.sample_count - 1);
        if (span > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) /
                       static_cast<std::uint64_t>(std::max<std::int64_t>(1, m.dt_index()))) {
            throw CorruptionError("sub-trajectory span overflows time index range");
        }
        prev_end = detail::checked_add_parse(
            sub.t0_index, static_cast<std::int64_t>(span) * m.dt_index());
        m.subs.push_back(std::move(sub));
    }

    if (in.remaining() >= 8) {
        throw CorruptionError("trailing bytes after container payload");
    }
    while (in.remaining() > 0) {
        if (in.read_bit()) {
            throw CorruptionError("nonzero padding bits");
        }
    }
    return m;
}

/// Length-prefixed concatenation of serialized containers.
inline std::vector<std::uint8_t> write_archive(std::span<const std::vector<std::uint8_t>> containers)
{
    BitWriter out;
    const ChunkLength byte_chunks{7};
    for (const auto& c : containers) {
        varint_write(out, c.size(), byte_chunks, false);
        out.write_bytes(c);
    }
    return std::move(out).finish();
}

inline std::vector<std::vector<std::uint8_t>> read_archive(std::span<const std::uint8_t> bytes)
{
    BitReader in(bytes);
    const ChunkLength byte_chunks{7};
    std::vector<std::vector<std::uint8_t>> out;
    while (in.remaining() > 0) {
        const std::uint64_t len = varint_read(in, byte_chunks, false);
        if (len > in.remaining() / 8) {
            throw TruncationError("archive entry longer than remaining data");
        }
        std::vector<std::uint8_t> entry(len);
        in.read_bytes(entry);
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace pilotc
