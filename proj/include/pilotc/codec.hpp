#pragma once

// Scalar quantization, Zigzag mappings, Varint with a tunable chunk length and
// delta indexing. These are the integer primitives every stored field goes
// through.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pilotc/bitstream.hpp"
#include "pilotc/errors.hpp"

namespace pilotc {

/// Payload bits per Varint chunk, 1..32.
class ChunkLength {
public:
    static constexpr unsigned kMin = 1;
    static constexpr unsigned kMax = 32;

    explicit ChunkLength(unsigned bits) : bits_(bits)
    {
        if (bits < kMin || bits > kMax) {
            throw InvalidArgumentError("chunk length must be in [1, 32], got " +
                                       std::to_string(bits));
        }
    }

    unsigned bits() const noexcept { return bits_; }

    friend bool operator==(ChunkLength, ChunkLength) = default;

private:
    unsigned bits_;
};

/// Half-width of a quantization cell. Values are stored as the nearest
/// multiple of 2*step, so the reconstruction error is at most step.
class QuantStep {
public:
    explicit QuantStep(double step) : step_(step)
    {
        if (!(step > 0.0) || !std::isfinite(step)) {
            throw InvalidArgumentError("quantization step must be positive and finite");
        }
    }

    double value() const noexcept { return step_; }
    double cell() const noexcept { return 2.0 * step_; }

private:
    double step_;
};

/// Nearest multiple of 2*step, rounding halves away from zero.
inline std::int64_t quantize(double x, QuantStep eps)
{
    if (!std::isfinite(x)) {
        throw InvalidInputError("cannot quantize a non-finite value");
    }
    const double q = std::round(x / eps.cell());
    // 2^63 is exactly representable; anything at or beyond it does not fit.
    constexpr double kLimit = 9223372036854775808.0;
    if (!(q < kLimit && q >= -kLimit)) {
        throw RangeError("quantized index out of 64-bit range");
    }
    return static_cast<std::int64_t>(q);
}

inline double dequantize(std::int64_t q, QuantStep eps) noexcept
{
    return static_cast<double>(q) * eps.cell();
}

// Zigzag: n >= 0 -> 2n, n < 0 -> 2|n| - 1. Total on int64.
constexpr std::uint64_t zigzag_map(std::int64_t n) noexcept
{
    return (static_cast<std::uint64_t>(n) << 1) ^ static_cast<std::uint64_t>(n >> 63);
}

constexpr std::int64_t zigzag_unmap(std::uint64_t u) noexcept
{
    return static_cast<std::int64_t>(u >> 1) ^ -static_cast<std::int64_t>(u & 1u);
}

/// Enhanced Zigzag: n >= 0 -> 2n + 1, n < 0 -> 2|n|. Never yields 0.
inline std::uint64_t enhanced_zigzag_map(std::int64_t n)
{
    if (n == std::numeric_limits<std::int64_t>::min()) {
        throw RangeError("enhanced zigzag overflow for INT64_MIN");
    }
    if (n >= 0) {
        return (static_cast<std::uint64_t>(n) << 1) | 1u;
    }
    return static_cast<std::uint64_t>(-n) << 1;
}

inline std::int64_t enhanced_zigzag_unmap(std::uint64_t u)
{
    if (u == 0) {
        throw RangeError("0 is not in the enhanced zigzag codomain");
    }
    if ((u & 1u) != 0) {
        return static_cast<std::int64_t>(u >> 1);
    }
    return -static_cast<std::int64_t>(u >> 1);
}

/// Number of bits varint_write emits for `u`.
inline std::size_t varint_bit_length(std::uint64_t u, ChunkLength l, bool omit_final_bit)
{
    const std::size_t significant = std::max<std::size_t>(1, std::bit_width(u));
    const std::size_t chunks = (significant + l.bits() - 1) / l.bits();
    return chunks * (l.bits() + 1) - (omit_final_bit ? 1 : 0);
}

/// Emits `u` as flag-prefixed chunks of l payload bits, least significant
/// chunk first. Flag 1 means more chunks follow. With `omit_final_bit` (only
/// legal for l = 1 and u >= 1) the final chunk's payload, always 1, is not
/// written.
inline void varint_write(BitWriter& out, std::uint64_t u, ChunkLength l, bool omit_final_bit)
{
    if (omit_final_bit && (l.bits() != 1 || u == 0)) {
        throw InvalidArgumentError("final-bit omission requires l = 1 and a value >= 1");
    }
    const unsigned bits = l.bits();
    const std::uint64_t mask = bits >= 64 ? ~0ull : ((1ull << bits) - 1);
    for (;;) {
        const std::uint64_t chunk = u & mask;
        u = bits >= 64 ? 0 : (u >> bits);
        const bool more = u != 0;
        out.write_bit(more);
        if (more || !omit_final_bit) {
            out.write_bits(chunk, bits);
        }
        if (!more) {
            return;
        }
    }
}

inline std::uint64_t varint_read(BitReader& in, ChunkLength l, bool omit_final_bit)
{
    if (omit_final_bit && l.bits() != 1) {
        throw InvalidArgumentError("final-bit omission requires l = 1");
    }
    const unsigned bits = l.bits();
    std::uint64_t value = 0;
    unsigned shift = 0;
    for (;;) {
        const bool more = in.read_bit();
        std::uint64_t chunk = 0;
        if (more || !omit_final_bit) {
            chunk = in.read_bits(bits);
        } else {
            chunk = 1;
        }
        if (chunk != 0) {
            if (shift >= 64 || (shift > 0 && (chunk >> (64 - shift)) != 0)) {
                throw CorruptionError("varint value exceeds 64 bits");
            }
            value |= chunk << shift;
        }
        if (!more) {
            return value;
        }
        shift += bits;
        if (shift >= 64 + bits) {
            throw CorruptionError("varint has too many chunks");
        }
    }
}

/// Signed value through enhanced Zigzag then Varint; omission is used exactly
/// when l = 1.
inline void write_signed(BitWriter& out, std::int64_t n, ChunkLength l)
{
    varint_write(out, enhanced_zigzag_map(n), l, l.bits() == 1);
}

inline std::int64_t read_signed(BitReader& in, ChunkLength l)
{
    const std::uint64_t u = varint_read(in, l, l.bits() == 1);
    if (u == 0) {
        throw CorruptionError("zero code in enhanced zigzag field");
    }
    return enhanced_zigzag_unmap(u);
}

inline void write_unsigned(BitWriter& out, std::uint64_t u, ChunkLength l)
{
    varint_write(out, u, l, false);
}

inline std::uint64_t read_unsigned(BitReader& in, ChunkLength l)
{
    return varint_read(in, l, false);
}

/// Y_0 = Q_0, Y_n = Q_n - Q_{n-1}.
inline std::vector<std::int64_t> delta_index_encode(std::span<const std::int64_t> values)
{
    std::vector<std::int64_t> out;
    out.reserve(values.size());
    std::int64_t prev = 0;
    for (const std::int64_t v : values) {
        out.push_back(v - prev);
        prev = v;
    }
    return out;
}

inline std::vector<std::int64_t> delta_index_decode(std::span<const std::int64_t> deltas)
{
    std::vector<std::int64_t> out;
    out.reserve(deltas.size());
    std::int64_t acc = 0;
    for (const std::int64_t d : deltas) {
        acc += d;
        out.push_back(acc);
    }
    return out;
}

} // namespace pilotc
