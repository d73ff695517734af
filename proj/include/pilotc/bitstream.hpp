#pragma once

// Bit-granular writer/reader. Bits are packed most-significant-first within
// each byte; the length in bits is tracked exactly and only finish() pads.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pilotc/errors.hpp"

namespace pilotc {

class BitWriter {
public:
    void write_bit(bool bit)
    {
        if ((bit_count_ & 7u) == 0) {
            bytes_.push_back(0);
        }
        if (bit) {
            bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bit_count_ & 7u));
        }
        ++bit_count_;
    }

    /// Writes the low `count` bits of `value`, most significant first.
    void write_bits(std::uint64_t value, unsigned count)
    {
        for (unsigned i = count; i-- > 0;) {
            write_bit(((value >> i) & 1u) != 0);
        }
    }

    /// Byte-aligned append; only valid while the stream is byte aligned.
    void write_bytes(std::span<const std::uint8_t> data)
    {
        if ((bit_count_ & 7u) != 0) {
            throw InvalidArgumentError("write_bytes requires a byte-aligned stream");
        }
        bytes_.insert(bytes_.end(), data.begin(), data.end());
        bit_count_ += data.size() * 8;
    }

    std::size_t bit_count() const noexcept { return bit_count_; }

    /// Bytes written so far; the unused tail of the last byte is zero.
    const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

    std::vector<std::uint8_t> finish() &&
    {
        bit_count_ = bytes_.size() * 8;
        return std::move(bytes_);
    }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t bit_count_ = 0;
};

class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> bytes) noexcept
        : bytes_(bytes), bit_length_(bytes.size() * 8) {}

    BitReader(std::span<const std::uint8_t> bytes, std::size_t bit_length)
        : bytes_(bytes), bit_length_(bit_length)
    {
        if (bit_length > bytes.size() * 8) {
            throw InvalidArgumentError("bit length exceeds buffer");
        }
    }

    bool read_bit()
    {
        if (cursor_ >= bit_length_) {
            throw TruncationError("bit stream exhausted at bit " + std::to_string(cursor_));
        }
        const bool bit = ((bytes_[cursor_ >> 3] >> (7 - (cursor_ & 7u))) & 1u) != 0;
        ++cursor_;
        return bit;
    }

    std::uint64_t read_bits(unsigned count)
    {
        std::uint64_t value = 0;
        for (unsigned i = 0; i < count; ++i) {
            value = (value << 1) | static_cast<std::uint64_t>(read_bit());
        }
        return value;
    }

    void read_bytes(std::span<std::uint8_t> out)
    {
        if ((cursor_ & 7u) != 0) {
            throw InvalidArgumentError("read_bytes requires a byte-aligned cursor");
        }
        if (cursor_ + out.size() * 8 > bit_length_) {
            throw TruncationError("bit stream exhausted reading " + std::to_string(out.size()) +
                                  " bytes");
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = bytes_[(cursor_ >> 3) + i];
        }
        cursor_ += out.size() * 8;
    }

    std::size_t cursor() const noexcept { return cursor_; }
    std::size_t remaining() const noexcept { return bit_length_ - cursor_; }
    std::size_t bit_length() const noexcept { return bit_length_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t bit_length_;
    std::size_t cursor_ = 0;
};

} // namespace pilotc
