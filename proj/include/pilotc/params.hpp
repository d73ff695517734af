#pragma once

// Codec parameters derived from the error bound and four per-dataset
// constants: eps_f = eps / a, b_s = round(b * eps + c), r_ret = min(1, d / sqrt(eps)).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "pilotc/block_coder.hpp"
#include "pilotc/codec.hpp"
#include "pilotc/errors.hpp"

namespace pilotc {

struct Profile {
    std::string name;
    double a = 0.6;
    double b = 0.5;
    double c = 25.0;
    double d = 1.1;
    double v_max = 200.0;       ///< m/s, fragment split threshold
    double eps_t = 1.0;         ///< s, timestamp precision
    unsigned chunk_bits = 2;
    double eps_p_factor = 0.5;  ///< eps_p = eps_p_factor * eps

    void validate() const
    {
        if (!(a > 0 && b > 0 && c > 0 && d > 0 && v_max > 0 && eps_t > 0)) {
            throw InvalidArgumentError("profile '" + name + "': constants must be positive");
        }
        if (!(eps_p_factor > 0.0 && eps_p_factor <= 1.0)) {
            throw InvalidArgumentError("profile '" + name + "': eps_p_factor must be in (0, 1]");
        }
        ChunkLength{chunk_bits};
    }
};

/// Shipped profiles (a, b, c, d per dataset family; eps_t per native
/// timestamp resolution).
inline const std::array<Profile, 4>& builtin_profiles()
{
    static const std::array<Profile, 4> profiles{{
        {"nuplan", 0.6, 20.0, 100.0, 0.04, 200.0, 0.01, 2, 0.5},
        {"geolife", 0.6, 0.5, 25.0, 1.1, 200.0, 1.0, 2, 0.5},
        {"geolife3d", 0.7, 0.5, 25.0, 0.8, 200.0, 1.0, 2, 0.5},
        {"mopsi", 0.6, 1.0, 25.0, 0.6, 200.0, 0.001, 2, 0.5},
    }};
    return profiles;
}

inline std::optional<Profile> find_profile(std::string_view name)
{
    for (const Profile& p : builtin_profiles()) {
        if (p.name == name) {
            return p;
        }
    }
    return std::nullopt;
}

struct CodecParams {
    double eps = 0;        ///< max SED bound
    double eps_f = 0;      ///< frequency quantization half-step
    std::size_t b_s = 0;   ///< block size
    double r_ret = 1;      ///< retention rate
    double eps_p = 0;      ///< point precision
    double eps_t = 1;      ///< time precision
    unsigned chunk_bits = 2;
    double v_max = 200;

    static CodecParams from_profile(double eps, const Profile& p)
    {
        if (!(eps > 0.0) || !std::isfinite(eps)) {
            throw InvalidArgumentError("epsilon must be positive and finite");
        }
        p.validate();
        CodecParams out;
        out.eps = eps;
        out.eps_f = eps / p.a;
        const double bs = std::round(p.b * eps + p.c);
        out.b_s = bs < 2.0 ? 2 : static_cast<std::size_t>(bs);
        out.r_ret = std::min(1.0, p.d / std::sqrt(eps));
        out.eps_p = p.eps_p_factor * eps;
        out.eps_t = p.eps_t;
        out.chunk_bits = p.chunk_bits;
        out.v_max = p.v_max;
        out.validate();
        return out;
    }

    void validate() const
    {
        if (!(eps > 0.0) || !std::isfinite(eps)) {
            throw InvalidArgumentError("epsilon must be positive and finite");
        }
        if (!(eps_f > 0.0) || !std::isfinite(eps_f)) {
            throw InvalidArgumentError("eps_f must be positive and finite");
        }
        if (b_s < 2) {
            throw InvalidArgumentError("block size must be at least 2");
        }
        if (!(r_ret > 0.0 && r_ret <= 1.0)) {
            throw InvalidArgumentError("retention rate must be in (0, 1]");
        }
        if (!(eps_p > 0.0 && eps_p <= eps)) {
            throw InvalidArgumentError("eps_p must be in (0, eps]");
        }
        if (!(eps_t > 0.0) || !std::isfinite(eps_t)) {
            throw InvalidArgumentError("eps_t must be positive");
        }
        if (!(v_max > 0.0)) {
            throw InvalidArgumentError("v_max must be positive");
        }
        ChunkLength{chunk_bits};
    }

    BlockParams block_params() const { return BlockParams{QuantStep{eps_f}, r_ret, b_s}; }
    ChunkLength chunk_length() const { return ChunkLength{chunk_bits}; }
};

} // namespace pilotc
