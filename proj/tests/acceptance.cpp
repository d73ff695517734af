// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pilotc/pilotc.hpp"
#include "random_model.hpp"

using namespace pilotc;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances.
constexpr double kBoundSlack = 0.0;           // max SED must not exceed eps at all
constexpr double kMeanLo2 = 0.20, kMeanHi2 = 0.45;
constexpr double kMeanLo3 = 0.28, kMeanHi3 = 0.55;
constexpr double kVarianceRelTol = 0.05;
constexpr double kSymmetryRelTol = 0.03;
constexpr double kExceedTarget = 0.013, kExceedTol = 0.004;
constexpr double kExceedTightMax = 0.0015;
constexpr double kDctRoundTripTol = 1e-9;     // relative to max(1, |v_i|)
constexpr double kDctFastDirectTol = 1e-8;    // absolute
constexpr double kTrendMinR2 = 0.95;
constexpr double kComplexityMaxRatio = 13.0;
constexpr double kBoundRuntimeLimitS = 300.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

CodecParams params_for(double eps, const char* profile, double a_override = 0.0)
{
    Profile p = *find_profile(profile);
    if (a_override > 0.0) {
        p.a = a_override;
    }
    return CodecParams::from_profile(eps, p);
}

double max_error(const TrajectoryRecord& traj, const std::vector<std::uint8_t>& bytes)
{
    const auto rec = query(parse(bytes), traj.times);
    return max_sed(traj.coords, rec, traj.dim);
}

// ---- criteria ------------------------------------------------------------

Outcome hard_error_bound()
{
    const auto start = Clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> log_points(3.0, 5.0);
    const double eps_list[] = {1.0, 5.0, 10.0, 50.0, 100.0};
    std::size_t violations = 0;
    std::size_t runs = 0;
    std::size_t total_points = 0;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        SyntheticSpec spec;
        spec.points = static_cast<std::size_t>(std::pow(10.0, log_points(rng)));
        spec.dim = i % 2 == 0 ? 2 : 3;
        spec.seed = 1000 + static_cast<std::uint64_t>(i);
        const char* profile = spec.dim == 3 ? "geolife3d" : "geolife";
        switch (i % 4) {
        case 0:  // smooth
            break;
        case 1:  // jittery
            spec.jitter = 1.0 + 9.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            break;
        case 2:  // non-uniform sampling with pauses and glitches
            spec.irregular = true;
            spec.jitter = 2.0;
            spec.pause_probability = 0.001;
            spec.glitch_probability = 0.001;
            break;
        default:  // 10 Hz with centisecond timestamps
            spec.sample_dt = 0.1;
            spec.time_resolution = 0.01;
            spec.jitter = 0.3;
            spec.irregular = i % 8 == 3;
            profile = spec.dim == 3 ? "geolife3d" : "nuplan";
            break;
        }
        const TrajectoryRecord traj = generate_trajectory(spec);
        total_points += traj.size();
        for (const double eps : eps_list) {
            CodecParams params = params_for(eps, profile);
            params.eps_t = std::min(params.eps_t, spec.time_resolution);
            const double err = max_error(traj, compress_to_bytes(traj, params));
            worst = std::max(worst, err / eps);
            if (err > eps + kBoundSlack) {
                ++violations;
            }
            ++runs;
        }
    }
    const double elapsed = seconds_since(start);
    Outcome o;
    o.pass = violations == 0 && elapsed < kBoundRuntimeLimitS;
    o.detail = std::to_string(runs) + " runs over " + std::to_string(total_points) + " points, " +
               std::to_string(violations) + " violations, worst max_sed/eps " + fmt("%.6f", worst) +
               ", " + fmt("%.1f s", elapsed);
    return o;
}

Outcome mean_error()
{
    const double eps_list[] = {5.0, 10.0, 20.0, 50.0, 100.0};
    auto pooled_ratio = [&](std::size_t dim, const char* profile, double& lo_seen, double& hi_seen) {
        double sum = 0.0;
        double n = 0.0;
        lo_seen = 1e9;
        hi_seen = 0.0;
        for (const double eps : eps_list) {
            double s_eps = 0.0;
            double n_eps = 0.0;
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                SyntheticSpec spec;
                spec.points = 20000;
                spec.dim = dim;
                spec.seed = 500 + seed;
                const TrajectoryRecord traj = generate_trajectory(spec);
                const auto rec = query(parse(compress_to_bytes(traj, params_for(eps, profile, 0.6))), traj.times);
                const double m = mean_sed(traj.coords, rec, dim) / eps;
                s_eps += m * static_cast<double>(traj.size());
                n_eps += static_cast<double>(traj.size());
            }
            lo_seen = std::min(lo_seen, s_eps / n_eps);
            hi_seen = std::max(hi_seen, s_eps / n_eps);
            sum += s_eps;
            n += n_eps;
        }
        return sum / n;
    };
    double lo2 = 0, hi2 = 0, lo3 = 0, hi3 = 0;
    const double r2 = pooled_ratio(2, "geolife", lo2, hi2);
    const double r3 = pooled_ratio(3, "geolife3d", lo3, hi3);
    Outcome o;
    o.pass = r2 >= kMeanLo2 && r2 <= kMeanHi2 && r3 >= kMeanLo3 && r3 <= kMeanHi3;
    o.detail = "2-D mean_sed/eps " + fmt("%.4f", r2) + " (per-eps " + fmt("%.4f", lo2) + ".." +
               fmt("%.4f", hi2) + ", model " + fmt("%.4f", predicted_mean_error(1.0, 2)) + "), 3-D " +
               fmt("%.4f", r3) + " (per-eps " + fmt("%.4f", lo3) + ".." + fmt("%.4f", hi3) + ", model " +
               fmt("%.4f", predicted_mean_error(1.0, 3)) + ")";
    return o;
}

/// Position error after injecting i.i.d. uniform [-eps_f, eps_f) errors into
/// every AC coefficient of a zero spectrum; calls sink(k, dS_k) for k = 1..b_s.
/// With `gaussian` set, the errors are normal with the same variance instead.
void inject_noise(std::size_t b_s, double eps_f, int trials, std::uint64_t seed,
                  const std::function<void(int, const std::vector<double>&)>& sink, bool gaussian = false)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-eps_f, eps_f);
    std::normal_distribution<double> g(0.0, eps_f / std::sqrt(3.0));
    std::vector<double> c(b_s);
    std::vector<double> ds(b_s + 1);
    for (int t = 0; t < trials; ++t) {
        c[0] = 0.0;
        for (std::size_t j = 1; j < b_s; ++j) {
            c[j] = gaussian ? g(rng) : u(rng);
        }
        const auto v = dct_inverse(c);
        ds[0] = 0.0;
        for (std::size_t k = 1; k <= b_s; ++k) {
            ds[k] = ds[k - 1] + v[k - 1];
        }
        sink(t, ds);
    }
}

Outcome variance_law()
{
    const std::size_t b_s = 100;
    const double eps_f = 1.0;
    const int trials = 100000;
    std::vector<double> sum_sq(b_s + 1, 0.0);
    inject_noise(b_s, eps_f, trials, 77, [&](int, const std::vector<double>& ds) {
        for (std::size_t k = 1; k <= b_s; ++k) {
            sum_sq[k] += ds[k] * ds[k];
        }
    });
    const double empirical = sum_sq[50] / trials;
    const double predicted = var_delta_s(50, b_s, eps_f);
    const double rel = std::abs(empirical / predicted - 1.0);
    double worst_sym = 0.0;
    for (std::size_t k = 1; k < b_s / 2; ++k) {
        worst_sym = std::max(worst_sym, std::abs(sum_sq[k] / sum_sq[b_s - k] - 1.0));
    }
    Outcome o;
    o.pass = rel <= kVarianceRelTol && worst_sym <= kSymmetryRelTol;
    o.detail = "var(dS_50) " + fmt("%.6f", empirical) + " vs " + fmt("%.6f", predicted) + " (rel " +
               fmt("%.4f", rel) + "), worst |var(k)/var(b_s-k) - 1| " + fmt("%.4f", worst_sym);
    return o;
}

Outcome exceedance()
{
    const std::size_t b_s = 100;
    const int trials = 100000;
    auto rate = [&](double ratio, std::uint64_t seed, bool gaussian) {
        const double eps = 1.0;
        const double eps_f = eps / ratio;
        std::vector<double> x(trials);
        int over = 0;
        // Two independent dimensions; the first pass records x, the second y.
        inject_noise(
            b_s, eps_f, trials, seed, [&](int t, const std::vector<double>& ds) { x[t] = ds[b_s / 2]; }, gaussian);
        inject_noise(
            b_s, eps_f, trials, seed + 1,
            [&](int t, const std::vector<double>& ds) {
                const double y = ds[b_s / 2];
                over += std::sqrt(x[t] * x[t] + y * y) > eps;
            },
            gaussian);
        return static_cast<double>(over) / trials;
    };
    const double loose = rate(0.6, 101, false);
    const double tight = rate(0.8, 201, false);
    // Reference only: normal errors of equal variance reproduce the closed form.
    const double loose_normal = rate(0.6, 301, true);
    Outcome o;
    o.pass = std::abs(loose - kExceedTarget) <= kExceedTol && tight <= kExceedTightMax;
    o.detail = "uniform injection, eps_f = eps/0.6: " + fmt("%.4f", loose) + " (model " +
               fmt("%.4f", predicted_exceedance(1.0, 1.0 / 0.6)) + "), eps_f = eps/0.8: " + fmt("%.5f", tight) +
               " (model " + fmt("%.5f", predicted_exceedance(1.0, 1.0 / 0.8)) +
               "); normal injection of equal variance at eps/0.6: " + fmt("%.4f", loose_normal);
    return o;
}

Outcome codec_bijection()
{
    constexpr std::int64_t kRange = std::int64_t{1} << 16;
    std::size_t failures = 0;
    std::size_t checked = 0;
    for (unsigned bits = 1; bits <= 8; ++bits) {
        const ChunkLength l{bits};
        BitWriter w;
        for (std::int64_t n = -kRange; n <= kRange; ++n) {
            const std::size_t before = w.bit_count();
            write_signed(w, n, l);
            if (w.bit_count() - before != varint_bit_length(enhanced_zigzag_map(n), l, bits == 1)) {
                ++failures;
            }
        }
        const std::size_t total = w.bit_count();
        const auto bytes = std::move(w).finish();
        BitReader r(bytes, total);
        for (std::int64_t n = -kRange; n <= kRange; ++n) {
            const std::uint64_t u = enhanced_zigzag_map(n);
            if (u == 0 || enhanced_zigzag_unmap(u) != n || read_signed(r, l) != n) {
                ++failures;
            }
            ++checked;
        }
        failures += r.remaining() != 0;
    }

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> exponent(-6.0, 6.0);
    std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
    std::size_t quant_failures = 0;
    for (int i = 0; i < 1000000; ++i) {
        const double x = mantissa(rng) * std::pow(10.0, exponent(rng));
        const QuantStep s{std::pow(10.0, exponent(rng) / 2.0)};
        const double back = dequantize(quantize(x, s), s);
        // One ulp of slack for the product q * 2 * step.
        if (std::abs(x - back) > s.value() + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
            ++quant_failures;
        }
    }
    Outcome o;
    o.pass = failures == 0 && quant_failures == 0;
    o.detail = std::to_string(checked) + " varint round trips, " + std::to_string(failures) + " failures; 10^6 " +
               "quantizations, " + std::to_string(quant_failures) + " over step";
    return o;
}

Outcome dct_equivalence()
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 10.0);
    double worst_rt = 0.0;
    double worst_fd = 0.0;
    for (std::size_t n = 1; n <= 1024; ++n) {
        std::vector<double> v(n);
        double mean = 0.0;
        for (auto& x : v) {
            x = g(rng);
            mean += x;
        }
        for (auto& x : v) {
            x -= mean / static_cast<double>(n);
        }
        const auto c = dct_forward(v);
        const auto back = dct_inverse(c);
        for (std::size_t i = 0; i < n; ++i) {
            worst_rt = std::max(worst_rt, std::abs(back[i] - v[i]) / std::max(1.0, std::abs(v[i])));
        }
        if (n >= 2) {
            const DctPlan plan(n);
            const auto fast = plan.forward(v);
            const auto direct = dct_forward_direct(v);
            const auto fast_inv = plan.inverse(direct);
            const auto direct_inv = dct_inverse_direct(direct);
            for (std::size_t k = 0; k < n; ++k) {
                worst_fd = std::max(worst_fd, std::abs(fast[k] - direct[k]));
                worst_fd = std::max(worst_fd, std::abs(fast_inv[k] - direct_inv[k]));
            }
        }
    }
    Outcome o;
    o.pass = worst_rt <= kDctRoundTripTol && worst_fd <= kDctFastDirectTol;
    o.detail = "n = 1..1024: worst round-trip error " + fmt("%.3g", worst_rt) + ", worst fast/direct gap " +
               fmt("%.3g", worst_fd);
    return o;
}

Outcome container_robustness()
{
    std::mt19937_64 rng(4242);
    std::size_t mismatches = 0;
    std::size_t prefixes = 0;
    std::size_t bad_prefixes = 0;
    auto check_prefixes = [&](const std::vector<std::uint8_t>& bytes) {
        for (std::size_t cut = 0; cut < bytes.size(); ++cut) {
            ++prefixes;
            try {
                (void)parse(std::span<const std::uint8_t>(bytes.data(), cut));
                ++bad_prefixes;
            } catch (const TruncationError&) {
            } catch (...) {
                ++bad_prefixes;
            }
        }
    };
    for (int i = 0; i < 1000; ++i) {
        const CompressedTrajectory m = test_support::random_model(rng);
        const auto bytes = serialize(m);
        const CompressedTrajectory back = parse(bytes);
        if (!(back == m) || serialize(back) != bytes) {
            ++mismatches;
        }
        check_prefixes(bytes);
    }
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        SyntheticSpec spec;
        spec.points = 3000;
        spec.dim = 2 + seed % 2;
        spec.jitter = 2.0;
        spec.irregular = true;
        spec.glitch_probability = 0.003;
        spec.seed = 60 + seed;
        check_prefixes(compress_to_bytes(generate_trajectory(spec), params_for(5.0, "geolife")));
    }
    Outcome o;
    o.pass = mismatches == 0 && bad_prefixes == 0;
    o.detail = "1000 random models, " + std::to_string(mismatches) + " round-trip mismatches; " +
               std::to_string(prefixes) + " strict prefixes, " + std::to_string(bad_prefixes) +
               " without a truncation error";
    return o;
}

Outcome trend()
{
    std::vector<TrajectoryRecord> corpus;
    for (std::uint64_t s = 0; s < 12; ++s) {
        SyntheticSpec spec;
        spec.points = 10000;
        spec.jitter = static_cast<double>(s % 3);
        spec.irregular = s % 2 == 1;
        spec.seed = 900 + s;
        corpus.push_back(generate_trajectory(spec));
    }
    std::vector<double> eps_list;
    std::vector<double> ratios;
    std::vector<double> means;
    for (double eps = 10.0; eps <= 100.0; eps += 10.0) {
        std::uint64_t raw = 0;
        std::uint64_t packed = 0;
        double sed_sum = 0.0;
        double n = 0.0;
        for (const auto& traj : corpus) {
            const auto bytes = compress_to_bytes(traj, params_for(eps, "geolife"));
            const auto rec = query(parse(bytes), traj.times);
            raw += raw_size_bytes(traj.size(), traj.dim);
            packed += bytes.size();
            sed_sum += mean_sed(traj.coords, rec, traj.dim) * static_cast<double>(traj.size());
            n += static_cast<double>(traj.size());
        }
        eps_list.push_back(eps);
        ratios.push_back(compression_ratio(packed, raw));
        means.push_back(sed_sum / n);
    }
    const LinearFit fit = linear_fit(eps_list, means);
    Outcome o;
    o.pass = non_increasing(ratios) && fit.r2 >= kTrendMinR2;
    o.detail = "ratio " + fmt("%.5f", ratios.front()) + " -> " + fmt("%.5f", ratios.back()) +
               (non_increasing(ratios) ? " non-increasing" : " NOT monotone") + ", mean SED fit slope " +
               fmt("%.4f", fit.slope) + " R^2 " + fmt("%.4f", fit.r2);
    return o;
}

Outcome linear_complexity()
{
    const CodecParams params = params_for(10.0, "geolife");
    auto time_compress = [&](std::size_t points, int repeats) {
        SyntheticSpec spec;
        spec.points = points;
        spec.jitter = 2.0;
        spec.seed = 31337;
        const TrajectoryRecord traj = generate_trajectory(spec);
        double best = 1e30;
        for (int r = 0; r < repeats; ++r) {
            const auto start = Clock::now();
            const auto bytes = compress_to_bytes(traj, params);
            best = std::min(best, seconds_since(start));
            if (bytes.empty()) {
                return -1.0;
            }
        }
        return best;
    };
    (void)time_compress(100000, 1);  // warm caches and DCT plans
    const double small = time_compress(100000, 5);
    const double large = time_compress(1000000, 3);
    const double ratio = large / small;
    Outcome o;
    o.pass = small > 0.0 && large > 0.0 && ratio <= kComplexityMaxRatio;
    o.detail = "10^5 points " + fmt("%.3f s", small) + ", 10^6 points " + fmt("%.3f s", large) + ", ratio " +
               fmt("%.2f", ratio);
    return o;
}

} // namespace

// Optional arguments restrict the run to the named criteria.
int main(int argc, char** argv)
{
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"hard-error-bound", hard_error_bound},
        {"mean-error-prediction", mean_error},
        {"variance-law", variance_law},
        {"exceedance-prediction", exceedance},
        {"codec-bijection", codec_bijection},
        {"dct-equivalence", dct_equivalence},
        {"container-robustness", container_robustness},
        {"trend-reproduction", trend},
        {"linear-complexity", linear_complexity},
    };
    const std::vector<std::string> only(argv + 1, argv + argc);
    int failed = 0;
    std::size_t ran = 0;
    const auto start = Clock::now();
    for (const Criterion& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) {
            continue;
        }
        ++ran;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed in %.1f s\n", static_cast<int>(ran) - failed, ran, seconds_since(start));
    return failed;
}
