#pragma once

// Trajectory CSV: header "t,x,y[,z]" followed by one point per line.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "pilotc/errors.hpp"
#include "pilotc/trajectory.hpp"

namespace pilotc {

/// Parse failure carrying the 1-based line number.
class CsvError : public InvalidInputError {
public:
    CsvError(std::size_t line, const std::string& what)
        : InvalidInputError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct CsvOptions {
    /// Drop later points whose timestamp repeats an earlier one instead of failing.
    bool dedup = false;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

inline bool parse_real(std::string_view field, double& value)
{
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    return ec == std::errc{} && ptr == field.data() + field.size() && !field.empty();
}

} // namespace detail

inline TrajectoryRecord read_csv(std::istream& in, const CsvOptions& options = {})
{
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!detail::trim(line).empty()) {
            break;
        }
    }
    if (line_no == 0 || detail::trim(line).empty()) {
        throw CsvError(line_no == 0 ? 1 : line_no, "missing header");
    }
    {
        const auto header = detail::split_fields(line);
        static constexpr std::string_view kNames[] = {"t", "x", "y", "z"};
        if (header.size() < 3 || header.size() > 4) {
            throw CsvError(line_no, "header must be t,x,y or t,x,y,z");
        }
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] != kNames[i]) {
                throw CsvError(line_no, "header must be t,x,y or t,x,y,z");
            }
        }
        dim = header.size() - 1;
    }

    TrajectoryRecord out(dim);
    std::vector<double> p(dim);
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        const auto fields = detail::split_fields(line);
        if (fields.size() != dim + 1) {
            throw CsvError(line_no, "expected " + std::to_string(dim + 1) + " fields, found " +
                                        std::to_string(fields.size()));
        }
        double t = 0.0;
        if (!detail::parse_real(fields[0], t) || !std::isfinite(t)) {
            throw CsvError(line_no, "bad timestamp '" + std::string(fields[0]) + "'");
        }
        for (std::size_t d = 0; d < dim; ++d) {
            if (!detail::parse_real(fields[d + 1], p[d]) || !std::isfinite(p[d])) {
                throw CsvError(line_no, "bad coordinate '" + std::string(fields[d + 1]) + "'");
            }
        }
        if (!out.empty()) {
            const double prev = out.times.back();
            if (t == prev) {
                if (options.dedup) {
                    continue;
                }
                throw CsvError(line_no, "duplicate timestamp " + std::string(fields[0]) +
                                            " (use --dedup to drop repeats)");
            }
            if (t < prev) {
                throw CsvError(line_no, "timestamps must increase");
            }
        }
        out.push_back(t, p);
    }
    if (in.bad()) {
        throw CsvError(line_no, "read error");
    }
    return out;
}

/// Writes "t,x,y[,z]" rows; `positions` is row-major with times.size() rows.
inline void write_csv(std::ostream& out, std::span<const double> times, std::span<const double> positions,
                      std::size_t dim)
{
    static constexpr const char* kNames[] = {"x", "y", "z"};
    if (dim == 0 || dim > 3 || positions.size() != times.size() * dim) {
        throw InvalidArgumentError("CSV output needs dim 1..3 and one row per timestamp");
    }
    out << 't';
    for (std::size_t d = 0; d < dim; ++d) {
        out << ',' << kNames[d];
    }
    out << '\n';
    char buf[32];
    auto put = [&](double v) {
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        out.write(buf, res.ptr - buf);
    };
    for (std::size_t i = 0; i < times.size(); ++i) {
        put(times[i]);
        for (std::size_t d = 0; d < dim; ++d) {
            out << ',';
            put(positions[i * dim + d]);
        }
        out << '\n';
    }
}

inline void write_csv(std::ostream& out, const TrajectoryRecord& traj)
{
    write_csv(out, traj.times, traj.coords, traj.dim);
}

} // namespace pilotc
