// pilotc: compress trajectory CSVs into .plc containers, query them back,
// evaluate error and size, and generate synthetic corpora.
//
// Exit codes: 0 success, 1 usage, 2 data, 3 format or corruption.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pilotc/pilotc.hpp"

namespace fs = std::filesystem;
using namespace pilotc;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kData = 2, kFormat = 3 };

/// Usage problem detected after argument parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamOptions {
    double epsilon = 0.0;
    std::string profile = "geolife";
    std::optional<double> a, b, c, d, vmax, eps_t, eps_p_factor;
    std::optional<unsigned> chunk_bits;
    bool dedup = false;

    void add_to(CLI::App& cmd, bool need_epsilon)
    {
        auto* e = cmd.add_option("--epsilon,-e", epsilon, "max SED bound in metres");
        if (need_epsilon) {
            e->required();
        }
        cmd.add_option("--profile", profile, "parameter profile")->capture_default_str();
        cmd.add_option("--a", a, "eps_f = eps / a");
        cmd.add_option("--b", b, "b_s = round(b * eps + c)");
        cmd.add_option("--c", c, "b_s = round(b * eps + c)");
        cmd.add_option("--d", d, "r_ret = min(1, d / sqrt(eps))");
        cmd.add_option("--vmax", vmax, "fragment split speed, m/s");
        cmd.add_option("--eps-t", eps_t, "timestamp precision, s");
        cmd.add_option("--chunk-bits", chunk_bits, "varint payload bits per chunk");
        cmd.add_option("--eps-p-factor", eps_p_factor, "eps_p = factor * eps");
        cmd.add_flag("--dedup", dedup, "drop points that repeat the previous timestamp");
    }

    Profile resolved_profile() const
    {
        const auto base = find_profile(profile);
        if (!base) {
            throw UsageError("unknown profile '" + profile + "'");
        }
        Profile p = *base;
        if (a) p.a = *a;
        if (b) p.b = *b;
        if (c) p.c = *c;
        if (d) p.d = *d;
        if (vmax) p.v_max = *vmax;
        if (eps_t) p.eps_t = *eps_t;
        if (chunk_bits) p.chunk_bits = *chunk_bits;
        if (eps_p_factor) p.eps_p_factor = *eps_p_factor;
        return p;
    }

    CodecParams params(double eps) const { return CodecParams::from_profile(eps, resolved_profile()); }
};

std::vector<std::uint8_t> read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInputError("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TrajectoryRecord read_trajectory(const fs::path& path, bool dedup)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidInputError("cannot open " + path.string());
    }
    try {
        return read_csv(in, CsvOptions{dedup});
    } catch (const CsvError& e) {
        throw InvalidInputError(path.string() + ": " + e.what());
    }
}

/// Writes to a sibling temporary file and renames it into place.
template <class WriteFn>
void write_atomic(const fs::path& path, WriteFn&& write)
{
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) % 100000);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InvalidInputError("cannot write " + tmp.string());
        }
        write(out);
        out.flush();
        if (!out) {
            throw InvalidInputError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

void write_bytes_atomic(const fs::path& path, const std::vector<std::uint8_t>& bytes)
{
    write_atomic(path, [&](std::ostream& out) {
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    });
}

std::vector<fs::path> list_files(const fs::path& dir, const std::string& ext)
{
    if (!fs::is_directory(dir)) {
        throw InvalidInputError(dir.string() + " is not a directory");
    }
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ext) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Expands directories into their .csv files.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs)
{
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            const auto files = list_files(in, ".csv");
            out.insert(out.end(), files.begin(), files.end());
        } else {
            out.emplace_back(in);
        }
    }
    if (out.empty()) {
        throw InvalidInputError("no input trajectories");
    }
    return out;
}

/// Runs fn over items with at most hardware_concurrency jobs in flight.
template <class T, class Fn>
auto parallel_map(const std::vector<T>& items, Fn fn)
{
    using R = decltype(fn(items.front()));
    const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
    std::vector<R> out;
    out.reserve(items.size());
    for (std::size_t start = 0; start < items.size(); start += width) {
        std::vector<std::future<R>> batch;
        for (std::size_t i = start; i < std::min(items.size(), start + width); ++i) {
            batch.push_back(std::async(std::launch::async, fn, std::cref(items[i])));
        }
        for (auto& f : batch) {
            out.push_back(f.get());
        }
    }
    return out;
}

CompressedTrajectory load_container(const fs::path& path, std::size_t entry)
{
    const auto bytes = read_file(path);
    if (bytes.size() >= 4 && std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
        if (entry != 0) {
            throw UsageError("--entry applies to archives only");
        }
        return parse(bytes);
    }
    const auto items = read_archive(bytes);
    if (entry >= items.size()) {
        throw UsageError("archive has " + std::to_string(items.size()) + " entries");
    }
    return parse(items[entry]);
}

// ---- compress ----------------------------------------------------------

struct CompressArgs {
    ParamOptions params;
    std::vector<std::string> inputs;
    std::string output;
    bool archive = false;
};

int run_compress(const CompressArgs& args)
{
    const auto files = expand_inputs(args.inputs);
    const bool dir_output = fs::is_directory(args.output) || args.output.ends_with('/');
    const bool single = files.size() == 1 && !dir_output;
    if (!args.archive && !single) {
        fs::create_directories(args.output);
    }
    const double eps = args.params.epsilon;
    const CodecParams params = args.params.params(eps);

    struct Result {
        std::vector<std::uint8_t> bytes;
        std::size_t points = 0;
        std::size_t corrections = 0;
        std::size_t outliers = 0;
    };
    const auto results = parallel_map(files, [&](const fs::path& file) {
        const TrajectoryRecord traj = read_trajectory(file, args.params.dedup);
        try {
            const CompressedTrajectory model = compress(traj, params);
            return Result{serialize(model), traj.size(), model.corrections.size(), model.outliers.size()};
        } catch (const InvalidInputError& e) {
            throw InvalidInputError(file.string() + ": " + e.what());
        }
    });

    std::vector<std::vector<std::uint8_t>> archive;
    for (std::size_t i = 0; i < files.size(); ++i) {
        const Result& r = results[i];
        if (args.archive) {
            archive.push_back(r.bytes);
        } else {
            const fs::path out = single ? fs::path(args.output)
                                        : fs::path(args.output) / files[i].stem().concat(".plc");
            write_bytes_atomic(out, r.bytes);
        }
        std::cout << files[i].filename().string() << ": points " << r.points << " bytes " << r.bytes.size()
                  << " corrections " << r.corrections << " outliers " << r.outliers << '\n';
    }
    if (args.archive) {
        write_bytes_atomic(args.output, write_archive(archive));
    }
    return kOk;
}

// ---- decompress --------------------------------------------------------

struct DecompressArgs {
    std::string input;
    std::string output = "-";
    std::string at;
    bool grid = false;
    std::size_t entry = 0;
};

std::vector<double> read_timestamps(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidInputError("cannot open " + path.string());
    }
    std::vector<double> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s = line;
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) {
            s.remove_suffix(1);
        }
        if (s.empty() || s == "t") {
            continue;
        }
        double t = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), t);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw CsvError(line_no, "bad timestamp '" + std::string(s) + "'");
        }
        if (!out.empty() && t < out.back()) {
            throw CsvError(line_no, "timestamps must be sorted");
        }
        out.push_back(t);
    }
    return out;
}

int run_decompress(const DecompressArgs& args)
{
    if (args.grid == !args.at.empty()) {
        throw UsageError("give exactly one of --at or --grid");
    }
    const CompressedTrajectory model = load_container(args.input, args.entry);
    const Reconstruction rec(model);

    std::vector<double> times;
    std::vector<double> positions;
    if (args.grid) {
        for (const UniformSeries& s : rec.series()) {
            for (std::size_t j = 0; j < s.sample_count(); ++j) {
                times.push_back(s.t0 + static_cast<double>(j) * s.dt);
                for (std::size_t d = 0; d < s.dim(); ++d) {
                    positions.push_back(s.samples[d][j]);
                }
            }
        }
    } else {
        times = read_timestamps(args.at);
        positions = rec.query(times);
    }
    auto emit = [&](std::ostream& out) { write_csv(out, times, positions, model.dim); };
    if (args.output == "-") {
        emit(std::cout);
    } else {
        write_atomic(args.output, emit);
    }
    return kOk;
}

// ---- eval --------------------------------------------------------------

struct EvalArgs {
    ParamOptions params;
    std::string originals;
    std::string compressed;
    std::vector<double> epsilon_list;
    std::string format = "csv";
};

EvalReport evaluate(const std::string& name, const TrajectoryRecord& traj, const CompressedTrajectory& model,
                    std::size_t compressed_bytes)
{
    const auto rec = query(model, traj.times);
    const auto sed = sed_values(traj.coords, rec, traj.dim);
    EvalReport r;
    r.name = name;
    r.points = traj.size();
    r.raw_bytes = raw_size_bytes(traj.size(), traj.dim);
    r.compressed_bytes = compressed_bytes;
    r.compression_ratio = compression_ratio(r.compressed_bytes, r.raw_bytes);
    double sum = 0.0;
    for (const double e : sed) {
        r.max_sed = std::max(r.max_sed, e);
        sum += e;
    }
    r.mean_sed = sed.empty() ? 0.0 : sum / static_cast<double>(sed.size());
    r.corrected_fraction =
        traj.empty() ? 0.0 : static_cast<double>(model.corrections.size()) / static_cast<double>(traj.size());
    return r;
}

EvalReport aggregate(const std::string& name, const std::vector<EvalReport>& rows)
{
    EvalReport a;
    a.name = name;
    double sed_sum = 0.0;
    double corrected = 0.0;
    for (const auto& r : rows) {
        a.points += r.points;
        a.raw_bytes += r.raw_bytes;
        a.compressed_bytes += r.compressed_bytes;
        a.max_sed = std::max(a.max_sed, r.max_sed);
        sed_sum += r.mean_sed * static_cast<double>(r.points);
        corrected += r.corrected_fraction * static_cast<double>(r.points);
    }
    a.compression_ratio = compression_ratio(a.compressed_bytes, a.raw_bytes);
    a.mean_sed = a.points ? sed_sum / static_cast<double>(a.points) : 0.0;
    a.corrected_fraction = a.points ? corrected / static_cast<double>(a.points) : 0.0;
    return a;
}

class ReportWriter {
public:
    ReportWriter(std::ostream& out, std::string format, bool with_eps)
        : out_(out), format_(std::move(format)), with_eps_(with_eps)
    {
        if (format_ != "csv" && format_ != "jsonl") {
            throw UsageError("--format must be csv or jsonl");
        }
        if (format_ == "csv") {
            out_ << (with_eps_ ? "epsilon," : "")
                 << "name,points,raw_bytes,compressed_bytes,compression_ratio,max_sed,mean_sed,corrected_fraction\n";
        }
    }

    void row(const EvalReport& r, double eps = 0.0)
    {
        if (format_ == "jsonl") {
            nlohmann::json j{{"name", r.name},
                             {"points", r.points},
                             {"raw_bytes", r.raw_bytes},
                             {"compressed_bytes", r.compressed_bytes},
                             {"compression_ratio", r.compression_ratio},
                             {"max_sed", r.max_sed},
                             {"mean_sed", r.mean_sed},
                             {"corrected_fraction", r.corrected_fraction}};
            if (with_eps_) {
                j["epsilon"] = eps;
            }
            out_ << j.dump() << '\n';
            return;
        }
        if (with_eps_) {
            out_ << eps << ',';
        }
        out_ << r.name << ',' << r.points << ',' << r.raw_bytes << ',' << r.compressed_bytes << ','
             << r.compression_ratio << ',' << r.max_sed << ',' << r.mean_sed << ',' << r.corrected_fraction
             << '\n';
    }

    void trend(bool monotone, double r2)
    {
        if (format_ == "jsonl") {
            out_ << nlohmann::json{{"trend_ratio_non_increasing", monotone}, {"mean_sed_linear_r2", r2}}.dump()
                 << '\n';
        } else {
            out_ << "# trend_ratio_non_increasing=" << (monotone ? "true" : "false") << " mean_sed_linear_r2=" << r2
                 << '\n';
        }
    }

private:
    std::ostream& out_;
    std::string format_;
    bool with_eps_;
};

int run_eval(const EvalArgs& args)
{
    const auto originals = list_files(args.originals, ".csv");
    if (originals.empty()) {
        throw InvalidInputError("no .csv trajectories in " + args.originals);
    }
    std::vector<TrajectoryRecord> trajs;
    for (const auto& f : originals) {
        trajs.push_back(read_trajectory(f, args.params.dedup));
    }
    std::cout.precision(10);

    if (!args.epsilon_list.empty()) {
        if (!args.compressed.empty()) {
            throw UsageError("--epsilon-list compresses in memory; drop the compressed directory");
        }
        ReportWriter out(std::cout, args.format, true);
        std::vector<double> ratios;
        std::vector<double> means;
        for (const double eps : args.epsilon_list) {
            const CodecParams params = args.params.params(eps);
            std::vector<std::size_t> idx(trajs.size());
            for (std::size_t i = 0; i < idx.size(); ++i) {
                idx[i] = i;
            }
            const auto rows = parallel_map(idx, [&](std::size_t i) {
                const CompressedTrajectory model = compress(trajs[i], params);
                return evaluate(originals[i].stem().string(), trajs[i], model, serialize(model).size());
            });
            const EvalReport all = aggregate("ALL", rows);
            out.row(all, eps);
            ratios.push_back(all.compression_ratio);
            means.push_back(all.mean_sed);
        }
        const double r2 = args.epsilon_list.size() >= 2 ? linear_fit(args.epsilon_list, means).r2 : 1.0;
        out.trend(non_increasing(ratios), r2);
        return kOk;
    }

    if (args.compressed.empty()) {
        throw UsageError("eval needs a compressed directory or --epsilon-list");
    }
    const auto containers = list_files(args.compressed, ".plc");
    std::map<std::string, fs::path> by_stem;
    for (const auto& c : containers) {
        by_stem[c.stem().string()] = c;
    }
    if (by_stem.size() != originals.size()) {
        throw InvalidInputError("file sets differ: " + std::to_string(originals.size()) + " originals, " +
                                std::to_string(by_stem.size()) + " containers");
    }
    ReportWriter out(std::cout, args.format, false);
    std::vector<EvalReport> rows;
    for (std::size_t i = 0; i < originals.size(); ++i) {
        const auto it = by_stem.find(originals[i].stem().string());
        if (it == by_stem.end()) {
            throw InvalidInputError("no container for " + originals[i].filename().string());
        }
        const auto bytes = read_file(it->second);
        rows.push_back(evaluate(it->first, trajs[i], parse(bytes), bytes.size()));
        out.row(rows.back());
    }
    out.row(aggregate("ALL", rows));
    return kOk;
}

// ---- synth -------------------------------------------------------------

struct SynthArgs {
    std::string output;
    std::size_t count = 10;
    std::size_t points = 1000;
    std::size_t dim = 2;
    std::uint64_t seed = 1;
    double jitter = 0.0;
    bool irregular = false;
    double sample_dt = 1.0;
};

int run_synth(const SynthArgs& args)
{
    if (args.dim < 2 || args.dim > 3) {
        throw UsageError("--dim must be 2 or 3");
    }
    fs::create_directories(args.output);
    for (std::size_t i = 0; i < args.count; ++i) {
        SyntheticSpec spec;
        spec.points = args.points;
        spec.dim = args.dim;
        spec.seed = args.seed * 1000003u + i;
        spec.jitter = args.jitter;
        spec.irregular = args.irregular;
        spec.sample_dt = args.sample_dt;
        spec.time_resolution = std::min(1.0, args.sample_dt);
        const TrajectoryRecord traj = generate_trajectory(spec);
        char name[32];
        std::snprintf(name, sizeof name, "traj_%04zu.csv", i);
        write_atomic(fs::path(args.output) / name, [&](std::ostream& out) { write_csv(out, traj); });
    }
    std::cout << "wrote " << args.count << " trajectories to " << args.output << '\n';
    return kOk;
}

int run_profiles()
{
    std::cout << "name,a,b,c,d,v_max,eps_t,chunk_bits,eps_p_factor\n";
    for (const Profile& p : builtin_profiles()) {
        std::cout << p.name << ',' << p.a << ',' << p.b << ',' << p.c << ',' << p.d << ',' << p.v_max << ','
                  << p.eps_t << ',' << p.chunk_bits << ',' << p.eps_p_factor << '\n';
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Error-bounded trajectory compression"};
    app.require_subcommand(1);

    CompressArgs comp;
    auto* c = app.add_subcommand("compress", "compress trajectory CSVs");
    comp.params.add_to(*c, true);
    c->add_option("inputs", comp.inputs, "CSV files or directories")->required();
    c->add_option("-o,--output", comp.output, "output .plc, directory, or archive")->required();
    c->add_flag("--archive", comp.archive, "write one length-prefixed archive");

    DecompressArgs dec;
    auto* d = app.add_subcommand("decompress", "decode positions from a container");
    d->add_option("input", dec.input, ".plc container or archive")->required();
    d->add_option("-o,--output", dec.output, "output CSV, '-' for stdout")->capture_default_str();
    d->add_option("--at", dec.at, "file of sorted timestamps, one per line");
    d->add_flag("--grid", dec.grid, "emit the uniform series");
    d->add_option("--entry", dec.entry, "archive entry index");

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "error and size report");
    ev.params.add_to(*e, false);
    e->add_option("originals", ev.originals, "directory of original CSVs")->required();
    e->add_option("compressed", ev.compressed, "directory of .plc files with matching names");
    e->add_option("--epsilon-list", ev.epsilon_list, "sweep: compress in memory at each eps")->delimiter(',');
    e->add_option("--format", ev.format, "csv or jsonl")->capture_default_str();

    SynthArgs syn;
    auto* s = app.add_subcommand("synth", "generate a synthetic corpus");
    s->add_option("-o,--output", syn.output, "output directory")->required();
    s->add_option("--count", syn.count)->capture_default_str();
    s->add_option("--points", syn.points)->capture_default_str();
    s->add_option("--dim", syn.dim)->capture_default_str();
    s->add_option("--seed", syn.seed)->capture_default_str();
    s->add_option("--jitter", syn.jitter, "position noise sigma, m")->capture_default_str();
    s->add_option("--sample-dt", syn.sample_dt, "nominal sampling interval, s")->capture_default_str();
    s->add_flag("--irregular", syn.irregular, "gaps of 1 to 5 sampling intervals");

    auto* p = app.add_subcommand("profiles", "list built-in parameter profiles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (c->parsed()) return run_compress(comp);
        if (d->parsed()) return run_decompress(dec);
        if (e->parsed()) {
            if (e->count("--epsilon") > 0 && ev.epsilon_list.empty()) {
                throw UsageError("eval takes --epsilon-list, not --epsilon");
            }
            return run_eval(ev);
        }
        if (s->parsed()) return run_synth(syn);
        if (p->parsed()) return run_profiles();
    } catch (const UsageError& err) {
        std::cerr << "usage error: " << err.what() << '\n';
        return kUsage;
    } catch (const InvalidArgumentError& err) {
        std::cerr << "argument error: " << err.what() << '\n';
        return kUsage;
    } catch (const OutOfRangeError& err) {
        std::cerr << "data error: " << err.what() << '\n';
        return kData;
    } catch (const TruncationError& err) {
        std::cerr << "format error: truncated container: " << err.what() << '\n';
        return kFormat;
    } catch (const FormatError& err) {
        std::cerr << "format error: " << err.what() << '\n';
        return kFormat;
    } catch (const CorruptionError& err) {
        std::cerr << "format error: " << err.what() << '\n';
        return kFormat;
    } catch (const Error& err) {
        std::cerr << "data error: " << err.what() << '\n';
        return kData;
    } catch (const fs::filesystem_error& err) {
        std::cerr << "data error: " << err.what() << '\n';
        return kData;
    }
    return kUsage;
}
