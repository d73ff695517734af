// Compress a synthetic trajectory, decode it at the original timestamps and
// report size and error.

#include <cstdio>

#include "pilotc/pilotc.hpp"

int main()
{
    pilotc::SyntheticSpec spec;
    spec.points = 5000;
    spec.jitter = 2.0;
    spec.irregular = true;
    spec.seed = 7;
    const pilotc::TrajectoryRecord traj = pilotc::generate_trajectory(spec);

    const double eps = 10.0;
    const auto params = pilotc::CodecParams::from_profile(eps, *pilotc::find_profile("geolife"));
    const std::vector<std::uint8_t> bytes = pilotc::compress_to_bytes(traj, params);
    const pilotc::CompressedTrajectory model = pilotc::parse(bytes);
    const std::vector<double> rec = pilotc::query(model, traj.times);

    std::printf("points %zu  bytes %zu  ratio %.4f  max_sed %.3f  mean_sed %.3f  corrections %zu\n",
                traj.size(), bytes.size(),
                pilotc::compression_ratio(bytes.size(), pilotc::raw_size_bytes(traj.size(), traj.dim)),
                pilotc::max_sed(traj.coords, rec, traj.dim), pilotc::mean_sed(traj.coords, rec, traj.dim),
                model.corrections.size());
}
