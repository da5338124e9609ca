#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "ghost/evaluation.hpp"
#include "ghost/run_config.hpp"

namespace ghost {

// Subcommands behind the CLI. Each is a pure function of its configuration
// and input files; outputs are byte-identical across reruns and worker counts.

/// Object named by the configuration (file or built-in).
RealImage load_object(const RunConfig& config);

/// Writes into config.output_dir:
///   measurement.cfg   acquisition + settings, canonical key order
///   buckets.csv       j,value
///   oracle/object.f64, oracle/object.pgm, oracle/psf.f64, oracle/psf.pgm
///                     ground truth, only for scoring
MeasurementSet cmd_simulate(const RunConfig& config, unsigned workers = 1);

struct LoadedMeasurements {
    RunConfig config;
    MeasurementSet set;
    std::optional<RealImage> truth;  // oracle/object.f64 next to the file, when present
};

/// Reads a measurement.cfg and its sibling buckets.csv. Acquisition keys come
/// from the file; every other setting comes from `settings`.
LoadedMeasurements load_measurements(const std::filesystem::path& measurement_cfg, const RunConfig& settings);

struct ReconstructSummary {
    ReconstructionOutput output;
    std::optional<AlignmentResult> alignment;
};

/// Writes into settings.output_dir: correlation.{f64,pgm}, spectrum.{f64,pgm},
/// target.f64, support.pgm, reconstruction.{f64,pgm}, error_trace.csv,
/// metrics.csv and, with oracle data, aligned.pgm.
ReconstructSummary cmd_reconstruct(const std::filesystem::path& measurement_cfg, const RunConfig& settings,
                                   unsigned workers = 1);

/// Column order of resolution.csv.
inline constexpr const char* kResolutionHeader =
    "separation_m,separation_px,separation_over_resolution,contrast,resolved,pearson";

/// Runs a probe per entry of config.separations (kept in the given order) and
/// writes output_dir/resolution.csv. Empty scan lists are usage errors.
std::vector<ProbeResult> cmd_resolution(const RunConfig& config, unsigned workers = 1);

}  // namespace ghost
