#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ghost/evaluation.hpp"
#include "ghost/forward_model.hpp"
#include "ghost/patterns.hpp"
#include "ghost/pipeline.hpp"

namespace ghost {

/// Block schedule in the cyclic form the config file exposes:
/// `cycles` x (HIO hio_iterations @ beta, ER er_iterations), then ER final_er.
struct ScheduleSettings {
    int cycles = 20;
    int hio_iterations = 40;
    int er_iterations = 10;
    double beta = 0.9;
    int final_er = 100;
    int restarts = 16;
    std::uint64_t seed = 1;
    int free_dc_radius = 1;
    bool nonnegative = true;

    RetrievalSchedule build() const;
    bool operator==(const ScheduleSettings&) const = default;
};

struct RunConfig {
    OpticalConfig optical;
    EnsembleSpec ensemble;  // grid always equals optical.object_grid
    NoiseModel noise;
    std::uint64_t psf_seed = 1;
    ScheduleSettings schedule;
    SpectrumMode mode = SpectrumMode::paper_faithful;
    double epsilon = 0.0;
    double support_threshold = 0.1;
    int support_margin = 2;
    std::string object = "letter";  // built-in spec
    std::string object_file;        // raw array; overrides `object` when set
    std::string output_dir = "out";
    std::vector<double> separations;  // resolution scan, meters

    void validate() const;
    ReconstructionParams reconstruction() const;
    PipelineParams pipeline(unsigned workers) const;

    bool operator==(const RunConfig&) const = default;
};

using KeyValues = std::map<std::string, std::string>;

/// Every recognized dotted key, in the canonical output order.
const std::vector<std::string>& config_keys();

/// Parses `key = value` lines; '#' starts a comment. Duplicate or unknown
/// keys are ConfigErrors naming the line.
KeyValues parse_config_text(const std::string& text, const std::string& source);
KeyValues read_config_file(const std::filesystem::path& path);

/// Applies the given keys on top of `config`.
void apply_config(RunConfig& config, const KeyValues& values);

/// Full canonical dump; apply_config(RunConfig{}, to_key_values(c)) == c.
KeyValues to_key_values(const RunConfig& config);
std::string format_config(const RunConfig& config);

/// Keys that describe the acquisition (copied from a measurement file).
bool is_acquisition_key(const std::string& key);

}  // namespace ghost
