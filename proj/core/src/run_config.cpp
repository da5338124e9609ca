#include "ghost/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <limits>

#include "ghost/io.hpp"

namespace ghost {

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class Int>
Int parse_int(const std::string& text, const std::string& key) {
    Int value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
        throw ConfigError(key + ": '" + text + "' is not an integer");
    }
    return value;
}

bool parse_bool(const std::string& text, const std::string& key) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::vector<double> parse_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string item = trim(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (!item.empty()) out.push_back(parse_double(item, key));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

struct KeyField {
    std::string key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
    bool acquisition;
};

const std::vector<KeyField>& fields() {
    static const std::vector<KeyField> table = [] {
        std::vector<KeyField> f;
        auto real = [&f](std::string key, bool acq, std::function<double&(RunConfig&)> ref) {
            f.push_back({key,
                         [ref, key](RunConfig& c, const std::string& v) { ref(c) = parse_double(v, key); },
                         [ref](const RunConfig& c) { return format_double(ref(const_cast<RunConfig&>(c))); }, acq});
        };
        real("optical.wavelength", true, [](RunConfig& c) -> double& { return c.optical.wavelength; });
        real("optical.z-m", true, [](RunConfig& c) -> double& { return c.optical.z_m; });
        real("optical.z-l", true, [](RunConfig& c) -> double& { return c.optical.z_l; });
        real("optical.z-o", true, [](RunConfig& c) -> double& { return c.optical.z_o; });
        real("optical.focal-length", true, [](RunConfig& c) -> double& { return c.optical.focal_length; });
        real("optical.aperture-diameter", true,
             [](RunConfig& c) -> double& { return c.optical.aperture_diameter; });
        real("optical.dmd-pitch", true, [](RunConfig& c) -> double& { return c.optical.dmd_pitch; });
        f.push_back({"optical.case",
                     [](RunConfig& c, const std::string& v) {
                         if (v == "scattering") c.optical.optical_case = OpticalCase::scattering;
                         else if (v == "lens-only") c.optical.optical_case = OpticalCase::lens_only;
                         else throw ConfigError("optical.case: expected scattering or lens-only, got '" + v + "'");
                     },
                     [](const RunConfig& c) {
                         return std::string(c.optical.optical_case == OpticalCase::scattering ? "scattering" : "lens-only");
                     },
                     true});
        f.push_back({"optical.isoplanatic",
                     [](RunConfig& c, const std::string& v) { c.optical.isoplanatic = parse_bool(v, "optical.isoplanatic"); },
                     [](const RunConfig& c) { return bool_text(c.optical.isoplanatic); }, true});
        f.push_back({"grid.nx",
                     [](RunConfig& c, const std::string& v) {
                         const Grid2D& g = c.optical.object_grid;
                         c.optical.object_grid = Grid2D(parse_int<int>(v, "grid.nx"), g.ny(), g.pitch());
                         c.ensemble.grid = c.optical.object_grid;
                     },
                     [](const RunConfig& c) { return std::to_string(c.optical.object_grid.nx()); }, true});
        f.push_back({"grid.ny",
                     [](RunConfig& c, const std::string& v) {
                         const Grid2D& g = c.optical.object_grid;
                         c.optical.object_grid = Grid2D(g.nx(), parse_int<int>(v, "grid.ny"), g.pitch());
                         c.ensemble.grid = c.optical.object_grid;
                     },
                     [](const RunConfig& c) { return std::to_string(c.optical.object_grid.ny()); }, true});
        f.push_back({"grid.pitch",
                     [](RunConfig& c, const std::string& v) {
                         const Grid2D& g = c.optical.object_grid;
                         c.optical.object_grid = Grid2D(g.nx(), g.ny(), parse_double(v, "grid.pitch"));
                         c.ensemble.grid = c.optical.object_grid;
                     },
                     [](const RunConfig& c) { return format_double(c.optical.object_grid.pitch()); }, true});
        f.push_back({"ensemble.kind",
                     [](RunConfig& c, const std::string& v) {
                         if (v == "random-binary") c.ensemble.kind = EnsembleKind::random_binary;
                         else if (v == "hadamard") c.ensemble.kind = EnsembleKind::hadamard;
                         else throw ConfigError("ensemble.kind: expected random-binary or hadamard, got '" + v + "'");
                     },
                     [](const RunConfig& c) {
                         return std::string(c.ensemble.kind == EnsembleKind::hadamard ? "hadamard" : "random-binary");
                     },
                     true});
        f.push_back({"ensemble.count",
                     [](RunConfig& c, const std::string& v) { c.ensemble.count = parse_int<std::int64_t>(v, "ensemble.count"); },
                     [](const RunConfig& c) { return std::to_string(c.ensemble.count); }, true});
        real("ensemble.fill-fraction", true, [](RunConfig& c) -> double& { return c.ensemble.fill_fraction; });
        f.push_back({"ensemble.seed",
                     [](RunConfig& c, const std::string& v) { c.ensemble.seed = parse_int<std::uint64_t>(v, "ensemble.seed"); },
                     [](const RunConfig& c) { return std::to_string(c.ensemble.seed); }, true});
        f.push_back({"noise.kind",
                     [](RunConfig& c, const std::string& v) {
                         if (v == "none") c.noise.kind = NoiseKind::none;
                         else if (v == "gaussian") c.noise.kind = NoiseKind::gaussian;
                         else if (v == "poisson") c.noise.kind = NoiseKind::poisson;
                         else throw ConfigError("noise.kind: expected none, gaussian or poisson, got '" + v + "'");
                     },
                     [](const RunConfig& c) {
                         switch (c.noise.kind) {
                             case NoiseKind::gaussian: return std::string("gaussian");
                             case NoiseKind::poisson: return std::string("poisson");
                             default: return std::string("none");
                         }
                     },
                     true});
        real("noise.snr-db", true, [](RunConfig& c) -> double& { return c.noise.snr_db; });
        real("noise.photons", true, [](RunConfig& c) -> double& { return c.noise.photons; });
        f.push_back({"psf.seed",
                     [](RunConfig& c, const std::string& v) { c.psf_seed = parse_int<std::uint64_t>(v, "psf.seed"); },
                     [](const RunConfig& c) { return std::to_string(c.psf_seed); }, true});
        f.push_back({"object.name", [](RunConfig& c, const std::string& v) { c.object = v; },
                     [](const RunConfig& c) { return c.object; }, true});
        f.push_back({"object.file", [](RunConfig& c, const std::string& v) { c.object_file = v; },
                     [](const RunConfig& c) { return c.object_file; }, true});

        auto integer = [&f](std::string key, std::function<int&(RunConfig&)> ref) {
            f.push_back({key, [ref, key](RunConfig& c, const std::string& v) { ref(c) = parse_int<int>(v, key); },
                         [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); }, false});
        };
        integer("schedule.cycles", [](RunConfig& c) -> int& { return c.schedule.cycles; });
        integer("schedule.hio-iterations", [](RunConfig& c) -> int& { return c.schedule.hio_iterations; });
        integer("schedule.er-iterations", [](RunConfig& c) -> int& { return c.schedule.er_iterations; });
        real("schedule.beta", false, [](RunConfig& c) -> double& { return c.schedule.beta; });
        integer("schedule.final-er", [](RunConfig& c) -> int& { return c.schedule.final_er; });
        integer("schedule.restarts", [](RunConfig& c) -> int& { return c.schedule.restarts; });
        f.push_back({"schedule.seed",
                     [](RunConfig& c, const std::string& v) { c.schedule.seed = parse_int<std::uint64_t>(v, "schedule.seed"); },
                     [](const RunConfig& c) { return std::to_string(c.schedule.seed); }, false});
        integer("schedule.free-dc-radius", [](RunConfig& c) -> int& { return c.schedule.free_dc_radius; });
        f.push_back({"schedule.nonnegative",
                     [](RunConfig& c, const std::string& v) { c.schedule.nonnegative = parse_bool(v, "schedule.nonnegative"); },
                     [](const RunConfig& c) { return bool_text(c.schedule.nonnegative); }, false});
        f.push_back({"compensation.mode",
                     [](RunConfig& c, const std::string& v) {
                         if (v == "paper-faithful") c.mode = SpectrumMode::paper_faithful;
                         else if (v == "compensated") c.mode = SpectrumMode::compensated;
                         else throw ConfigError("compensation.mode: expected paper-faithful or compensated, got '" + v + "'");
                     },
                     [](const RunConfig& c) {
                         return std::string(c.mode == SpectrumMode::compensated ? "compensated" : "paper-faithful");
                     },
                     false});
        real("compensation.epsilon", false, [](RunConfig& c) -> double& { return c.epsilon; });
        real("support.threshold", false, [](RunConfig& c) -> double& { return c.support_threshold; });
        integer("support.margin", [](RunConfig& c) -> int& { return c.support_margin; });
        f.push_back({"output.dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; },
                     [](const RunConfig& c) { return c.output_dir; }, false});
        f.push_back({"resolution.separations",
                     [](RunConfig& c, const std::string& v) { c.separations = parse_list(v, "resolution.separations"); },
                     [](const RunConfig& c) {
                         std::string out;
                         for (std::size_t i = 0; i < c.separations.size(); ++i) {
                             if (i) out += ',';
                             out += format_double(c.separations[i]);
                         }
                         return out;
                     },
                     false});
        return f;
    }();
    return table;
}

const KeyField* find_field(const std::string& key) {
    for (const auto& f : fields())
        if (f.key == key) return &f;
    return nullptr;
}

}  // namespace

RetrievalSchedule ScheduleSettings::build() const {
    if (cycles < 0 || final_er < 0) throw ConfigError("schedule.cycles and schedule.final-er must be >= 0");
    RetrievalSchedule s;
    for (int i = 0; i < cycles; ++i) {
        if (hio_iterations > 0) s.blocks.push_back({Algorithm::hio, hio_iterations, beta});
        if (er_iterations > 0) s.blocks.push_back({Algorithm::er, er_iterations, beta});
    }
    if (final_er > 0) s.blocks.push_back({Algorithm::er, final_er, beta});
    s.restarts = restarts;
    s.seed = seed;
    s.free_dc_radius = free_dc_radius;
    s.nonnegative = nonnegative;
    s.validate();
    return s;
}

void RunConfig::validate() const {
    optical.validate();
    if (!(ensemble.grid == optical.object_grid)) throw ConfigError("ensemble grid must equal the object grid");
    ensemble.validate();
    noise.validate();
    reconstruction().validate();
    if (object_file.empty() && object.empty()) throw ConfigError("object.name or object.file is required");
    if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
}

ReconstructionParams RunConfig::reconstruction() const {
    ReconstructionParams p;
    p.mode = mode;
    p.epsilon = epsilon;
    p.support_threshold = support_threshold;
    p.support_margin = support_margin;
    p.schedule = schedule.build();
    return p;
}

PipelineParams RunConfig::pipeline(unsigned workers) const {
    return {ensemble, noise, psf_seed, reconstruction(), workers};
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : fields()) k.push_back(f.key);
        return k;
    }();
    return keys;
}

bool is_acquisition_key(const std::string& key) {
    const KeyField* f = find_field(key);
    return f && f->acquisition;
}

KeyValues parse_config_text(const std::string& text, const std::string& source) {
    KeyValues out;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!find_field(key)) throw ConfigError(where + ": unknown key '" + key + "'");
        if (!out.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    }
    return out;
}

KeyValues read_config_file(const std::filesystem::path& path) {
    return parse_config_text(read_text(path), path.string());
}

void apply_config(RunConfig& config, const KeyValues& values) {
    // Grid keys first so later keys see the final grid.
    for (const char* key : {"grid.nx", "grid.ny", "grid.pitch"}) {
        if (const auto it = values.find(key); it != values.end()) find_field(key)->set(config, it->second);
    }
    for (const auto& [key, value] : values) {
        const KeyField* f = find_field(key);
        if (!f) throw ConfigError("unknown key '" + key + "'");
        if (key.rfind("grid.", 0) == 0) continue;
        f->set(config, value);
    }
}

KeyValues to_key_values(const RunConfig& config) {
    KeyValues out;
    for (const auto& f : fields()) out[f.key] = f.get(config);
    return out;
}

std::string format_config(const RunConfig& config) {
    std::string out;
    for (const auto& f : fields()) out += f.key + " = " + f.get(config) + "\n";
    return out;
}

}  // namespace ghost
