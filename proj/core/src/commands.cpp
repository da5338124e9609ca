#include "ghost/commands.hpp"

#include "ghost/io.hpp"
#include "ghost/objects.hpp"

namespace ghost {

namespace fs = std::filesystem;

RealImage load_object(const RunConfig& config) {
    if (!config.object_file.empty()) {
        RealImage image = read_image(config.object_file);
        require_same_grid(image.grid(), config.optical.object_grid, "object file vs configured grid");
        return image;
    }
    return builtin_object(config.object, config.optical.object_grid);
}

MeasurementSet cmd_simulate(const RunConfig& config, unsigned workers) {
    config.validate();
    const RealImage object = load_object(config);
    MeasurementSet set = simulate(object, config.optical, config.ensemble, config.noise, config.psf_seed, workers);

    const fs::path dir = config.output_dir;
    write_text(dir / "measurement.cfg", format_config(config));
    write_buckets(dir / "buckets.csv", set.buckets);
    const PSF psf = system_psf(config.optical, config.psf_seed);
    write_image(dir / "oracle" / "object.f64", object, ArrayKind::object);
    write_pgm(dir / "oracle" / "object.pgm", object);
    write_image(dir / "oracle" / "psf.f64", psf.image(), ArrayKind::psf);
    write_pgm(dir / "oracle" / "psf.pgm", psf.image());
    return set;
}

LoadedMeasurements load_measurements(const fs::path& measurement_cfg, const RunConfig& settings) {
    const KeyValues stored = read_config_file(measurement_cfg);
    KeyValues acquisition;
    for (const auto& [key, value] : stored)
        if (is_acquisition_key(key)) acquisition.emplace(key, value);
    RunConfig config = settings;
    apply_config(config, acquisition);
    config.ensemble.grid = config.optical.object_grid;
    config.validate();

    const fs::path dir = measurement_cfg.parent_path();
    std::vector<double> buckets = read_buckets(dir / "buckets.csv");
    if (static_cast<std::int64_t>(buckets.size()) != config.ensemble.count) {
        throw DataError("buckets.csv has " + std::to_string(buckets.size()) + " rows but ensemble.count is " +
                        std::to_string(config.ensemble.count));
    }
    MeasurementSet set{config.ensemble, std::move(buckets), config.optical, config.noise, config.psf_seed};

    std::optional<RealImage> truth;
    if (const fs::path oracle = dir / "oracle" / "object.f64"; fs::exists(oracle)) truth = read_image(oracle);
    return {std::move(config), std::move(set), std::move(truth)};
}

ReconstructSummary cmd_reconstruct(const fs::path& measurement_cfg, const RunConfig& settings, unsigned workers) {
    const LoadedMeasurements loaded = load_measurements(measurement_cfg, settings);
    ReconstructSummary summary{reconstruct(loaded.set, loaded.config.reconstruction(), workers), std::nullopt};
    const ReconstructionOutput& out = summary.output;

    const fs::path dir = settings.output_dir;
    write_image(dir / "correlation.f64", out.correlation.image, ArrayKind::correlation);
    write_pgm(dir / "correlation.pgm", out.correlation.image);
    write_spectrum(dir / "spectrum.f64", out.spectrum);
    write_pgm(dir / "spectrum.pgm", RealImage(out.spectrum.grid(), out.spectrum.vector()));
    write_spectrum(dir / "target.f64", out.target);
    RealImage support(out.support.grid());
    for (std::size_t i = 0; i < support.size(); ++i) support[i] = out.support.contains(i) ? 1.0 : 0.0;
    write_pgm(dir / "support.pgm", support);
    write_image(dir / "reconstruction.f64", out.result.image, ArrayKind::image);
    write_pgm(dir / "reconstruction.pgm", out.result.image);

    std::string trace = "iteration,fourier_error\n";
    for (std::size_t k = 0; k < out.result.error_trace.size(); ++k) {
        trace += std::to_string(k) + "," + format_double(out.result.error_trace[k]) + "\n";
    }
    write_text(dir / "error_trace.csv", trace);

    const auto [sw, sh] = out.support.extent();
    std::string metrics = "key,value\n";
    metrics += "restart," + std::to_string(out.result.restart_id) + "\n";
    metrics += "fourier_error," + format_double(out.result.fourier_error) + "\n";
    metrics += "iterations," + std::to_string(out.result.iterations_run) + "\n";
    metrics += "support_width," + std::to_string(sw) + "\n";
    metrics += "support_height," + std::to_string(sh) + "\n";
    if (loaded.truth) {
        summary.alignment = align_and_score(out.result.image, *loaded.truth);
        const AlignmentResult& a = *summary.alignment;
        metrics += "pearson," + format_double(a.pearson) + "\n";
        metrics += "shift_x," + std::to_string(a.dx) + "\n";
        metrics += "shift_y," + std::to_string(a.dy) + "\n";
        metrics += std::string("flipped,") + (a.flipped ? "true" : "false") + "\n";
        write_pgm(dir / "aligned.pgm", a.aligned);
    }
    write_text(dir / "metrics.csv", metrics);
    return summary;
}

std::vector<ProbeResult> cmd_resolution(const RunConfig& config, unsigned workers) {
    if (config.separations.empty()) throw UsageError("resolution.separations is empty: nothing to scan");
    config.validate();
    const PipelineParams params = config.pipeline(workers);
    std::vector<ProbeResult> rows;
    std::string csv = std::string(kResolutionHeader) + "\n";
    for (double s : config.separations) {
        const ProbeResult r = resolution_probe(config.optical, s, params);
        rows.push_back(r);
        csv += format_double(r.separation) + "," + std::to_string(r.separation_px) + "," +
               format_double(r.separation / config.optical.resolution()) + "," + format_double(r.contrast) + "," +
               (r.resolved ? "1" : "0") + "," + format_double(r.pearson) + "\n";
    }
    write_text(fs::path(config.output_dir) / "resolution.csv", csv);
    return rows;
}

}  // namespace ghost
