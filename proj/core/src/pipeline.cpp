#include "ghost/pipeline.hpp"

namespace ghost {

void ReconstructionParams::validate() const {
    if (epsilon < 0.0) throw ConfigError("compensation.epsilon must be >= 0");
    if (!(support_threshold > 0.0 && support_threshold < 1.0)) {
        throw ConfigError("support.threshold must lie in (0, 1)");
    }
    if (support_margin < 0) throw ConfigError("support.margin must be >= 0");
    schedule.validate();
}

MagnitudeSpectrum retrieval_target(const MagnitudeSpectrum& spectrum, const OpticalConfig& config,
                                   const ReconstructionParams& params) {
    const FilterModel filter = filter_model(config);
    if (params.mode == SpectrumMode::paper_faithful) return restrict_to_passband(spectrum.to_centered(), filter);
    const double eps = params.epsilon > 0.0 ? params.epsilon : default_epsilon(filter);
    return compensate(spectrum, filter, eps);
}

SupportMask support_for(const MagnitudeSpectrum& spectrum, const OpticalConfig& config,
                        const ReconstructionParams& params) {
    const FilterModel filter = filter_model(config);
    const MagnitudeSpectrum band = restrict_to_passband(spectrum.to_centered(), filter);
    return estimate_support(band, params.support_threshold, params.support_margin, params.schedule.free_dc_radius,
                            out_of_band_power(spectrum, filter));
}

ReconstructionOutput reconstruct(const MeasurementSet& measurements, const ReconstructionParams& params,
                                 unsigned workers) {
    params.validate();
    CorrelationImage c = correlate(measurements, workers);
    MagnitudeSpectrum spectrum = magnitude_spectrum(c);
    MagnitudeSpectrum target = retrieval_target(spectrum, measurements.config, params);
    SupportMask support = support_for(spectrum, measurements.config, params);
    Reconstruction result = run(target, params.schedule, support, workers);
    return {std::move(c), std::move(spectrum), std::move(target), std::move(support), std::move(result)};
}

}  // namespace ghost
