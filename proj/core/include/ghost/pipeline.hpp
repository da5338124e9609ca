#pragma once

#include <cstdint>

#include "ghost/correlation.hpp"
#include "ghost/forward_model.hpp"
#include "ghost/retrieval.hpp"

namespace ghost {

/// How the retrieval target is derived from |C~|.
///   paper_faithful: |C~| as measured, bins outside the filter passband zeroed.
///   compensated:    Wiener-style division by the filter model.
enum class SpectrumMode { paper_faithful, compensated };

struct ReconstructionParams {
    SpectrumMode mode = SpectrumMode::paper_faithful;
    double epsilon = 0.0;            // compensated mode; 0 selects default_epsilon
    double support_threshold = 0.1;  // fraction of the autocorrelation peak
    int support_margin = 2;
    RetrievalSchedule schedule = RetrievalSchedule::standard();

    void validate() const;
    bool operator==(const ReconstructionParams&) const = default;
};

struct ReconstructionOutput {
    CorrelationImage correlation;
    MagnitudeSpectrum spectrum;  // centered |fft2(C)|
    MagnitudeSpectrum target;    // what the solver was asked to match
    SupportMask support;
    Reconstruction result;
};

/// Support estimated from the passband-restricted spectrum with the
/// out-of-band noise power removed; the same for both modes.
SupportMask support_for(const MagnitudeSpectrum& spectrum, const OpticalConfig& config,
                        const ReconstructionParams& params);

/// correlate -> spectrum -> target -> support estimate -> phase retrieval.
ReconstructionOutput reconstruct(const MeasurementSet& measurements, const ReconstructionParams& params,
                                 unsigned workers = 1);

/// Retrieval target for a given spectrum and mode.
MagnitudeSpectrum retrieval_target(const MagnitudeSpectrum& spectrum, const OpticalConfig& config,
                                   const ReconstructionParams& params);

}  // namespace ghost
