#pragma once

#include <cstdint>

#include "ghost/forward_model.hpp"
#include "ghost/grid.hpp"
#include "ghost/pipeline.hpp"

namespace ghost {

struct AlignmentResult {
    int dx = 0;  // signed circular shift applied to the (possibly reflected) reconstruction
    int dy = 0;
    bool flipped = false;
    double pearson = 0.0;
    RealImage aligned;  // reconstruction after reflection and shift
};

/// Pearson correlation of two images on the same grid. Throws NumericalError
/// when either has zero variance.
double pearson(const RealImage& a, const RealImage& b);

/// Best Pearson correlation over every circular shift of `recon` and of its
/// point reflection. Ties within 1e-12 go to the smallest (flipped, dx, dy).
AlignmentResult align_and_score(const RealImage& recon, const RealImage& truth);

struct PipelineParams {
    EnsembleSpec ensemble;  // grid is replaced by the optical grid
    NoiseModel noise;
    std::uint64_t psf_seed = 1;
    ReconstructionParams reconstruction;
    unsigned workers = 1;
};

struct ProbeResult {
    double separation = 0.0;  // meters
    int separation_px = 0;
    bool resolved = false;
    double contrast = 0.0;  // 1 - midpoint / lower peak, clipped to [0, 1]
    double pearson = 0.0;
};

/// Dip of a reconstructed two-point pair: peaks are the maxima in the 3x3
/// neighborhoods of the two point positions, the midpoint value is the mean
/// of the one or two pixels halfway between them on the row.
double two_point_contrast(const RealImage& aligned, int separation_px);

/// Minimum dip counted as resolved.
inline constexpr double kResolvedDip = 0.2;

/// Simulates and reconstructs a two-point object at `separation` (meters,
/// rounded to whole pixels) and reports whether the pair is resolved.
ProbeResult resolution_probe(const OpticalConfig& config, double separation, const PipelineParams& params);

}  // namespace ghost
