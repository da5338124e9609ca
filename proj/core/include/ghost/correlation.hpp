#pragma once

#include <cstdint>
#include <vector>

#include "ghost/forward_model.hpp"
#include "ghost/grid.hpp"

namespace ghost {

/// Pattern/bucket fluctuation correlation C(rho') on the object grid.
struct CorrelationImage {
    RealImage image;
    std::int64_t count_used = 0;
};

/// Overall spatial filter F = lens * speckle * pixel, each component a
/// centered magnitude spectrum with values in [0, 1].
struct FilterModel {
    MagnitudeSpectrum mtf;
    MagnitudeSpectrum lens;
    MagnitudeSpectrum speckle;
    MagnitudeSpectrum pixel;
};

/// C = (1/J) sum_j (B_j - mean B)(M_j - mean M), patterns regenerated from the
/// ensemble spec. Memory is two accumulator images per block of patterns;
/// blocks merge in a fixed order, so the result does not depend on `workers`.
CorrelationImage correlate(const MeasurementSet& measurements, unsigned workers = 1);

/// Centered |fft2(C)|. The zero-frequency bin is left as computed; consumers
/// decide whether it is constrained.
MagnitudeSpectrum magnitude_spectrum(const CorrelationImage& c);

/// Transfer-function model for a configuration.
///
/// * speckle (scattering case): sqrt(A(u) / n0) away from zero frequency and
///   1 at zero frequency, where A is the normalized autocorrelation of the
///   aperture disk and n0 its pixel count. This is the root-mean-square MTF
///   of a random-phase aperture; the unit zero-frequency value is the
///   background peak of the speckle intensity.
/// * lens (lens-only case): normalized autocorrelation of the lens pupil.
/// * pixel: magnitude spectrum of a `footprint_px`-wide source cell.
///
/// Components that do not apply to the active case are unity.
FilterModel filter_model(const OpticalConfig& config, int footprint_px = 1);

/// Wiener-style magnitude compensation |C| F / (F^2 + eps^2), zero-frequency
/// bin zeroed, clipped at 0. Output is centered.
MagnitudeSpectrum compensate(const MagnitudeSpectrum& spectrum, const FilterModel& filter, double epsilon);

/// Default regularizer 1e-2 * max(F).
double default_epsilon(const FilterModel& filter) noexcept;

/// Zeroes every bin where the filter model has no transmission. Output keeps
/// the layout of `spectrum`.
MagnitudeSpectrum restrict_to_passband(const MagnitudeSpectrum& spectrum, const FilterModel& filter);

/// Mean |spectrum|^2 over the bins where the filter model is zero. There the
/// expected correlation spectrum vanishes, so this estimates the per-bin
/// power of the finite-J fluctuation floor. 0 when the passband covers the grid.
double out_of_band_power(const MagnitudeSpectrum& spectrum, const FilterModel& filter);

/// Ring-wise root-mean-square of a spectrum. Ring k holds the bins whose
/// radius r (in bins) satisfies |r - k * width| < width / 2. Bins with a zero
/// weight in `mask` (same layout as `spectrum`, optional) are skipped; rings
/// without bins report NaN.
std::vector<double> radial_rms(const MagnitudeSpectrum& spectrum, double ring_width,
                               const std::vector<std::uint8_t>* mask = nullptr);

}  // namespace ghost
