#pragma once

#include <cstdint>
#include <vector>

#include "ghost/grid.hpp"
#include "ghost/patterns.hpp"

namespace ghost {

enum class OpticalCase { lens_only, scattering };

/// Geometry of the source -> lens -> diffuser -> object path. Lengths in meters.
///
/// The DMD plane is imaged onto the object grid, so one DMD cell corresponds
/// to one object-grid pixel and `dmd_pitch` only records the physical cell
/// size (object_grid.pitch / dmd_pitch is the magnification).
struct OpticalConfig {
    double wavelength = 0.0;  // required, no default
    double z_m = 0.070;
    double z_l = 0.250;
    double z_o = 0.300;
    double focal_length = 0.025;
    double aperture_diameter = 6e-3;
    double dmd_pitch = 7.4e-6;
    Grid2D object_grid{64, 64, 7.4e-6};
    OpticalCase optical_case = OpticalCase::scattering;
    // Source within the diffuser's memory-effect range. Only checked, never modeled.
    bool isoplanatic = true;

    void validate() const;

    /// Distance from the limiting stop to the object for the active case.
    double stop_distance() const noexcept;

    /// Support radius of the intensity transfer function, D / (lambda * z), cycles/m.
    double cutoff() const noexcept;

    /// Speckle grain / resolution scale lambda * z / D, meters.
    double resolution() const noexcept { return 1.0 / cutoff(); }

    bool operator==(const OpticalConfig&) const = default;
};

/// Nonnegative, unit-sum intensity point-spread function with its origin at
/// pixel (0, 0).
class PSF {
public:
    explicit PSF(RealImage image);

    const RealImage& image() const noexcept { return image_; }
    const Grid2D& grid() const noexcept { return image_.grid(); }

    /// Delta at the origin: the identity kernel.
    static PSF delta(const Grid2D& grid);

private:
    RealImage image_;
};

enum class NoiseKind { none, gaussian, poisson };

struct NoiseModel {
    NoiseKind kind = NoiseKind::none;
    double snr_db = 20.0;           // gaussian: SNR against the mean-removed bucket fluctuation
    double photons = 1e4;           // poisson: mean photon count of the average bucket

    void validate() const;
    bool operator==(const NoiseModel&) const = default;
};

struct MeasurementSet {
    EnsembleSpec ensemble;
    std::vector<double> buckets;
    OpticalConfig config;
    NoiseModel noise;
    std::uint64_t psf_seed = 0;
};

/// Incoherent lens PSF |ifft(pupil)|^2 for a circular pupil whose field
/// passband radius is D / (2 lambda z). Requires the lens-only case.
PSF lens_psf(const OpticalConfig& config);

/// One speckle realization behind the diffuser: uniform random phases on the
/// aperture disk, propagated and squared. Requires the scattering case.
PSF speckle_psf(const OpticalConfig& config, std::uint64_t psf_seed);

/// Circular pupil field passing |u| < radius (cycles/m), unshifted layout.
RealImage pupil_indicator(const Grid2D& grid, double radius);

/// Speckle intensity from a random-phase disk of `pupil_diameter_bins`
/// frequency bins. No Nyquist check; used for statistics studies.
RealImage speckle_intensity(const Grid2D& grid, double pupil_diameter_bins, std::uint64_t seed);

/// |sum_r S(r) exp(-2 pi i u.r)|: the modulation transfer function with
/// value 1 at zero frequency for a unit-sum PSF. Centered layout.
MagnitudeSpectrum mtf(const PSF& psf);

/// Pattern projected through the PSF: P = M * S (circular).
RealImage illuminate(const Pattern& pattern, const PSF& psf);

/// Bucket signal sum_r O(r) P(r) * pitch^2. Object must be nonnegative.
double bucket(const RealImage& object, const RealImage& illumination);

/// Object seen from the source plane: pitch^2 * (O * S(-r)). Buckets are
/// then sum_rho M(rho) * g(rho), the second form of the bucket integral.
RealImage source_plane_response(const RealImage& object, const PSF& psf);

/// Rejects objects with pixels outside the central half of the grid.
void require_central_support(const RealImage& object);

/// Builds the PSF for the configured case.
PSF system_psf(const OpticalConfig& config, std::uint64_t psf_seed);

/// Full acquisition: one PSF for all J patterns, buckets via the source-plane
/// response, then optional noise. Independent of `workers`.
MeasurementSet simulate(const RealImage& object, const OpticalConfig& config, const EnsembleSpec& ensemble,
                        const NoiseModel& noise, std::uint64_t psf_seed, unsigned workers = 1);

/// Applies bucket noise in place; exposed for testing the noise statistics.
void apply_noise(std::vector<double>& buckets, const NoiseModel& noise, std::uint64_t noise_seed);

/// Seed of the noise stream for a given PSF seed.
std::uint64_t noise_seed_for(std::uint64_t psf_seed) noexcept;

}  // namespace ghost
