#include "ghost/forward_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ghost/parallel.hpp"
#include "ghost/random.hpp"

namespace ghost {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ConfigError(std::string("optical.") + name + " must be a positive length");
    }
}

PSF normalized_psf(RealImage intensity) {
    const double total = sum(intensity.values());
    if (!(total > 0.0)) throw NumericalError("point-spread function has zero energy");
    for (auto& v : intensity.values()) v = std::max(0.0, v / total);
    return PSF(std::move(intensity));
}

RealImage intensity_of(ComplexField field) {
    ifft2_inplace(field.values(), field.grid().nx(), field.grid().ny());
    RealImage out(field.grid());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(field[i]);
    return out;
}

RealImage random_phase_intensity(const RealImage& pupil, std::uint64_t seed) {
    const std::uint64_t key = derive_key(seed, Stream::speckle, 0);
    ComplexField field(pupil.grid());
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (pupil[i] == 0.0) continue;
        const double phase = 2.0 * std::numbers::pi * to_unit(counter_bits(key, i));
        field[i] = std::polar(pupil[i], phase);
    }
    return intensity_of(std::move(field));
}

}  // namespace

void OpticalConfig::validate() const {
    if (wavelength == 0.0) throw ConfigError("optical.wavelength is required (no default is assumed)");
    require_positive(wavelength, "wavelength");
    require_positive(z_m, "z-m");
    require_positive(z_l, "z-l");
    require_positive(z_o, "z-o");
    require_positive(focal_length, "focal-length");
    require_positive(aperture_diameter, "aperture-diameter");
    require_positive(dmd_pitch, "dmd-pitch");
    if (!isoplanatic) {
        throw ConfigError("source outside the isoplanatic (memory-effect) range: the shift-invariant PSF model does not apply");
    }
    if (cutoff() > object_grid.nyquist() * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "transfer-function cutoff D/(lambda*z) = " << cutoff() << " cycles/m exceeds the object-grid Nyquist "
            << object_grid.nyquist() << " cycles/m (optical.aperture-diameter=" << aperture_diameter
            << ", optical.wavelength=" << wavelength << ", "
            << (optical_case == OpticalCase::scattering ? "optical.z-o=" : "optical.z-l+z-o=") << stop_distance()
            << ", grid pitch=" << object_grid.pitch() << ")";
        throw ConfigError(msg.str());
    }
}

double OpticalConfig::stop_distance() const noexcept {
    return optical_case == OpticalCase::scattering ? z_o : z_l + z_o;
}

double OpticalConfig::cutoff() const noexcept { return aperture_diameter / (wavelength * stop_distance()); }

PSF::PSF(RealImage image) : image_(std::move(image)) {
    double total = 0.0;
    for (double v : image_.values()) {
        if (!std::isfinite(v) || v < 0.0) throw DataError("PSF values must be finite and nonnegative");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DataError("PSF must have unit sum");
}

PSF PSF::delta(const Grid2D& grid) {
    RealImage image(grid);
    image.at(0, 0) = 1.0;
    return PSF(std::move(image));
}

RealImage pupil_indicator(const Grid2D& grid, double radius) {
    RealImage pupil(grid);
    const double r2 = radius * radius;
    for (int y = 0; y < grid.ny(); ++y) {
        const double fy = signed_bin(y, grid.ny()) * grid.df_y();
        for (int x = 0; x < grid.nx(); ++x) {
            const double fx = signed_bin(x, grid.nx()) * grid.df_x();
            if (fx * fx + fy * fy < r2) pupil.at(x, y) = 1.0;
        }
    }
    // A pupil narrower than one bin still passes zero frequency.
    pupil.at(0, 0) = 1.0;
    return pupil;
}

PSF lens_psf(const OpticalConfig& config) {
    config.validate();
    if (config.optical_case != OpticalCase::lens_only) throw ConfigError("lens_psf requires the lens-only case");
    const RealImage pupil = pupil_indicator(config.object_grid, 0.5 * config.cutoff());
    return normalized_psf(intensity_of(to_complex(pupil)));
}

PSF speckle_psf(const OpticalConfig& config, std::uint64_t psf_seed) {
    config.validate();
    if (config.optical_case != OpticalCase::scattering) throw ConfigError("speckle_psf requires the scattering case");
    const RealImage pupil = pupil_indicator(config.object_grid, 0.5 * config.cutoff());
    return normalized_psf(random_phase_intensity(pupil, psf_seed));
}

RealImage speckle_intensity(const Grid2D& grid, double pupil_diameter_bins, std::uint64_t seed) {
    return random_phase_intensity(disk_indicator(pupil_diameter_bins, grid), seed);
}

PSF system_psf(const OpticalConfig& config, std::uint64_t psf_seed) {
    return config.optical_case == OpticalCase::scattering ? speckle_psf(config, psf_seed) : lens_psf(config);
}

MagnitudeSpectrum mtf(const PSF& psf) {
    ComplexField spectrum = fft2(psf.image());
    const double n = std::sqrt(static_cast<double>(spectrum.size()));
    for (auto& v : spectrum.values()) v *= n;
    return magnitude(spectrum, true);
}

RealImage illuminate(const Pattern& pattern, const PSF& psf) {
    require_same_grid(pattern.values.grid(), psf.grid(), "illuminate");
    RealImage source(pattern.values.grid());
    for (std::size_t i = 0; i < source.size(); ++i) source[i] = pattern.values[i];
    RealImage out = circ_convolve(source, psf.image());
    for (auto& v : out.values()) v = std::max(0.0, v);
    return out;
}

double bucket(const RealImage& object, const RealImage& illumination) {
    require_same_grid(object.grid(), illumination.grid(), "bucket");
    double acc = 0.0;
    for (std::size_t i = 0; i < object.size(); ++i) {
        if (object[i] < 0.0) throw DataError("object transmittance must be nonnegative");
        acc += object[i] * illumination[i];
    }
    const double pitch = object.grid().pitch();
    return acc * pitch * pitch;
}

RealImage source_plane_response(const RealImage& object, const PSF& psf) {
    require_same_grid(object.grid(), psf.grid(), "source_plane_response");
    RealImage g = circ_convolve(object, point_reflect(psf.image()));
    const double area = object.grid().pitch() * object.grid().pitch();
    for (auto& v : g.values()) v = std::max(0.0, v) * area;
    return g;
}

void require_central_support(const RealImage& object) {
    const Grid2D& grid = object.grid();
    const int x0 = grid.nx() / 4, x1 = x0 + grid.nx() / 2;
    const int y0 = grid.ny() / 4, y1 = y0 + grid.ny() / 2;
    for (int y = 0; y < grid.ny(); ++y) {
        for (int x = 0; x < grid.nx(); ++x) {
            const double v = object.at(x, y);
            if (!std::isfinite(v) || v < 0.0) throw DataError("object values must be finite and nonnegative");
            if (v != 0.0 && (x < x0 || x >= x1 || y < y0 || y >= y1)) {
                throw ConfigError("object support must lie within the central half of the grid");
            }
        }
    }
}

std::uint64_t noise_seed_for(std::uint64_t psf_seed) noexcept {
    return mix64(psf_seed ^ static_cast<std::uint64_t>(Stream::noise));
}

void NoiseModel::validate() const {
    if (kind == NoiseKind::gaussian && !std::isfinite(snr_db)) throw ConfigError("noise.snr-db must be finite");
    if (kind == NoiseKind::poisson && !(photons > 0.0 && std::isfinite(photons))) {
        throw ConfigError("noise.photons must be positive");
    }
}

void apply_noise(std::vector<double>& buckets, const NoiseModel& noise, std::uint64_t noise_seed) {
    noise.validate();
    if (noise.kind == NoiseKind::none || buckets.empty()) return;
    const double n = static_cast<double>(buckets.size());
    double mean = 0.0;
    for (double b : buckets) mean += b;
    mean /= n;

    if (noise.kind == NoiseKind::gaussian) {
        double var = 0.0;
        for (double b : buckets) var += (b - mean) * (b - mean);
        const double sigma = std::sqrt(var / n) * std::pow(10.0, -noise.snr_db / 20.0);
        for (std::size_t j = 0; j < buckets.size(); ++j) {
            CounterRng rng(derive_key(noise_seed, Stream::noise, j));
            buckets[j] += sigma * rng.normal();
        }
        return;
    }

    if (!(mean > 0.0)) return;
    const double scale = noise.photons / mean;
    for (std::size_t j = 0; j < buckets.size(); ++j) {
        CounterRng rng(derive_key(noise_seed, Stream::noise, j));
        const double expected = std::max(0.0, buckets[j] * scale);
        std::poisson_distribution<long long> draw(expected > 0.0 ? expected : 1.0);
        const long long photons = expected > 0.0 ? draw(rng) : 0;
        buckets[j] = static_cast<double>(photons) / scale;
    }
}

MeasurementSet simulate(const RealImage& object, const OpticalConfig& config, const EnsembleSpec& ensemble,
                        const NoiseModel& noise, std::uint64_t psf_seed, unsigned workers) {
    config.validate();
    ensemble.validate();
    noise.validate();
    require_same_grid(object.grid(), config.object_grid, "simulate (object vs optical grid)");
    require_same_grid(ensemble.grid, config.object_grid, "simulate (ensemble vs optical grid)");
    require_central_support(object);

    // The diffuser is static: one PSF realization serves every pattern.
    const PSF psf = system_psf(config, psf_seed);
    const RealImage response = source_plane_response(object, psf);
    const std::span<const double> g = response.values();
    const std::size_t n = g.size();

    MeasurementSet out{ensemble, std::vector<double>(static_cast<std::size_t>(ensemble.count)), config, noise, psf_seed};
    constexpr std::int64_t block = 1024;
    const auto blocks = static_cast<std::size_t>((ensemble.count + block - 1) / block);
    parallel_blocks(blocks, workers, [&](std::size_t b) {
        std::vector<std::uint8_t> pattern(n);
        const std::int64_t begin = static_cast<std::int64_t>(b) * block;
        const std::int64_t end = std::min(ensemble.count, begin + block);
        for (std::int64_t j = begin; j < end; ++j) {
            fill_pattern(ensemble, j, pattern);
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += pattern[i] ? g[i] : 0.0;
            out.buckets[static_cast<std::size_t>(j)] = acc;
        }
    });
    apply_noise(out.buckets, noise, noise_seed_for(psf_seed));
    return out;
}

}  // namespace ghost
