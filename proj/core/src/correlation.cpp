#include "ghost/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ghost/parallel.hpp"

namespace ghost {

namespace {

constexpr std::int64_t kBlock = 1024;

MagnitudeSpectrum unity(const Grid2D& grid) { return {grid, std::vector<double>(grid.size(), 1.0), true}; }

// Normalized circular autocorrelation of a binary pupil, centered.
MagnitudeSpectrum pupil_autocorrelation(const RealImage& pupil) {
    const RealImage ac = circ_correlate(pupil, pupil);
    const double peak = std::round(ac.at(0, 0));
    std::vector<double> values(ac.size());
    std::transform(ac.values().begin(), ac.values().end(), values.begin(),
                   [peak](double v) { return std::max(0.0, std::round(v)) / peak; });
    return MagnitudeSpectrum(pupil.grid(), std::move(values), false).to_centered();
}

double dirichlet(int k, int n, int width) {
    if (k == 0 || width == 1) return 1.0;
    const double a = std::numbers::pi * k / n;
    return std::abs(std::sin(a * width) / (width * std::sin(a)));
}

}  // namespace

CorrelationImage correlate(const MeasurementSet& measurements, unsigned workers) {
    const EnsembleSpec& spec = measurements.ensemble;
    spec.validate();
    const std::int64_t count = spec.count;
    if (count < 2) throw UsageError("correlation needs at least 2 patterns");
    if (static_cast<std::int64_t>(measurements.buckets.size()) != count) {
        throw DataError("bucket count does not match the ensemble size");
    }
    const std::size_t n = spec.grid.size();
    const double jd = static_cast<double>(count);

    double mean_b = 0.0;
    for (double b : measurements.buckets) mean_b += b;
    mean_b /= jd;

    struct Partial {
        std::vector<double> weighted;
        std::vector<std::int64_t> on;
        double residual = 0.0;
    };
    const auto blocks = static_cast<std::size_t>((count + kBlock - 1) / kBlock);
    std::vector<Partial> partials(blocks);
    parallel_blocks(blocks, workers, [&](std::size_t b) {
        Partial part{std::vector<double>(n, 0.0), std::vector<std::int64_t>(n, 0), 0.0};
        std::vector<std::uint8_t> pattern(n);
        const std::int64_t begin = static_cast<std::int64_t>(b) * kBlock;
        const std::int64_t end = std::min(count, begin + kBlock);
        for (std::int64_t j = begin; j < end; ++j) {
            fill_pattern(spec, j, pattern);
            const double fluct = measurements.buckets[static_cast<std::size_t>(j)] - mean_b;
            part.residual += fluct;
            for (std::size_t i = 0; i < n; ++i) {
                if (pattern[i]) {
                    part.weighted[i] += fluct;
                    ++part.on[i];
                }
            }
        }
        partials[b] = std::move(part);
    });

    std::vector<double> weighted(n, 0.0);
    std::vector<std::int64_t> on(n, 0);
    double residual = 0.0;
    for (const auto& part : partials) {
        for (std::size_t i = 0; i < n; ++i) {
            weighted[i] += part.weighted[i];
            on[i] += part.on[i];
        }
        residual += part.residual;
    }

    // (1/J) sum (B - Bbar)(M - Mbar) = (1/J) sum (B - Bbar) M - Mbar (1/J) sum (B - Bbar);
    // the second term only removes summation round-off.
    RealImage c(spec.grid);
    for (std::size_t i = 0; i < n; ++i) {
        const double mean_m = static_cast<double>(on[i]) / jd;
        c[i] = weighted[i] / jd - mean_m * residual / jd;
    }
    return {std::move(c), count};
}

MagnitudeSpectrum magnitude_spectrum(const CorrelationImage& c) { return magnitude(fft2(c.image), true); }

FilterModel filter_model(const OpticalConfig& config, int footprint_px) {
    config.validate();
    if (footprint_px < 1) throw ConfigError("source footprint must be at least one pixel");
    const Grid2D& grid = config.object_grid;
    const RealImage pupil = pupil_indicator(grid, 0.5 * config.cutoff());

    MagnitudeSpectrum lens = unity(grid);
    MagnitudeSpectrum speckle = unity(grid);
    if (config.optical_case == OpticalCase::lens_only) {
        lens = pupil_autocorrelation(pupil);
    } else {
        const double n0 = sum(pupil.values());
        const MagnitudeSpectrum a = pupil_autocorrelation(pupil);
        std::vector<double> values(grid.size());
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::sqrt(a.values()[i] / n0);
        values[grid.index(grid.nx() / 2, grid.ny() / 2)] = 1.0;
        speckle = MagnitudeSpectrum(grid, std::move(values), true);
    }

    std::vector<double> pixel_values(grid.size());
    for (int y = 0; y < grid.ny(); ++y) {
        const double wy = dirichlet(y - grid.ny() / 2, grid.ny(), footprint_px);
        for (int x = 0; x < grid.nx(); ++x) {
            pixel_values[grid.index(x, y)] = wy * dirichlet(x - grid.nx() / 2, grid.nx(), footprint_px);
        }
    }
    MagnitudeSpectrum pixel(grid, std::move(pixel_values), true);

    std::vector<double> product(grid.size());
    for (std::size_t i = 0; i < product.size(); ++i) {
        product[i] = lens.values()[i] * speckle.values()[i] * pixel.values()[i];
    }
    return {MagnitudeSpectrum(grid, std::move(product), true), std::move(lens), std::move(speckle), std::move(pixel)};
}

double default_epsilon(const FilterModel& filter) noexcept { return 1e-2 * filter.mtf.max(); }

MagnitudeSpectrum compensate(const MagnitudeSpectrum& spectrum, const FilterModel& filter, double epsilon) {
    if (!(epsilon > 0.0)) throw ConfigError("compensation epsilon must be positive");
    require_same_grid(spectrum.grid(), filter.mtf.grid(), "compensate");
    const MagnitudeSpectrum s = spectrum.to_centered();
    const auto& f = filter.mtf.values();
    const double eps2 = epsilon * epsilon;
    std::vector<double> out(s.values().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::max(0.0, s.values()[i] * f[i] / (f[i] * f[i] + eps2));
    }
    const Grid2D& grid = s.grid();
    out[grid.index(grid.nx() / 2, grid.ny() / 2)] = 0.0;
    return {grid, std::move(out), true};
}

MagnitudeSpectrum restrict_to_passband(const MagnitudeSpectrum& spectrum, const FilterModel& filter) {
    require_same_grid(spectrum.grid(), filter.mtf.grid(), "restrict_to_passband");
    const MagnitudeSpectrum s = spectrum.to_centered();
    std::vector<double> out(s.vector());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (filter.mtf.values()[i] <= 0.0) out[i] = 0.0;
    }
    MagnitudeSpectrum masked(s.grid(), std::move(out), true);
    return spectrum.centered() ? masked : masked.to_uncentered();
}

double out_of_band_power(const MagnitudeSpectrum& spectrum, const FilterModel& filter) {
    require_same_grid(spectrum.grid(), filter.mtf.grid(), "out_of_band_power");
    const MagnitudeSpectrum s = spectrum.to_centered();
    double power = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < s.values().size(); ++i) {
        if (filter.mtf.values()[i] > 0.0) continue;
        power += s.values()[i] * s.values()[i];
        ++count;
    }
    return count ? power / static_cast<double>(count) : 0.0;
}

std::vector<double> radial_rms(const MagnitudeSpectrum& spectrum, double ring_width,
                               const std::vector<std::uint8_t>* mask) {
    if (!(ring_width > 0.0)) throw UsageError("ring width must be positive");
    const Grid2D& grid = spectrum.grid();
    const double rmax = std::hypot(grid.nx() / 2.0, grid.ny() / 2.0);
    const auto rings = static_cast<std::size_t>(rmax / ring_width + 1.5);
    std::vector<double> power(rings, 0.0);
    std::vector<std::size_t> counts(rings, 0);
    for (int y = 0; y < grid.ny(); ++y) {
        for (int x = 0; x < grid.nx(); ++x) {
            const std::size_t i = grid.index(x, y);
            if (mask && !(*mask)[i]) continue;
            const int kx = spectrum.centered() ? x - grid.nx() / 2 : signed_bin(x, grid.nx());
            const int ky = spectrum.centered() ? y - grid.ny() / 2 : signed_bin(y, grid.ny());
            const auto ring = static_cast<std::size_t>(std::floor(std::hypot(kx, ky) / ring_width + 0.5));
            if (ring >= rings) continue;
            power[ring] += spectrum.values()[i] * spectrum.values()[i];
            ++counts[ring];
        }
    }
    std::vector<double> out(rings);
    for (std::size_t k = 0; k < rings; ++k) {
        out[k] = counts[k] ? std::sqrt(power[k] / static_cast<double>(counts[k]))
                           : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

}  // namespace ghost
