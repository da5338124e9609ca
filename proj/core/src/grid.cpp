#include "ghost/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

namespace ghost {

Grid2D::Grid2D(int nx, int ny, double pitch) : nx_(nx), ny_(ny), pitch_(pitch) {
    if (nx < 2 || ny < 2) {
        throw ConfigError("grid dimensions must be at least 2x2");
    }
    if (!(pitch > 0.0) || !std::isfinite(pitch)) {
        throw ConfigError("grid pitch must be a positive finite length");
    }
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
    if (!(a == b)) {
        throw ConfigError(std::string(what) + ": grid mismatch");
    }
}

MagnitudeSpectrum::MagnitudeSpectrum(const Grid2D& grid, std::vector<double> values, bool centered)
    : grid_(grid), values_(std::move(values)), centered_(centered) {
    if (values_.size() != grid_.size()) {
        throw ConfigError("spectrum data length does not match its grid");
    }
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DataError("magnitude spectrum values must be finite and nonnegative");
        }
    }
}

double MagnitudeSpectrum::at_bin(int kx, int ky) const noexcept {
    int x = wrap_index(kx, grid_.nx());
    int y = wrap_index(ky, grid_.ny());
    if (centered_) {
        x = centered_position(x, grid_.nx());
        y = centered_position(y, grid_.ny());
    }
    return values_[grid_.index(x, y)];
}

MagnitudeSpectrum MagnitudeSpectrum::to_centered() const {
    if (centered_) return *this;
    std::vector<double> out(values_.size());
    const int nx = grid_.nx(), ny = grid_.ny();
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x)
            out[grid_.index(centered_position(x, nx), centered_position(y, ny))] = values_[grid_.index(x, y)];
    return {grid_, std::move(out), true};
}

MagnitudeSpectrum MagnitudeSpectrum::to_uncentered() const {
    if (!centered_) return *this;
    std::vector<double> out(values_.size());
    const int nx = grid_.nx(), ny = grid_.ny();
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x)
            out[grid_.index(uncentered_position(x, nx), uncentered_position(y, ny))] = values_[grid_.index(x, y)];
    return {grid_, std::move(out), false};
}

double MagnitudeSpectrum::max() const noexcept {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

namespace {

// FFTW planning is not thread-safe, execution with the new-array interface is.
// Plans are made once per (nx, ny, sign) and kept for the process lifetime.
class PlanCache {
public:
    fftw_plan get(int nx, int ny, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(nx, ny, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<Complex> scratch(static_cast<std::size_t>(nx) * ny);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = fftw_plan_dft_2d(ny, nx, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void transform(std::span<Complex> data, int nx, int ny, int sign) {
    fftw_plan plan = plan_cache().get(nx, ny, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
    const double scale = 1.0 / std::sqrt(static_cast<double>(nx) * ny);
    for (auto& v : data) v *= scale;
}

void require_finite(std::span<const Complex> data) {
    for (const auto& v : data) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw DataError("Fourier transform input contains non-finite values");
        }
    }
}

}  // namespace

void fft2_inplace(std::span<Complex> data, int nx, int ny) { transform(data, nx, ny, FFTW_FORWARD); }

void ifft2_inplace(std::span<Complex> data, int nx, int ny) { transform(data, nx, ny, FFTW_BACKWARD); }

ComplexField fft2(const ComplexField& field) {
    require_finite(field.values());
    ComplexField out = field;
    fft2_inplace(out.values(), out.grid().nx(), out.grid().ny());
    return out;
}

ComplexField fft2(const RealImage& image) { return fft2(to_complex(image)); }

ComplexField ifft2(const ComplexField& spectrum) {
    require_finite(spectrum.values());
    ComplexField out = spectrum;
    ifft2_inplace(out.values(), out.grid().nx(), out.grid().ny());
    return out;
}

RealImage real_part(const ComplexField& field) {
    RealImage out(field.grid());
    std::transform(field.values().begin(), field.values().end(), out.values().begin(),
                   [](const Complex& c) { return c.real(); });
    return out;
}

ComplexField to_complex(const RealImage& image) {
    ComplexField out(image.grid());
    std::transform(image.values().begin(), image.values().end(), out.values().begin(),
                   [](double v) { return Complex(v, 0.0); });
    return out;
}

MagnitudeSpectrum magnitude(const ComplexField& spectrum, bool centered) {
    std::vector<double> mag(spectrum.size());
    std::transform(spectrum.values().begin(), spectrum.values().end(), mag.begin(),
                   [](const Complex& c) { return std::abs(c); });
    MagnitudeSpectrum raw(spectrum.grid(), std::move(mag), false);
    return centered ? raw.to_centered() : raw;
}

RealImage circ_convolve(const RealImage& a, const RealImage& b) {
    require_same_grid(a.grid(), b.grid(), "circ_convolve");
    ComplexField fa = fft2(a);
    const ComplexField fb = fft2(b);
    // Unitary transforms: conv = sqrt(N) * ifft(fa * fb).
    const double n = std::sqrt(static_cast<double>(a.size()));
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i] * n;
    return real_part(ifft2(fa));
}

RealImage circ_correlate(const RealImage& a, const RealImage& b) {
    require_same_grid(a.grid(), b.grid(), "circ_correlate");
    ComplexField fa = fft2(a);
    const ComplexField fb = fft2(b);
    const double n = std::sqrt(static_cast<double>(a.size()));
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] = std::conj(fa[i]) * fb[i] * n;
    return real_part(ifft2(fa));
}

RealImage point_reflect(const RealImage& image) {
    RealImage out(image.grid());
    const int nx = image.grid().nx(), ny = image.grid().ny();
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) out.at(x, y) = image.periodic(-x, -y);
    return out;
}

RealImage circ_shift(const RealImage& image, int dx, int dy) {
    RealImage out(image.grid());
    const int nx = image.grid().nx(), ny = image.grid().ny();
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) out.at(wrap_index(x + dx, nx), wrap_index(y + dy, ny)) = image.at(x, y);
    return out;
}

RealImage disk_indicator(double diameter_px, const Grid2D& grid) {
    if (!(diameter_px > 0.0) || diameter_px > std::min(grid.nx(), grid.ny())) {
        throw ConfigError("disk diameter must lie in (0, min(nx, ny)]");
    }
    RealImage disk(grid);
    const double r2 = 0.25 * diameter_px * diameter_px;
    for (int y = 0; y < grid.ny(); ++y) {
        const int ky = signed_bin(y, grid.ny());
        for (int x = 0; x < grid.nx(); ++x) {
            const int kx = signed_bin(x, grid.nx());
            if (kx * kx + ky * ky < r2) disk.at(x, y) = 1.0;
        }
    }
    return disk;
}

MagnitudeSpectrum disk_autocorrelation(double diameter_px, const Grid2D& grid) {
    const RealImage disk = disk_indicator(diameter_px, grid);
    RealImage ac = circ_correlate(disk, disk);
    const double peak = ac.at(0, 0);
    std::vector<double> values(ac.size());
    // Overlap counts are integers; snap away transform round-off.
    std::transform(ac.values().begin(), ac.values().end(), values.begin(),
                   [peak](double v) { return std::max(0.0, std::round(v)) / std::round(peak); });
    return MagnitudeSpectrum(grid, std::move(values), false).to_centered();
}

double sum(std::span<const double> v) noexcept { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace ghost
