#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ghost/errors.hpp"

namespace ghost {

using Complex = std::complex<double>;

/// Sampled transverse plane. Rows are y, columns are x, storage is row-major.
/// Both axes share one pitch (meters per pixel).
class Grid2D {
public:
    Grid2D(int nx, int ny, double pitch);

    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    double pitch() const noexcept { return pitch_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * nx_ + x;
    }

    /// Frequency spacing along x and y in cycles/meter: 1 / (N * pitch).
    double df_x() const noexcept { return 1.0 / (nx_ * pitch_); }
    double df_y() const noexcept { return 1.0 / (ny_ * pitch_); }

    /// Largest representable frequency, 1 / (2 * pitch).
    double nyquist() const noexcept { return 0.5 / pitch_; }

    bool operator==(const Grid2D&) const = default;

private:
    int nx_;
    int ny_;
    double pitch_;
};

/// Signed bin index of unshifted position k on an axis of length n
/// (0, 1, ..., -2, -1 as in the usual DFT frequency ordering).
constexpr int signed_bin(int k, int n) noexcept { return k < n - n / 2 ? k : k - n; }

/// Array position of the (possibly negative) bin index s, periodic in n.
constexpr int wrap_index(int s, int n) noexcept { return ((s % n) + n) % n; }

/// Position that unshifted index k occupies in a centered (zero at n/2) layout.
constexpr int centered_position(int k, int n) noexcept { return (k + n / 2) % n; }

/// Inverse of centered_position.
constexpr int uncentered_position(int c, int n) noexcept { return (c + n - n / 2) % n; }

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what);

/// Row-major sampled field on a grid. Plain value type.
template <class T>
class Field {
public:
    explicit Field(const Grid2D& grid) : grid_(grid), values_(grid.size()) {}

    Field(const Grid2D& grid, std::vector<T> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) {
            throw ConfigError("field data length does not match its grid");
        }
    }

    const Grid2D& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const T> values() const noexcept { return values_; }
    std::span<T> values() noexcept { return values_; }
    const std::vector<T>& vector() const noexcept { return values_; }

    T& at(int x, int y) noexcept { return values_[grid_.index(x, y)]; }
    const T& at(int x, int y) const noexcept { return values_[grid_.index(x, y)]; }

    T& operator[](std::size_t i) noexcept { return values_[i]; }
    const T& operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Periodic access with arbitrary (possibly negative) coordinates.
    const T& periodic(int x, int y) const noexcept {
        return at(wrap_index(x, grid_.nx()), wrap_index(y, grid_.ny()));
    }

    bool operator==(const Field&) const = default;

private:
    Grid2D grid_;
    std::vector<T> values_;
};

using RealImage = Field<double>;
using ComplexField = Field<Complex>;

/// Nonnegative Fourier magnitude. `centered` records whether zero frequency
/// sits at (nx/2, ny/2) or at (0, 0).
class MagnitudeSpectrum {
public:
    MagnitudeSpectrum(const Grid2D& grid, std::vector<double> values, bool centered);

    const Grid2D& grid() const noexcept { return grid_; }
    bool centered() const noexcept { return centered_; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }

    double at(int x, int y) const noexcept { return values_[grid_.index(x, y)]; }

    /// Value at signed frequency bins (kx, ky), independent of layout.
    double at_bin(int kx, int ky) const noexcept;

    MagnitudeSpectrum to_centered() const;
    MagnitudeSpectrum to_uncentered() const;

    double max() const noexcept;

private:
    Grid2D grid_;
    std::vector<double> values_;
    bool centered_;
};

/// Unitary forward 2-D DFT (1/sqrt(nx*ny) scaling). Rejects non-finite input.
ComplexField fft2(const ComplexField& field);
ComplexField fft2(const RealImage& image);

/// Unitary inverse 2-D DFT.
ComplexField ifft2(const ComplexField& spectrum);

/// In-place transforms on raw row-major storage of an nx-by-ny array; no
/// finiteness check. Used by the iterative solvers.
void fft2_inplace(std::span<Complex> data, int nx, int ny);
void ifft2_inplace(std::span<Complex> data, int nx, int ny);

RealImage real_part(const ComplexField& field);
ComplexField to_complex(const RealImage& image);

/// |X| in the requested layout.
MagnitudeSpectrum magnitude(const ComplexField& spectrum, bool centered);

/// Periodic convolution: (a*b)(r) = sum_s a(s) b(r - s).
RealImage circ_convolve(const RealImage& a, const RealImage& b);

/// Periodic cross-correlation: (a.b)(l) = sum_r a(r) b(r + l).
RealImage circ_correlate(const RealImage& a, const RealImage& b);

/// Point reflection through the origin: out(r) = in(-r), periodic.
RealImage point_reflect(const RealImage& image);

/// Periodic translation: out(x + dx, y + dy) = in(x, y).
RealImage circ_shift(const RealImage& image, int dx, int dy);

/// Normalized circular autocorrelation of a binary disk of the given diameter
/// (pixels with radius < diameter/2 around the origin). Peak 1 at zero lag,
/// returned in centered layout.
MagnitudeSpectrum disk_autocorrelation(double diameter_px, const Grid2D& grid);

/// Binary disk indicator in unshifted layout (origin at (0, 0)).
RealImage disk_indicator(double diameter_px, const Grid2D& grid);

double sum(std::span<const double> v) noexcept;

}  // namespace ghost
