#pragma once

#include <cstdint>
#include <vector>

#include "ghost/grid.hpp"

namespace ghost {

/// Object-domain support. At least one pixel set, all set pixels inside the
/// central half of the grid.
class SupportMask {
public:
    SupportMask(const Grid2D& grid, std::vector<std::uint8_t> mask);

    /// Box of w x h pixels centered on (nx/2, ny/2), clipped to the central half.
    static SupportMask centered_box(const Grid2D& grid, int width, int height);

    /// Every pixel of the central half.
    static SupportMask central_half(const Grid2D& grid);

    const Grid2D& grid() const noexcept { return grid_; }
    const std::vector<std::uint8_t>& mask() const noexcept { return mask_; }
    bool contains(std::size_t i) const noexcept { return mask_[i] != 0; }
    std::size_t count() const noexcept;

    /// Extent of the set region, {width, height}.
    std::pair<int, int> extent() const noexcept;

private:
    Grid2D grid_;
    std::vector<std::uint8_t> mask_;
};

enum class Algorithm { er, hio };

struct ScheduleBlock {
    Algorithm algorithm = Algorithm::hio;
    int iterations = 1;
    double beta = 0.9;  // HIO feedback, ignored by ER

    bool operator==(const ScheduleBlock&) const = default;
};

struct RetrievalSchedule {
    std::vector<ScheduleBlock> blocks;
    int restarts = 16;
    std::uint64_t seed = 1;
    int free_dc_radius = 1;   // bins with kx^2 + ky^2 < r^2 are unconstrained
    bool nonnegative = true;  // clamp negative pixels inside the support

    /// 20 x (HIO 40 @ 0.9, ER 10), then ER 100; 16 restarts.
    static RetrievalSchedule standard();

    void validate() const;
    int total_iterations() const noexcept;

    bool operator==(const RetrievalSchedule&) const = default;
};

struct Reconstruction {
    RealImage image;
    double fourier_error = 0.0;
    int restart_id = 0;
    int iterations_run = 0;
    /// trace[k] is the Fourier error of the iterate after k steps (trace[0]
    /// is the initializer, the last entry the returned image).
    std::vector<double> error_trace;
};

/// Bins that carry a magnitude constraint (1) or float freely (0), unshifted layout.
std::vector<std::uint8_t> constrained_bins(const Grid2D& grid, int free_dc_radius);

/// Replaces the Fourier magnitude of `iterate` by `target` on constrained
/// bins, keeping the phase (zero phase where the current value is 0); free
/// bins keep their current value.
ComplexField project_magnitude(const ComplexField& iterate, const MagnitudeSpectrum& target, int free_dc_radius);

/// Error-reduction step: magnitude projection, then real part, zero outside
/// the support and (optionally) negative values clamped to 0.
ComplexField er_step(const ComplexField& iterate, const MagnitudeSpectrum& target, const SupportMask& support,
                     int free_dc_radius = 1, bool nonnegative = true);

/// Hybrid input-output step: g' = P_M(g); keep g' where it satisfies the
/// object constraints, elsewhere g - beta * g'. Works on real parts.
ComplexField hio_step(const ComplexField& iterate, const MagnitudeSpectrum& target, const SupportMask& support,
                      double beta, int free_dc_radius = 1, bool nonnegative = true);

/// E_F = sqrt(sum (|G| - target)^2 / sum target^2) over constrained bins.
double fourier_error(const ComplexField& iterate, const MagnitudeSpectrum& target, int free_dc_radius);

/// Support estimate from the autocorrelation |target|^2 -> ifft. The largest
/// |lag| per axis among all lags above threshold_fraction * peak gives the
/// object extent (reach + 1); that plus `margin` pixels per side becomes a
/// centered box. Bins inside free_dc_radius are excluded from the
/// autocorrelation. `noise_power` is subtracted from |target|^2 on every
/// nonzero bin (clipped at 0) before transforming.
SupportMask estimate_support(const MagnitudeSpectrum& spectrum, double threshold_fraction, int margin = 2,
                             int free_dc_radius = 1, double noise_power = 0.0);

/// Starting point of restart `restart`: target magnitude with uniform random
/// phases, inverse transformed.
ComplexField initial_iterate(const MagnitudeSpectrum& target, std::uint64_t seed, int restart);

/// One restart of the block schedule.
Reconstruction run_restart(const MagnitudeSpectrum& target, const RetrievalSchedule& schedule,
                           const SupportMask& support, int restart);

/// All restarts; returns the one with the lowest final E_F (ties to the
/// lower restart id). Same output for any `workers`.
Reconstruction run(const MagnitudeSpectrum& target, const RetrievalSchedule& schedule, const SupportMask& support,
                   unsigned workers = 1);

}  // namespace ghost
