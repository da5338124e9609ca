#include "ghost/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ghost/parallel.hpp"
#include "ghost/random.hpp"

namespace ghost {

SupportMask::SupportMask(const Grid2D& grid, std::vector<std::uint8_t> mask) : grid_(grid), mask_(std::move(mask)) {
    if (mask_.size() != grid_.size()) throw ConfigError("support mask length does not match its grid");
    const int x0 = grid.nx() / 4, x1 = x0 + grid.nx() / 2;
    const int y0 = grid.ny() / 4, y1 = y0 + grid.ny() / 2;
    bool any = false;
    for (int y = 0; y < grid.ny(); ++y) {
        for (int x = 0; x < grid.nx(); ++x) {
            if (!mask_[grid.index(x, y)]) continue;
            any = true;
            if (x < x0 || x >= x1 || y < y0 || y >= y1) {
                throw ConfigError("support mask extends outside the central half of the grid");
            }
        }
    }
    if (!any) throw NumericalError("support mask is empty");
}

namespace {

std::vector<std::uint8_t> box_mask(const Grid2D& grid, int width, int height) {
    const int x0 = grid.nx() / 4, x1 = x0 + grid.nx() / 2;
    const int y0 = grid.ny() / 4, y1 = y0 + grid.ny() / 2;
    width = std::clamp(width, 1, grid.nx() / 2);
    height = std::clamp(height, 1, grid.ny() / 2);
    const int bx0 = std::max(x0, grid.nx() / 2 - width / 2);
    const int by0 = std::max(y0, grid.ny() / 2 - height / 2);
    const int bx1 = std::min(x1, bx0 + width);
    const int by1 = std::min(y1, by0 + height);
    std::vector<std::uint8_t> mask(grid.size(), 0);
    for (int y = by0; y < by1; ++y)
        for (int x = bx0; x < bx1; ++x) mask[grid.index(x, y)] = 1;
    return mask;
}

}  // namespace

SupportMask SupportMask::centered_box(const Grid2D& grid, int width, int height) {
    return {grid, box_mask(grid, width, height)};
}

SupportMask SupportMask::central_half(const Grid2D& grid) {
    return centered_box(grid, grid.nx() / 2, grid.ny() / 2);
}

std::size_t SupportMask::count() const noexcept {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

std::pair<int, int> SupportMask::extent() const noexcept {
    int xmin = grid_.nx(), xmax = -1, ymin = grid_.ny(), ymax = -1;
    for (int y = 0; y < grid_.ny(); ++y) {
        for (int x = 0; x < grid_.nx(); ++x) {
            if (!mask_[grid_.index(x, y)]) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    return {xmax - xmin + 1, ymax - ymin + 1};
}

RetrievalSchedule RetrievalSchedule::standard() {
    RetrievalSchedule schedule;
    for (int i = 0; i < 20; ++i) {
        schedule.blocks.push_back({Algorithm::hio, 40, 0.9});
        schedule.blocks.push_back({Algorithm::er, 10, 0.9});
    }
    schedule.blocks.push_back({Algorithm::er, 100, 0.9});
    return schedule;
}

void RetrievalSchedule::validate() const {
    if (blocks.empty()) throw ConfigError("retrieval schedule has no blocks");
    for (const auto& block : blocks) {
        if (block.iterations < 1) throw ConfigError("schedule block iterations must be >= 1");
        if (block.algorithm == Algorithm::hio && !(block.beta > 0.0 && block.beta <= 1.0)) {
            throw ConfigError("HIO beta must lie in (0, 1]");
        }
    }
    if (restarts < 1) throw ConfigError("retrieval restarts must be >= 1");
    if (free_dc_radius < 0) throw ConfigError("free DC radius must be >= 0");
}

int RetrievalSchedule::total_iterations() const noexcept {
    int total = 0;
    for (const auto& block : blocks) total += block.iterations;
    return total;
}

std::vector<std::uint8_t> constrained_bins(const Grid2D& grid, int free_dc_radius) {
    std::vector<std::uint8_t> mask(grid.size(), 1);
    const int r2 = free_dc_radius * free_dc_radius;
    for (int y = 0; y < grid.ny(); ++y) {
        const int ky = signed_bin(y, grid.ny());
        for (int x = 0; x < grid.nx(); ++x) {
            const int kx = signed_bin(x, grid.nx());
            if (kx * kx + ky * ky < r2) mask[grid.index(x, y)] = 0;
        }
    }
    return mask;
}

namespace {

// Per-problem state shared by every step of one restart.
class Solver {
public:
    Solver(const MagnitudeSpectrum& target, const SupportMask* support, int free_dc_radius, bool nonnegative)
        : grid_(target.grid()),
          target_(target.to_uncentered().vector()),
          constrained_(constrained_bins(target.grid(), free_dc_radius)),
          support_(support),
          nonnegative_(nonnegative),
          buffer_(target.grid().size()) {
        if (support) require_same_grid(grid_, support->grid(), "phase retrieval support");
        for (std::size_t i = 0; i < target_.size(); ++i) {
            if (constrained_[i]) target_energy_ += target_[i] * target_[i];
        }
    }

    // buffer_ <- P_M(g); returns E_F of g.
    double project(std::span<const Complex> g) {
        std::copy(g.begin(), g.end(), buffer_.begin());
        fft2_inplace(buffer_, grid_.nx(), grid_.ny());
        double mismatch = 0.0;
        for (std::size_t i = 0; i < buffer_.size(); ++i) {
            if (!constrained_[i]) continue;
            const double mag = std::abs(buffer_[i]);
            const double diff = mag - target_[i];
            mismatch += diff * diff;
            buffer_[i] = mag > 0.0 ? buffer_[i] * (target_[i] / mag) : Complex(target_[i], 0.0);
        }
        ifft2_inplace(buffer_, grid_.nx(), grid_.ny());
        return error_of(mismatch);
    }

    double error(std::span<const Complex> g) {
        std::copy(g.begin(), g.end(), buffer_.begin());
        fft2_inplace(buffer_, grid_.nx(), grid_.ny());
        double mismatch = 0.0;
        for (std::size_t i = 0; i < buffer_.size(); ++i) {
            if (!constrained_[i]) continue;
            const double diff = std::abs(buffer_[i]) - target_[i];
            mismatch += diff * diff;
        }
        return error_of(mismatch);
    }

    double er(std::span<Complex> g) {
        const double err = project(g);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = Complex(feasible_value(i, buffer_[i].real()), 0.0);
        return err;
    }

    double hio(std::span<Complex> g, double beta) {
        const double err = project(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double v = buffer_[i].real();
            const bool ok = support_->contains(i) && (!nonnegative_ || v >= 0.0);
            g[i] = Complex(ok ? v : g[i].real() - beta * v, 0.0);
        }
        return err;
    }

    void constrain(std::span<Complex> g) const {
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = Complex(feasible_value(i, g[i].real()), 0.0);
    }

    std::span<const Complex> projected() const noexcept { return buffer_; }

private:
    double feasible_value(std::size_t i, double v) const noexcept {
        if (!support_->contains(i)) return 0.0;
        return nonnegative_ && v < 0.0 ? 0.0 : v;
    }

    double error_of(double mismatch) const noexcept {
        return target_energy_ > 0.0 ? std::sqrt(mismatch / target_energy_) : std::sqrt(mismatch);
    }

    Grid2D grid_;
    std::vector<double> target_;
    std::vector<std::uint8_t> constrained_;
    const SupportMask* support_;
    bool nonnegative_;
    std::vector<Complex> buffer_;
    double target_energy_ = 0.0;
};

}  // namespace

ComplexField project_magnitude(const ComplexField& iterate, const MagnitudeSpectrum& target, int free_dc_radius) {
    require_same_grid(iterate.grid(), target.grid(), "project_magnitude");
    Solver solver(target, nullptr, free_dc_radius, false);
    solver.project(iterate.values());
    const auto out = solver.projected();
    return {iterate.grid(), std::vector<Complex>(out.begin(), out.end())};
}

ComplexField er_step(const ComplexField& iterate, const MagnitudeSpectrum& target, const SupportMask& support,
                     int free_dc_radius, bool nonnegative) {
    require_same_grid(iterate.grid(), target.grid(), "er_step");
    Solver solver(target, &support, free_dc_radius, nonnegative);
    ComplexField out = iterate;
    solver.er(out.values());
    return out;
}

ComplexField hio_step(const ComplexField& iterate, const MagnitudeSpectrum& target, const SupportMask& support,
                      double beta, int free_dc_radius, bool nonnegative) {
    require_same_grid(iterate.grid(), target.grid(), "hio_step");
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("HIO beta must lie in [0, 1]");
    Solver solver(target, &support, free_dc_radius, nonnegative);
    ComplexField out = iterate;
    solver.hio(out.values(), beta);
    return out;
}

double fourier_error(const ComplexField& iterate, const MagnitudeSpectrum& target, int free_dc_radius) {
    require_same_grid(iterate.grid(), target.grid(), "fourier_error");
    Solver solver(target, nullptr, free_dc_radius, false);
    return solver.error(iterate.values());
}

SupportMask estimate_support(const MagnitudeSpectrum& spectrum, double threshold_fraction, int margin,
                             int free_dc_radius, double noise_power) {
    if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
        throw ConfigError("support threshold fraction must lie in (0, 1)");
    }
    if (margin < 0) throw ConfigError("support margin must be >= 0");
    if (!(noise_power >= 0.0)) throw ConfigError("noise power must be >= 0");
    const Grid2D& grid = spectrum.grid();
    const MagnitudeSpectrum s = spectrum.to_uncentered();
    const auto constrained = constrained_bins(grid, free_dc_radius);

    ComplexField power(grid);
    for (std::size_t i = 0; i < power.size(); ++i) {
        const double v = s.values()[i];
        power[i] = constrained[i] && v > 0.0 ? Complex(std::max(0.0, v * v - noise_power), 0.0) : Complex(0.0, 0.0);
    }
    const RealImage ac = real_part(ifft2(power));
    const double peak = ac.at(0, 0);
    const double level = threshold_fraction * peak;
    if (!(peak > 0.0)) throw NumericalError("autocorrelation has no positive peak; cannot estimate a support");

    // Every lag above the level counts, connected or not: objects with gaps
    // (two slits, two points) have autocorrelations with separate side lobes.
    int reach_x = 0, reach_y = 0;
    for (int y = 0; y < grid.ny(); ++y) {
        for (int x = 0; x < grid.nx(); ++x) {
            if (!(ac.at(x, y) > level)) continue;
            reach_x = std::max(reach_x, std::abs(signed_bin(x, grid.nx())));
            reach_y = std::max(reach_y, std::abs(signed_bin(y, grid.ny())));
        }
    }

    // An object of extent w has autocorrelation lags up to w - 1.
    const int width = reach_x + 1 + 2 * margin;
    const int height = reach_y + 1 + 2 * margin;
    return SupportMask::centered_box(grid, width, height);
}

ComplexField initial_iterate(const MagnitudeSpectrum& target, std::uint64_t seed, int restart) {
    const MagnitudeSpectrum t = target.to_uncentered();
    const std::uint64_t key = derive_key(seed, Stream::retrieval, static_cast<std::uint64_t>(restart));
    ComplexField field(t.grid());
    for (std::size_t i = 0; i < field.size(); ++i) {
        field[i] = std::polar(t.values()[i], 2.0 * std::numbers::pi * to_unit(counter_bits(key, i)));
    }
    ifft2_inplace(field.values(), t.grid().nx(), t.grid().ny());
    return field;
}

Reconstruction run_restart(const MagnitudeSpectrum& target, const RetrievalSchedule& schedule,
                           const SupportMask& support, int restart) {
    schedule.validate();
    require_same_grid(target.grid(), support.grid(), "phase retrieval");
    Solver solver(target, &support, schedule.free_dc_radius, schedule.nonnegative);
    ComplexField g = initial_iterate(target, schedule.seed, restart);

    Reconstruction out{RealImage(target.grid()), 0.0, restart, schedule.total_iterations(), {}};
    out.error_trace.reserve(static_cast<std::size_t>(out.iterations_run) + 1);
    for (const auto& block : schedule.blocks) {
        for (int it = 0; it < block.iterations; ++it) {
            const double err = block.algorithm == Algorithm::er ? solver.er(g.values()) : solver.hio(g.values(), block.beta);
            out.error_trace.push_back(err);
        }
    }
    solver.constrain(g.values());
    out.fourier_error = solver.error(g.values());
    out.error_trace.push_back(out.fourier_error);
    out.image = real_part(g);
    return out;
}

Reconstruction run(const MagnitudeSpectrum& target, const RetrievalSchedule& schedule, const SupportMask& support,
                   unsigned workers) {
    schedule.validate();
    std::vector<Reconstruction> results(static_cast<std::size_t>(schedule.restarts),
                                        Reconstruction{RealImage(target.grid()), 0.0, 0, 0, {}});
    parallel_blocks(results.size(), workers, [&](std::size_t r) {
        results[r] = run_restart(target, schedule, support, static_cast<int>(r));
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r) {
        if (results[r].fourier_error < results[best].fourier_error) best = r;
    }
    return std::move(results[best]);
}

}  // namespace ghost
