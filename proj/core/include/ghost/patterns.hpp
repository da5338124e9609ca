#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ghost/grid.hpp"

namespace ghost {

enum class EnsembleKind { random_binary, hadamard };

/// Description of a preset pattern ensemble. Patterns are never stored; any
/// member can be regenerated from (seed, j).
struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::random_binary;
    Grid2D grid{64, 64, 7.4e-6};
    std::int64_t count = 1 << 14;
    double fill_fraction = 0.5;
    std::uint64_t seed = 1;

    /// Throws UsageError / ConfigError on an unusable spec.
    void validate() const;

    bool operator==(const EnsembleSpec&) const = default;
};

/// One binary source pattern (0/1 per pixel) with its ordinal.
struct Pattern {
    Field<std::uint8_t> values;
    std::int64_t index;
};

Pattern generate_pattern(const EnsembleSpec& spec, std::int64_t j);

/// Writes pattern j into `out` (grid.size() entries) without validating the
/// spec; the hot path for simulation and correlation.
void fill_pattern(const EnsembleSpec& spec, std::int64_t j, std::span<std::uint8_t> out);

/// (1/J) sum_j <dM_j(r) dM_j(r + lag)>_r with dM = M - ensemble mean per
/// pixel. Computed exactly in two passes over the ensemble.
double ensemble_autocorrelation(const EnsembleSpec& spec, int lag_x, int lag_y, unsigned workers = 1);

/// Streams patterns and yields the ensemble autocorrelation at every lag
/// (unshifted lag layout) for the patterns added so far. FFT based, so it
/// can be sampled at increasing J without revisiting earlier patterns.
class AutocorrelationAccumulator {
public:
    explicit AutocorrelationAccumulator(const Grid2D& grid);

    void add(std::span<const std::uint8_t> pattern);
    std::int64_t count() const noexcept { return count_; }

    RealImage lag_map() const;

private:
    Grid2D grid_;
    std::int64_t count_ = 0;
    std::vector<double> power_;
    std::vector<std::int64_t> on_counts_;
    std::vector<Complex> scratch_;
};

}  // namespace ghost
