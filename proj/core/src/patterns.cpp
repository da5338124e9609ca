#include "ghost/patterns.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>

#include "ghost/parallel.hpp"
#include "ghost/random.hpp"

namespace ghost {

void EnsembleSpec::validate() const {
    if (count < 1) {
        throw UsageError("ensemble count must be at least 1 (got " + std::to_string(count) + ")");
    }
    if (kind == EnsembleKind::random_binary) {
        if (!(fill_fraction > 0.0 && fill_fraction < 1.0)) {
            throw ConfigError("random-binary fill fraction must lie in (0, 1)");
        }
    } else {
        const auto pixels = static_cast<std::uint64_t>(grid.size());
        if (!std::has_single_bit(pixels)) {
            throw ConfigError("hadamard ensemble needs a power-of-two pixel count");
        }
        if (static_cast<std::uint64_t>(count) > pixels) {
            throw ConfigError("hadamard ensemble count exceeds the pixel count");
        }
    }
}

void fill_pattern(const EnsembleSpec& spec, std::int64_t j, std::span<std::uint8_t> out) {
    const std::size_t n = spec.grid.size();
    if (spec.kind == EnsembleKind::hadamard) {
        // Sylvester ordering: H[j][i] = (-1)^popcount(j & i), mapped to {0, 1}.
        const auto row = static_cast<std::uint64_t>(j);
        for (std::size_t i = 0; i < n; ++i) out[i] = (std::popcount(row & i) & 1) ? 0 : 1;
        return;
    }
    const std::uint64_t key = derive_key(spec.seed, Stream::pattern, static_cast<std::uint64_t>(j));
    const double p = spec.fill_fraction;
    for (std::size_t i = 0; i < n; ++i) out[i] = to_unit(counter_bits(key, i)) < p ? 1 : 0;
}

Pattern generate_pattern(const EnsembleSpec& spec, std::int64_t j) {
    spec.validate();
    if (j < 0 || j >= spec.count) {
        throw UsageError("pattern index " + std::to_string(j) + " outside [0, " + std::to_string(spec.count) + ")");
    }
    Pattern pattern{Field<std::uint8_t>(spec.grid), j};
    fill_pattern(spec, j, pattern.values.values());
    return pattern;
}

namespace {

constexpr std::int64_t kBlock = 256;

std::size_t block_count(std::int64_t count) { return static_cast<std::size_t>((count + kBlock - 1) / kBlock); }

}  // namespace

double ensemble_autocorrelation(const EnsembleSpec& spec, int lag_x, int lag_y, unsigned workers) {
    spec.validate();
    const Grid2D& grid = spec.grid;
    if (std::abs(lag_x) >= grid.nx() || std::abs(lag_y) >= grid.ny()) {
        throw UsageError("lag outside the grid");
    }
    const std::size_t n = grid.size();
    const std::size_t blocks = block_count(spec.count);

    // Pass 1: integer on-counts per pixel give the exact ensemble mean.
    std::vector<std::vector<std::int64_t>> partial_counts(blocks);
    parallel_blocks(blocks, workers, [&](std::size_t b) {
        std::vector<std::int64_t> counts(n, 0);
        std::vector<std::uint8_t> pattern(n);
        const std::int64_t end = std::min(spec.count, static_cast<std::int64_t>(b + 1) * kBlock);
        for (std::int64_t j = static_cast<std::int64_t>(b) * kBlock; j < end; ++j) {
            fill_pattern(spec, j, pattern);
            for (std::size_t i = 0; i < n; ++i) counts[i] += pattern[i];
        }
        partial_counts[b] = std::move(counts);
    });
    std::vector<std::int64_t> counts(n, 0);
    for (const auto& part : partial_counts)
        for (std::size_t i = 0; i < n; ++i) counts[i] += part[i];
    std::vector<double> mean(n);
    for (std::size_t i = 0; i < n; ++i) mean[i] = static_cast<double>(counts[i]) / static_cast<double>(spec.count);

    // Partner pixel index for each pixel under the periodic lag.
    std::vector<std::size_t> partner(n);
    for (int y = 0; y < grid.ny(); ++y)
        for (int x = 0; x < grid.nx(); ++x)
            partner[grid.index(x, y)] = grid.index(wrap_index(x + lag_x, grid.nx()), wrap_index(y + lag_y, grid.ny()));

    // Pass 2: fluctuation products.
    std::vector<double> partial_sums(blocks, 0.0);
    parallel_blocks(blocks, workers, [&](std::size_t b) {
        std::vector<std::uint8_t> pattern(n);
        std::vector<double> delta(n);
        double acc = 0.0;
        const std::int64_t end = std::min(spec.count, static_cast<std::int64_t>(b + 1) * kBlock);
        for (std::int64_t j = static_cast<std::int64_t>(b) * kBlock; j < end; ++j) {
            fill_pattern(spec, j, pattern);
            for (std::size_t i = 0; i < n; ++i) delta[i] = pattern[i] - mean[i];
            double local = 0.0;
            for (std::size_t i = 0; i < n; ++i) local += delta[i] * delta[partner[i]];
            acc += local;
        }
        partial_sums[b] = acc;
    });
    double total = 0.0;
    for (double s : partial_sums) total += s;
    return total / (static_cast<double>(spec.count) * static_cast<double>(n));
}

AutocorrelationAccumulator::AutocorrelationAccumulator(const Grid2D& grid)
    : grid_(grid), power_(grid.size(), 0.0), on_counts_(grid.size(), 0), scratch_(grid.size()) {}

void AutocorrelationAccumulator::add(std::span<const std::uint8_t> pattern) {
    for (std::size_t i = 0; i < scratch_.size(); ++i) {
        scratch_[i] = Complex(pattern[i], 0.0);
        on_counts_[i] += pattern[i];
    }
    fft2_inplace(scratch_, grid_.nx(), grid_.ny());
    for (std::size_t i = 0; i < scratch_.size(); ++i) power_[i] += std::norm(scratch_[i]);
    ++count_;
}

RealImage AutocorrelationAccumulator::lag_map() const {
    if (count_ == 0) throw UsageError("autocorrelation of an empty ensemble");
    const double j = static_cast<double>(count_);
    const double n = static_cast<double>(grid_.size());

    // sum_j sum_r M_j(r) M_j(r + l) = sqrt(n) * ifft(sum_j |fft(M_j)|^2)
    ComplexField raw(grid_);
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = Complex(power_[i], 0.0);
    const RealImage second = real_part(ifft2(raw));

    RealImage mean(grid_);
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] = static_cast<double>(on_counts_[i]) / j;
    const RealImage mean_ac = circ_correlate(mean, mean);

    RealImage out(grid_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (std::sqrt(n) * second[i] / j - mean_ac[i]) / n;
    return out;
}

}  // namespace ghost
