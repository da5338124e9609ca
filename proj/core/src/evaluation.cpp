#include "ghost/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "ghost/objects.hpp"

namespace ghost {

namespace {

std::vector<double> centered_values(const RealImage& image, double& norm) {
    const double mean = sum(image.values()) / static_cast<double>(image.size());
    std::vector<double> out(image.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = image[i] - mean;
        ss += out[i] * out[i];
    }
    norm = std::sqrt(ss);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("correlation undefined for a zero-variance image");
    return out;
}

}  // namespace

double pearson(const RealImage& a, const RealImage& b) {
    require_same_grid(a.grid(), b.grid(), "pearson");
    double na = 0.0, nb = 0.0;
    const auto ca = centered_values(a, na);
    const auto cb = centered_values(b, nb);
    double dot = 0.0;
    for (std::size_t i = 0; i < ca.size(); ++i) dot += ca[i] * cb[i];
    return std::clamp(dot / (na * nb), -1.0, 1.0);
}

AlignmentResult align_and_score(const RealImage& recon, const RealImage& truth) {
    require_same_grid(recon.grid(), truth.grid(), "align_and_score");
    const Grid2D& grid = truth.grid();
    double nr = 0.0, nt = 0.0;
    centered_values(recon, nr);
    centered_values(truth, nt);

    // corr(l) = sum_r a(r) t(r + l): the score of circ_shift(a, l).
    struct Candidate {
        bool flipped;
        int dx, dy;
        double score;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(2 * grid.size());
    double best = -2.0;
    for (const bool flipped : {false, true}) {
        const RealImage a = flipped ? point_reflect(recon) : recon;
        const RealImage corr = circ_correlate(a, truth);
        const double mean_a = sum(a.values()) / static_cast<double>(a.size());
        const double total_t = sum(truth.values());
        for (int y = 0; y < grid.ny(); ++y) {
            for (int x = 0; x < grid.nx(); ++x) {
                const double score = (corr.at(x, y) - mean_a * total_t) / (nr * nt);
                candidates.push_back({flipped, signed_bin(x, grid.nx()), signed_bin(y, grid.ny()), score});
                best = std::max(best, score);
            }
        }
    }
    const Candidate* pick = nullptr;
    for (const auto& c : candidates) {
        if (c.score < best - 1e-12) continue;
        if (!pick || std::tie(c.flipped, c.dx, c.dy) < std::tie(pick->flipped, pick->dx, pick->dy)) pick = &c;
    }
    RealImage aligned = circ_shift(pick->flipped ? point_reflect(recon) : recon, pick->dx, pick->dy);
    const double score = pearson(aligned, truth);
    return {pick->dx, pick->dy, pick->flipped, score, std::move(aligned)};
}

double two_point_contrast(const RealImage& aligned, int separation_px) {
    const Grid2D& grid = aligned.grid();
    const int y = grid.ny() / 2;
    const int x1 = grid.nx() / 2 - separation_px / 2;
    const int x2 = x1 + separation_px;
    auto peak = [&](int cx) {
        double m = aligned.periodic(cx, y);
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) m = std::max(m, aligned.periodic(cx + dx, y + dy));
        return m;
    };
    const double lower = std::min(peak(x1), peak(x2));
    if (!(lower > 0.0)) return 0.0;
    const int lo = (x1 + x2) / 2;
    const double mid = (x1 + x2) % 2 == 0 ? aligned.at(lo, y) : 0.5 * (aligned.at(lo, y) + aligned.at(lo + 1, y));
    return std::clamp(1.0 - mid / lower, 0.0, 1.0);
}

ProbeResult resolution_probe(const OpticalConfig& config, double separation, const PipelineParams& params) {
    config.validate();
    const Grid2D& grid = config.object_grid;
    if (!(separation >= 2.0 * grid.pitch() * (1.0 - 1e-12))) {
        throw UsageError("probe separation must be at least two grid pitches");
    }
    const int px = static_cast<int>(std::lround(separation / grid.pitch()));
    const RealImage object = two_points_object(grid, px);
    EnsembleSpec ensemble = params.ensemble;
    ensemble.grid = grid;
    const MeasurementSet ms = simulate(object, config, ensemble, params.noise, params.psf_seed, params.workers);
    const ReconstructionOutput out = reconstruct(ms, params.reconstruction, params.workers);
    const AlignmentResult aligned = align_and_score(out.result.image, object);
    const double contrast = two_point_contrast(aligned.aligned, px);
    return {separation, px, contrast >= kResolvedDip, contrast, aligned.pearson};
}

}  // namespace ghost
