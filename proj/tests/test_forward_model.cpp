#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ghost/forward_model.hpp"
#include "ghost/objects.hpp"
#include "oracles.hpp"

using namespace ghost;

namespace {

OpticalConfig paper_config(OpticalCase c = OpticalCase::scattering) {
    OpticalConfig cfg;
    cfg.wavelength = 0.532e-6;
    cfg.optical_case = c;
    return cfg;
}

PSF random_psf(const Grid2D& g, std::uint64_t seed) {
    RealImage s = oracle::random_image(g, seed);
    const double t = sum(s.values());
    for (auto& v : s.values()) v /= t;
    // Renormalize once more so the unit-sum check sees exactly 1 within 1e-12.
    return PSF(std::move(s));
}

}  // namespace

TEST(OpticalConfig, RequiresWavelengthAndPositiveLengths) {
    OpticalConfig c;
    EXPECT_THROW(c.validate(), ConfigError);
    c = paper_config();
    EXPECT_NO_THROW(c.validate());
    c.z_o = -1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = paper_config();
    c.isoplanatic = false;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(OpticalConfig, PaperGeometryCutoffAndResolution) {
    const OpticalConfig c = paper_config();
    EXPECT_NEAR(c.cutoff(), 3.76e4, 0.01e4);
    EXPECT_NEAR(c.resolution(), 26.6e-6, 0.1e-6);
}

TEST(OpticalConfig, CutoffAboveNyquistNamesParameters) {
    OpticalConfig c = paper_config();
    c.aperture_diameter = 0.05;
    try {
        c.validate();
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("optical.aperture-diameter"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("optical.z-o"), std::string::npos);
    }
}

TEST(Psf, RejectsNonUnitSumAndNegative) {
    const Grid2D g(4, 4, 1.0);
    EXPECT_THROW(PSF(RealImage(g)), DataError);
    RealImage neg(g);
    neg[0] = 2.0;
    neg[1] = -1.0;
    EXPECT_THROW(PSF(std::move(neg)), DataError);
}

TEST(LensPsf, OtfEqualsPupilAutocorrelation) {
    const OpticalConfig c = paper_config(OpticalCase::lens_only);
    const PSF psf = lens_psf(c);
    EXPECT_NEAR(sum(psf.image().values()), 1.0, 1e-12);
    const MagnitudeSpectrum m = mtf(psf);
    const RealImage pupil = pupil_indicator(c.object_grid, 0.5 * c.cutoff());
    const double n0 = sum(pupil.values());
    const Grid2D& g = c.object_grid;
    for (int ky = -32; ky < 32; ++ky)
        for (int kx = -32; kx < 32; ++kx) {
            double overlap = 0;
            for (int y = 0; y < 64; ++y)
                for (int x = 0; x < 64; ++x) overlap += pupil.at(x, y) * pupil.periodic(x + kx, y + ky);
            ASSERT_NEAR(m.at_bin(kx, ky), overlap / n0, 1e-10);
            const double u = std::hypot(kx * g.df_x(), ky * g.df_y());
            if (u >= 2.0 * c.cutoff()) ASSERT_NEAR(m.at_bin(kx, ky), 0.0, 1e-12);
        }
    EXPECT_NEAR(m.at_bin(0, 0), 1.0, 1e-12);
}

TEST(LensPsf, PointPupilGivesDeltaOtf) {
    OpticalConfig c = paper_config(OpticalCase::lens_only);
    c.aperture_diameter = 1e-7;
    const MagnitudeSpectrum m = mtf(lens_psf(c));
    EXPECT_NEAR(m.at_bin(0, 0), 1.0, 1e-12);
    for (int k = 1; k < 32; ++k) EXPECT_NEAR(m.at_bin(k, 0), 0.0, 1e-12);
}

TEST(SpecklePsf, CaseChecksAndDeterminism) {
    EXPECT_THROW(speckle_psf(paper_config(OpticalCase::lens_only), 1), ConfigError);
    EXPECT_THROW(lens_psf(paper_config()), ConfigError);
    const OpticalConfig c = paper_config();
    EXPECT_EQ(speckle_psf(c, 5).image(), speckle_psf(c, 5).image());
    EXPECT_NE(speckle_psf(c, 5).image(), speckle_psf(c, 6).image());
    EXPECT_NEAR(sum(speckle_psf(c, 5).image().values()), 1.0, 1e-12);
}

TEST(SpecklePsf, MtfVanishesOutsideCutoff) {
    const OpticalConfig c = paper_config();
    const MagnitudeSpectrum m = mtf(speckle_psf(c, 3));
    const Grid2D& g = c.object_grid;
    const double r = c.cutoff();
    for (int ky = -32; ky < 32; ++ky)
        for (int kx = -32; kx < 32; ++kx)
            if (std::hypot(kx * g.df_x(), ky * g.df_y()) >= r) ASSERT_LT(m.at_bin(kx, ky), 1e-12);
}

TEST(SpecklePsf, GrainWidthFollowsLambdaZOverD) {
    // FWHM of the mean-removed intensity autocorrelation peak along x.
    const OpticalConfig c = paper_config();
    const Grid2D& g = c.object_grid;
    double fwhm_sum = 0;
    const int seeds = 32;
    for (int s = 0; s < seeds; ++s) {
        RealImage psf = speckle_psf(c, static_cast<std::uint64_t>(s + 1)).image();
        const double mean = sum(psf.values()) / static_cast<double>(psf.size());
        for (auto& v : psf.values()) v -= mean;
        const RealImage ac = circ_correlate(psf, psf);
        const double half = 0.5 * ac.at(0, 0);
        double hw = 0;
        for (int k = 1; k < 32; ++k) {
            const double a = 0.5 * (ac.periodic(k - 1, 0) + ac.periodic(-(k - 1), 0));
            const double b = 0.5 * (ac.periodic(k, 0) + ac.periodic(-k, 0));
            if (b <= half) {
                hw = (k - 1) + (a - half) / (a - b);
                break;
            }
        }
        fwhm_sum += 2.0 * hw * g.pitch();
    }
    EXPECT_NEAR(fwhm_sum / seeds / c.resolution(), 1.0, 0.25);
}

TEST(SpecklePsf, FullApertureIntensityIsNegativeExponential) {
    const Grid2D g(64, 64, 1.0);
    RealImage s = speckle_intensity(g, 64.0, 11);
    const double mean = sum(s.values()) / static_cast<double>(s.size());
    std::vector<double> v(s.values().begin(), s.values().end());
    for (auto& x : v) x /= mean;
    std::sort(v.begin(), v.end());
    double ks = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double cdf = 1.0 - std::exp(-v[i]);
        ks = std::max({ks, std::abs(cdf - double(i) / v.size()), std::abs(cdf - double(i + 1) / v.size())});
    }
    EXPECT_LT(ks, 0.05);
}

TEST(Illuminate, SiftingAndIdentityKernel) {
    const Grid2D g(8, 8, 1.0);
    EnsembleSpec spec;
    spec.grid = g;
    spec.count = 2;
    const Pattern p = generate_pattern(spec, 1);
    const PSF delta = PSF::delta(g);
    const RealImage lit = illuminate(p, delta);
    for (std::size_t i = 0; i < lit.size(); ++i) EXPECT_NEAR(lit[i], p.values[i], 1e-14);

    Pattern impulse{Field<std::uint8_t>(g), 0};
    impulse.values.at(0, 0) = 1;
    const PSF psf = random_psf(g, 4);
    EXPECT_LT(oracle::max_abs_diff(illuminate(impulse, psf).values(), psf.image().values()), 1e-14);

    Pattern zero{Field<std::uint8_t>(g), 0};
    const RealImage dark = illuminate(zero, psf);
    for (double v : dark.values()) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(Bucket, ClosedFormsAndNegativeObject) {
    const Grid2D g(8, 8, 2.0);
    EnsembleSpec spec;
    spec.grid = g;
    spec.count = 4;
    const Pattern p = generate_pattern(spec, 2);
    const PSF psf = random_psf(g, 9);
    RealImage ones(g);
    for (auto& v : ones.values()) v = 1.0;
    double on = 0;
    for (auto v : p.values.values()) on += v;
    EXPECT_NEAR(bucket(ones, illuminate(p, psf)), 4.0 * on, 1e-12);

    RealImage point(g);
    point.at(3, 5) = 1.0;
    EXPECT_NEAR(bucket(point, illuminate(p, PSF::delta(g))), 4.0 * p.values.at(3, 5), 1e-14);

    RealImage neg(g);
    neg[0] = -1.0;
    EXPECT_THROW(bucket(neg, ones), DataError);
}

TEST(Bucket, TwoFormsAgreeOnRandomTriples) {
    // First form sums O * (M conv S) directly; second sums M * g with g from
    // a direct-sum convolution with the reflected kernel.
    const Grid2D g(16, 16, 7.4e-6);
    for (int t = 0; t < 20; ++t) {
        const RealImage o = oracle::random_image(g, 100 + t);
        const PSF s = random_psf(g, 200 + t);
        EnsembleSpec spec;
        spec.grid = g;
        spec.count = 1;
        spec.seed = 300 + t;
        const Pattern m = generate_pattern(spec, 0);
        std::vector<double> mv(m.values.size());
        for (std::size_t i = 0; i < mv.size(); ++i) mv[i] = m.values[i];
        const auto lit = oracle::convolve(mv, s.image().vector(), 16, 16);
        double first = 0;
        for (std::size_t i = 0; i < lit.size(); ++i) first += o[i] * lit[i];
        first *= g.pitch() * g.pitch();

        const RealImage resp = source_plane_response(o, s);
        double second = 0;
        for (std::size_t i = 0; i < mv.size(); ++i) second += mv[i] * resp[i];
        EXPECT_NEAR(second, first, 1e-10 * std::abs(first));
        EXPECT_NEAR(bucket(o, illuminate(m, s)), first, 1e-10 * std::abs(first));
    }
}

TEST(Bucket, LinearInObjectAndPattern) {
    const Grid2D g(8, 8, 1.0);
    const PSF s = random_psf(g, 1);
    const RealImage a = oracle::random_image(g, 2), b = oracle::random_image(g, 3);
    RealImage ab(g);
    for (std::size_t i = 0; i < ab.size(); ++i) ab[i] = 2.0 * a[i] + 0.5 * b[i];
    RealImage lit = oracle::random_image(g, 4);
    EXPECT_NEAR(bucket(ab, lit), 2.0 * bucket(a, lit) + 0.5 * bucket(b, lit), 1e-12);
}

TEST(Simulate, ValidatesSupportAndGrids) {
    const OpticalConfig c = paper_config();
    EnsembleSpec e;
    e.count = 8;
    RealImage edge(c.object_grid);
    edge.at(0, 0) = 1.0;
    EXPECT_THROW(simulate(edge, c, e, {}, 1), ConfigError);
    EnsembleSpec wrong = e;
    wrong.grid = Grid2D(32, 32, 7.4e-6);
    EXPECT_THROW(simulate(letter_object(c.object_grid), c, wrong, {}, 1), ConfigError);
    EnsembleSpec empty = e;
    empty.count = 0;
    EXPECT_THROW(simulate(letter_object(c.object_grid), c, empty, {}, 1), UsageError);
}

TEST(Simulate, SingleImpulsePatternEqualsBucketOfPsf) {
    OpticalConfig c = paper_config();
    c.object_grid = Grid2D(16, 16, 7.4e-6);
    EnsembleSpec e;
    e.kind = EnsembleKind::hadamard;
    e.grid = c.object_grid;
    e.count = 1;  // Hadamard row 0: all ones
    const RealImage obj = rectangle_object(c.object_grid, 3, 2);
    const MeasurementSet ms = simulate(obj, c, e, {}, 7);
    ASSERT_EQ(ms.buckets.size(), 1u);
    const PSF psf = speckle_psf(c, 7);
    const double expected = bucket(obj, illuminate(generate_pattern(e, 0), psf));
    EXPECT_NEAR(ms.buckets[0], expected, 1e-12 * expected);
}

TEST(Simulate, MatchesPerPatternBucketsAndIgnoresWorkers) {
    const OpticalConfig c = paper_config();
    EnsembleSpec e;
    e.count = 2500;
    const RealImage obj = letter_object(c.object_grid);
    const MeasurementSet a = simulate(obj, c, e, {}, 3, 1);
    const MeasurementSet b = simulate(obj, c, e, {}, 3, 4);
    EXPECT_EQ(a.buckets, b.buckets);
    const PSF psf = speckle_psf(c, 3);
    for (std::int64_t j : {0, 1, 1023, 1024, 2499}) {
        const double ref = bucket(obj, illuminate(generate_pattern(e, j), psf));
        EXPECT_NEAR(a.buckets[static_cast<std::size_t>(j)], ref, 1e-10 * ref);
    }
    for (double v : a.buckets) EXPECT_GE(v, 0.0);
}

TEST(Noise, GaussianSnrWithinOneDecibel) {
    const OpticalConfig c = paper_config();
    EnsembleSpec e;
    e.count = 10000;
    const RealImage obj = letter_object(c.object_grid);
    const MeasurementSet clean = simulate(obj, c, e, {}, 2);
    NoiseModel n;
    n.kind = NoiseKind::gaussian;
    n.snr_db = 20.0;
    const MeasurementSet noisy = simulate(obj, c, e, n, 2);
    double mean = 0;
    for (double v : clean.buckets) mean += v;
    mean /= clean.buckets.size();
    double sig = 0, err = 0;
    for (std::size_t j = 0; j < clean.buckets.size(); ++j) {
        sig += (clean.buckets[j] - mean) * (clean.buckets[j] - mean);
        err += (noisy.buckets[j] - clean.buckets[j]) * (noisy.buckets[j] - clean.buckets[j]);
    }
    EXPECT_NEAR(10.0 * std::log10(sig / err), 20.0, 1.0);
}

TEST(Noise, PoissonKeepsBucketsNonnegativeAndMeanScale) {
    std::vector<double> b(5000, 2e-9);
    NoiseModel n;
    n.kind = NoiseKind::poisson;
    n.photons = 400;
    apply_noise(b, n, 12);
    double mean = 0, var = 0;
    for (double v : b) {
        EXPECT_GE(v, 0.0);
        mean += v;
    }
    mean /= b.size();
    for (double v : b) var += (v - mean) * (v - mean);
    var /= b.size();
    EXPECT_NEAR(mean / 2e-9, 1.0, 0.01);
    // Var(counts) = photons, so relative variance is 1 / photons.
    EXPECT_NEAR(var / (mean * mean) * 400.0, 1.0, 0.1);
    NoiseModel bad;
    bad.kind = NoiseKind::poisson;
    bad.photons = 0;
    EXPECT_THROW(bad.validate(), ConfigError);
}
