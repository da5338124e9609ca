#include <gtest/gtest.h>

#include "ghost/grid.hpp"
#include "oracles.hpp"

using namespace ghost;

TEST(Grid, RejectsDegenerateShapes) {
    EXPECT_THROW(Grid2D(1, 8, 1.0), ConfigError);
    EXPECT_THROW(Grid2D(8, 8, 0.0), ConfigError);
    EXPECT_THROW(Grid2D(8, 8, -1.0), ConfigError);
    EXPECT_NO_THROW(Grid2D(2, 2, 1e-6));
}

TEST(Grid, FrequencySpacingAndNyquist) {
    const Grid2D g(64, 32, 7.4e-6);
    EXPECT_DOUBLE_EQ(g.df_x(), 1.0 / (64 * 7.4e-6));
    EXPECT_DOUBLE_EQ(g.df_y(), 1.0 / (32 * 7.4e-6));
    EXPECT_DOUBLE_EQ(g.nyquist(), 0.5 / 7.4e-6);
}

TEST(Grid, BinIndexHelpersRoundTrip) {
    for (int n : {5, 6, 64}) {
        for (int k = 0; k < n; ++k) {
            EXPECT_EQ(wrap_index(signed_bin(k, n), n), k);
            EXPECT_EQ(uncentered_position(centered_position(k, n), n), k);
        }
        EXPECT_EQ(centered_position(0, n), n / 2);
    }
    EXPECT_EQ(signed_bin(63, 64), -1);
    EXPECT_EQ(signed_bin(32, 64), -32);
}

TEST(Fft, MatchesDirectDftOnOddAndEvenGrids) {
    for (auto [nx, ny] : {std::pair{8, 6}, std::pair{5, 7}}) {
        const Grid2D g(nx, ny, 1.0);
        std::mt19937_64 rng(nx * 31 + ny);
        std::normal_distribution<double> d;
        ComplexField f(g);
        for (auto& v : f.values()) v = Complex(d(rng), d(rng));
        const auto fast = fft2(f);
        const auto slow = oracle::dft2(f.vector(), nx, ny, -1);
        const auto back = ifft2(fast);
        for (std::size_t i = 0; i < f.size(); ++i) {
            EXPECT_NEAR(std::abs(fast[i] - slow[i]), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(back[i] - f[i]), 0.0, 1e-12);
        }
    }
}

TEST(Fft, ParsevalHoldsForUnitaryTransform) {
    const Grid2D g(16, 16, 1.0);
    const RealImage img = oracle::random_image(g, 3, -1.0, 1.0);
    const auto spec = fft2(img);
    double a = 0, b = 0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        a += img[i] * img[i];
        b += std::norm(spec[i]);
    }
    EXPECT_NEAR(a, b, 1e-10 * a);
}

TEST(Fft, RejectsNonFiniteInput) {
    const Grid2D g(4, 4, 1.0);
    RealImage img(g);
    img[5] = std::nan("");
    EXPECT_THROW(fft2(img), DataError);
}

TEST(Convolution, MatchesDirectPeriodicSum) {
    const Grid2D g(9, 8, 1.0);
    const RealImage a = oracle::random_image(g, 1), b = oracle::random_image(g, 2);
    const auto fast = circ_convolve(a, b);
    const auto slow = oracle::convolve(a.vector(), b.vector(), 9, 8);
    EXPECT_LT(oracle::max_abs_diff(fast.values(), slow), 1e-12);
}

TEST(Convolution, CorrelationMatchesDefinition) {
    const Grid2D g(6, 7, 1.0);
    const RealImage a = oracle::random_image(g, 4), b = oracle::random_image(g, 5);
    const auto c = circ_correlate(a, b);
    for (int ly = 0; ly < 7; ++ly)
        for (int lx = 0; lx < 6; ++lx) {
            double acc = 0;
            for (int y = 0; y < 7; ++y)
                for (int x = 0; x < 6; ++x) acc += a.at(x, y) * b.periodic(x + lx, y + ly);
            EXPECT_NEAR(c.at(lx, ly), acc, 1e-12);
        }
}

TEST(Geometry, ShiftAndReflect) {
    const Grid2D g(5, 4, 1.0);
    const RealImage a = oracle::random_image(g, 6);
    const RealImage s = circ_shift(a, 2, -1);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 5; ++x) EXPECT_EQ(s.periodic(x + 2, y - 1), a.at(x, y));
    const RealImage r = point_reflect(a);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 5; ++x) EXPECT_EQ(r.at(x, y), a.periodic(-x, -y));
    EXPECT_EQ(point_reflect(r), a);
}

TEST(Spectrum, RejectsNegativeAndLayoutRoundTrips) {
    const Grid2D g(6, 5, 1.0);
    EXPECT_THROW(MagnitudeSpectrum(g, std::vector<double>(30, -1.0), false), DataError);
    std::vector<double> v(30);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
    const MagnitudeSpectrum s(g, v, false);
    const auto c = s.to_centered();
    EXPECT_EQ(c.to_uncentered().vector(), v);
    for (int ky = -2; ky <= 2; ++ky)
        for (int kx = -3; kx <= 2; ++kx) EXPECT_EQ(s.at_bin(kx, ky), c.at_bin(kx, ky));
    EXPECT_EQ(c.at(3, 2), s.at(0, 0));
}

TEST(Disk, AutocorrelationEqualsOverlapCount) {
    const Grid2D g(32, 32, 1.0);
    for (double d : {5.0, 8.5, 17.8}) {
        const RealImage disk = disk_indicator(d, g);
        const auto ac = disk_autocorrelation(d, g);
        const double n0 = sum(disk.values());
        for (int ly = -6; ly <= 6; ly += 3)
            for (int lx = -10; lx <= 10; lx += 5) {
                double overlap = 0;
                for (int y = 0; y < 32; ++y)
                    for (int x = 0; x < 32; ++x) overlap += disk.at(x, y) * disk.periodic(x + lx, y + ly);
                EXPECT_DOUBLE_EQ(ac.at_bin(lx, ly), overlap / n0);
            }
        EXPECT_DOUBLE_EQ(ac.at_bin(0, 0), 1.0);
    }
    EXPECT_THROW(disk_indicator(0.0, g), ConfigError);
    EXPECT_THROW(disk_indicator(40.0, g), ConfigError);
}

TEST(Disk, AutocorrelationVanishesBeyondDiameter) {
    const Grid2D g(64, 64, 1.0);
    const double d = 17.8;
    const auto ac = disk_autocorrelation(d, g);
    for (int ky = -32; ky < 32; ++ky)
        for (int kx = -32; kx < 32; ++kx)
            if (std::hypot(kx, ky) >= d) EXPECT_EQ(ac.at_bin(kx, ky), 0.0);
}
