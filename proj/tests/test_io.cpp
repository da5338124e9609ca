#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ghost/io.hpp"
#include "ghost/run_config.hpp"
#include "oracles.hpp"

using namespace ghost;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "ghost_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

void truncate_file(const fs::path& p, std::uintmax_t size) { fs::resize_file(p, size); }

template <class E>
std::string message_of(auto&& f) {
    try {
        f();
    } catch (const E& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Doubles, ShortestRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 5.32e-7, -2.5e300, 4.9e-324, 0.0}) EXPECT_EQ(parse_double(format_double(v), "x"), v);
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_THROW(parse_double("1.0abc", "k"), ConfigError);
    EXPECT_THROW(parse_double("", "k"), ConfigError);
}

TEST(Arrays, BitExactRoundTrip) {
    const Grid2D g(7, 5, 3.3e-6);
    const RealImage img = oracle::random_image(g, 4, -1e3, 1e3);
    const fs::path p = scratch("img.f64");
    write_image(p, img, ArrayKind::correlation);
    EXPECT_EQ(fs::file_size(p), (8 + 35) * 8u);
    const ArrayFile a = read_array(p);
    EXPECT_EQ(a.grid, g);
    EXPECT_EQ(a.kind, ArrayKind::correlation);
    EXPECT_FALSE(a.centered);
    EXPECT_EQ(read_image(p), img);

    const MagnitudeSpectrum s(g, std::vector<double>(img.size(), 0.25), true);
    write_spectrum(scratch("s.f64"), s);
    const MagnitudeSpectrum back = read_spectrum(scratch("s.f64"));
    EXPECT_TRUE(back.centered());
    EXPECT_EQ(std::vector<double>(back.values().begin(), back.values().end()),
              std::vector<double>(s.values().begin(), s.values().end()));
    EXPECT_THROW(read_spectrum(p), DataError);  // wrong kind
}

TEST(Arrays, CorruptFilesReportOffsets) {
    const Grid2D g(4, 4, 1.0);
    const fs::path p = scratch("bad.f64");
    write_image(p, RealImage(g), ArrayKind::image);
    {
        std::fstream f(p, std::ios::in | std::ios::out | std::ios::binary);
        const double junk = 1.0;
        f.write(reinterpret_cast<const char*>(&junk), 8);
    }
    EXPECT_NE(message_of<DataError>([&] { read_array(p); }).find("byte offset 0)"), std::string::npos);
    write_image(p, RealImage(g), ArrayKind::image);
    truncate_file(p, 8 * 8 + 5 * 8 + 3);
    EXPECT_NE(message_of<DataError>([&] { read_array(p); }).find("byte offset 107"), std::string::npos);
    EXPECT_THROW(read_array(scratch("missing.f64")), IoError);
}

TEST(Pgm, SixteenBitWithScaleSidecar) {
    const Grid2D g(5, 3, 1.0);
    RealImage img(g);
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = -2.0 + static_cast<double>(i);
    const fs::path p = scratch("img.pgm");
    write_pgm(p, img);
    const PgmImage pg = read_pgm(p);
    EXPECT_EQ(pg.width, 5);
    EXPECT_EQ(pg.height, 3);
    EXPECT_EQ(pg.samples.front(), 0);
    EXPECT_EQ(pg.samples.back(), 65535);
    EXPECT_EQ(pg.samples[7], static_cast<std::uint16_t>(std::lround(7.0 / 14.0 * 65535)));
    EXPECT_EQ(read_text(p.string() + ".scale.txt"), "min = -2\nmax = 12\n");
    const std::string head = read_text(p).substr(0, 2);
    EXPECT_EQ(head, "P5");
}

TEST(Buckets, ExactRoundTripAndMalformedRows) {
    const std::vector<double> b{1e-9, 3.14159, 0.0, 2.0 / 3.0};
    const fs::path p = scratch("b.csv");
    write_buckets(p, b);
    EXPECT_EQ(read_buckets(p), b);
    write_text(p, "j,value\n0,1\n2,3\n");
    EXPECT_THROW(read_buckets(p), DataError);
    write_text(p, "j,value\n0,nan\n");
    EXPECT_THROW(read_buckets(p), DataError);
    write_text(p, "index,value\n0,1\n");
    EXPECT_THROW(read_buckets(p), DataError);
    write_text(p, "j,value\n0,1,2\n");
    EXPECT_THROW(read_buckets(p), DataError);
}

TEST(Config, ParseErrorsNameTheLine) {
    EXPECT_EQ(parse_config_text("# c\noptical.wavelength = 5e-7\n\n", "f").at("optical.wavelength"), "5e-7");
    EXPECT_NE(message_of<ConfigError>([] { parse_config_text("\nbogus.key = 1\n", "f.cfg"); }).find("f.cfg:2"),
              std::string::npos);
    EXPECT_THROW(parse_config_text("grid.nx = 1\ngrid.nx = 2\n", "f"), ConfigError);
    EXPECT_THROW(parse_config_text("grid.nx\n", "f"), ConfigError);
    RunConfig c;
    EXPECT_THROW(apply_config(c, {{"ensemble.kind", "sobol"}}), ConfigError);
    EXPECT_THROW(apply_config(c, {{"grid.nx", "many"}}), ConfigError);
}

TEST(Config, FormatRoundTripsEveryKey) {
    RunConfig c;
    apply_config(c, {{"optical.wavelength", "5.32e-7"},
                     {"grid.nx", "48"},
                     {"ensemble.count", "1000"},
                     {"noise.kind", "poisson"},
                     {"compensation.mode", "compensated"},
                     {"schedule.restarts", "3"},
                     {"resolution.separations", "2e-5,3e-5"}});
    EXPECT_EQ(c.ensemble.grid.nx(), 48);
    EXPECT_EQ(c.separations, (std::vector<double>{2e-5, 3e-5}));
    RunConfig back;
    apply_config(back, parse_config_text(format_config(c), "round"));
    EXPECT_EQ(back, c);
    EXPECT_EQ(to_key_values(c).size(), config_keys().size());
    EXPECT_TRUE(is_acquisition_key("ensemble.seed"));
    EXPECT_FALSE(is_acquisition_key("schedule.restarts"));
}
