#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ghost/grid.hpp"

namespace ghost {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Parses a whole string as a double; ConfigError naming `what` otherwise.
double parse_double(const std::string& text, const std::string& what);

// ---------------------------------------------------------------------------
// Raw little-endian float64 arrays.
//
// Layout: 8 header doubles followed by nx*ny sample doubles, row-major.
//   [0] magic 0x4748535421 (as a double)   [1] format version (1)
//   [2] nx   [3] ny   [4] pitch in meters
//   [5] centered flag (0/1)   [6] kind tag (ArrayKind)   [7] reserved (0)

enum class ArrayKind : int { image = 1, correlation = 2, spectrum = 3, psf = 4, object = 5 };

inline constexpr double kArrayMagic = 0x4748535421;  // "GHST!"
inline constexpr int kArrayVersion = 1;

struct ArrayFile {
    Grid2D grid;
    bool centered = false;
    ArrayKind kind = ArrayKind::image;
    std::vector<double> values;
};

void write_array(const std::filesystem::path& path, const ArrayFile& array);
ArrayFile read_array(const std::filesystem::path& path);

void write_image(const std::filesystem::path& path, const RealImage& image, ArrayKind kind);
void write_spectrum(const std::filesystem::path& path, const MagnitudeSpectrum& spectrum);
RealImage read_image(const std::filesystem::path& path);
MagnitudeSpectrum read_spectrum(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// 16-bit binary PGM (P5, maxval 65535, big-endian samples). Values are
// min-max scaled; `<path>.scale.txt` records min and max so that
// value = min + sample / 65535 * (max - min).

void write_pgm(const std::filesystem::path& path, const RealImage& image);

struct PgmImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> samples;
};
PgmImage read_pgm(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Buckets as CSV with header `j,value`, one row per pattern in order.

void write_buckets(const std::filesystem::path& path, const std::vector<double>& buckets);
std::vector<double> read_buckets(const std::filesystem::path& path);

/// Writes `content` exactly, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace ghost
