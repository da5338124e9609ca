#include "ghost/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace ghost {

namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little, "raw array I/O assumes a little-endian host");

namespace {

std::string at_offset(const fs::path& path, std::size_t offset) {
    return path.string() + " (byte offset " + std::to_string(offset) + ")";
}

void ensure_parent(const fs::path& path) {
    const fs::path parent = path.parent_path();
    if (parent.empty()) return;
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory " + parent.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

int header_int(double v, const fs::path& path, std::size_t offset, const char* what) {
    if (!(v == std::floor(v)) || v < 0 || v > 1e9) {
        throw DataError(std::string("bad ") + what + " in array header of " + at_offset(path, offset));
    }
    return static_cast<int>(v);
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) throw NumericalError("cannot format number");
    return {buf.data(), end};
}

double parse_double(const std::string& text, const std::string& what) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || end != last || text.empty()) {
        throw ConfigError(what + ": '" + text + "' is not a number");
    }
    return value;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("file not found or unreadable: " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& content) {
    auto out = open_out(path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    finish(out, path);
}

void write_array(const fs::path& path, const ArrayFile& array) {
    if (array.values.size() != array.grid.size()) throw DataError("array data length does not match its grid");
    const std::array<double, 8> header = {kArrayMagic,
                                          static_cast<double>(kArrayVersion),
                                          static_cast<double>(array.grid.nx()),
                                          static_cast<double>(array.grid.ny()),
                                          array.grid.pitch(),
                                          array.centered ? 1.0 : 0.0,
                                          static_cast<double>(static_cast<int>(array.kind)),
                                          0.0};
    auto out = open_out(path);
    out.write(reinterpret_cast<const char*>(header.data()), sizeof(header));
    out.write(reinterpret_cast<const char*>(array.values.data()),
              static_cast<std::streamsize>(array.values.size() * sizeof(double)));
    finish(out, path);
}

ArrayFile read_array(const fs::path& path) {
    const std::string bytes = read_text(path);
    constexpr std::size_t header_bytes = 8 * sizeof(double);
    if (bytes.size() < header_bytes) throw DataError("truncated array header in " + at_offset(path, bytes.size()));
    std::array<double, 8> h{};
    std::memcpy(h.data(), bytes.data(), header_bytes);
    if (h[0] != kArrayMagic) throw DataError("not a raw array file: bad magic in " + at_offset(path, 0));
    if (h[1] != kArrayVersion) throw DataError("unsupported array version in " + at_offset(path, 8));
    const int nx = header_int(h[2], path, 16, "nx");
    const int ny = header_int(h[3], path, 24, "ny");
    if (!(h[4] > 0.0) || !std::isfinite(h[4])) throw DataError("bad pitch in array header of " + at_offset(path, 32));
    if (h[5] != 0.0 && h[5] != 1.0) throw DataError("bad centered flag in " + at_offset(path, 40));
    const int kind = header_int(h[6], path, 48, "kind tag");
    if (kind < 1 || kind > 5) throw DataError("unknown kind tag in " + at_offset(path, 48));
    if (nx < 2 || ny < 2) throw DataError("bad grid size in array header of " + at_offset(path, 16));
    const Grid2D grid(nx, ny, h[4]);
    const std::size_t expected = header_bytes + grid.size() * sizeof(double);
    if (bytes.size() != expected) {
        throw DataError("array payload size mismatch (expected " + std::to_string(expected) + " bytes) in " +
                        at_offset(path, std::min(bytes.size(), expected)));
    }
    std::vector<double> values(grid.size());
    std::memcpy(values.data(), bytes.data() + header_bytes, grid.size() * sizeof(double));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw DataError("non-finite sample in " + at_offset(path, header_bytes + i * sizeof(double)));
        }
    }
    return {grid, h[5] == 1.0, static_cast<ArrayKind>(kind), std::move(values)};
}

void write_image(const fs::path& path, const RealImage& image, ArrayKind kind) {
    write_array(path, {image.grid(), false, kind, image.vector()});
}

void write_spectrum(const fs::path& path, const MagnitudeSpectrum& spectrum) {
    write_array(path, {spectrum.grid(), spectrum.centered(), ArrayKind::spectrum, spectrum.vector()});
}

RealImage read_image(const fs::path& path) {
    ArrayFile a = read_array(path);
    if (a.kind == ArrayKind::spectrum) throw DataError(path.string() + " holds a spectrum, expected an image");
    return {a.grid, std::move(a.values)};
}

MagnitudeSpectrum read_spectrum(const fs::path& path) {
    ArrayFile a = read_array(path);
    if (a.kind != ArrayKind::spectrum) throw DataError(path.string() + " does not hold a spectrum");
    return {a.grid, std::move(a.values), a.centered};
}

void write_pgm(const fs::path& path, const RealImage& image) {
    const auto [lo_it, hi_it] = std::minmax_element(image.values().begin(), image.values().end());
    const double lo = *lo_it, hi = *hi_it;
    const double range = hi - lo;
    std::string data = "P5\n" + std::to_string(image.grid().nx()) + " " + std::to_string(image.grid().ny()) + "\n65535\n";
    data.reserve(data.size() + 2 * image.size());
    for (double v : image.values()) {
        const double scaled = range > 0.0 ? (v - lo) / range * 65535.0 : 0.0;
        const auto s = static_cast<std::uint16_t>(std::clamp(std::lround(scaled), 0L, 65535L));
        data.push_back(static_cast<char>(s >> 8));
        data.push_back(static_cast<char>(s & 0xff));
    }
    write_text(path, data);
    write_text(fs::path(path.string() + ".scale.txt"),
               "min = " + format_double(lo) + "\nmax = " + format_double(hi) + "\n");
}

PgmImage read_pgm(const fs::path& path) {
    const std::string bytes = read_text(path);
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
        const std::size_t start = pos;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        if (start == pos) throw DataError("truncated PGM header in " + at_offset(path, pos));
        return bytes.substr(start, pos - start);
    };
    if (token() != "P5") throw DataError("not a binary PGM in " + at_offset(path, 0));
    PgmImage img;
    const std::size_t wpos = pos;
    try {
        img.width = std::stoi(token());
        img.height = std::stoi(token());
        if (std::stoi(token()) != 65535) throw DataError("PGM maxval must be 65535 in " + at_offset(path, pos));
    } catch (const std::logic_error&) {
        throw DataError("bad PGM header in " + at_offset(path, wpos));
    }
    ++pos;  // single whitespace before the raster
    const std::size_t n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
    if (bytes.size() != pos + 2 * n) throw DataError("PGM raster size mismatch in " + at_offset(path, pos));
    img.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        img.samples[i] = static_cast<std::uint16_t>((static_cast<unsigned char>(bytes[pos + 2 * i]) << 8) |
                                                    static_cast<unsigned char>(bytes[pos + 2 * i + 1]));
    }
    return img;
}

void write_buckets(const fs::path& path, const std::vector<double>& buckets) {
    std::string data = "j,value\n";
    data.reserve(buckets.size() * 24);
    for (std::size_t j = 0; j < buckets.size(); ++j) {
        data += std::to_string(j);
        data += ',';
        data += format_double(buckets[j]);
        data += '\n';
    }
    write_text(path, data);
}

std::vector<double> read_buckets(const fs::path& path) {
    const std::string bytes = read_text(path);
    std::vector<double> out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < bytes.size()) {
        std::size_t end = bytes.find('\n', pos);
        if (end == std::string::npos) end = bytes.size();
        std::string line = bytes.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 0) {
            if (line != "j,value") throw DataError("bucket CSV must start with 'j,value' in " + at_offset(path, pos));
        } else if (!line.empty()) {
            const auto comma = line.find(',');
            if (comma == std::string::npos) throw DataError("missing ',' in bucket row in " + at_offset(path, pos));
            std::size_t j = 0;
            const auto [jend, jec] = std::from_chars(line.data(), line.data() + comma, j);
            if (jec != std::errc() || jend != line.data() + comma || j != out.size()) {
                throw DataError("bucket index out of sequence in " + at_offset(path, pos));
            }
            double v = 0.0;
            const auto [vend, vec] = std::from_chars(line.data() + comma + 1, line.data() + line.size(), v);
            if (vec != std::errc() || vend != line.data() + line.size() || !std::isfinite(v)) {
                throw DataError("bad bucket value in " + at_offset(path, pos + comma + 1));
            }
            out.push_back(v);
        }
        pos = end + 1;
        ++line_no;
    }
    if (line_no == 0) throw DataError("empty bucket file " + at_offset(path, 0));
    return out;
}

}  // namespace ghost
