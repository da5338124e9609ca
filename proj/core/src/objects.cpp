#include "ghost/objects.hpp"

#include <array>
#include <charconv>
#include <string_view>
#include <vector>

#include "ghost/forward_model.hpp"

namespace ghost {

namespace {

constexpr std::array<const char*, 7> kGlyph = {
    "01110",
    "10001",
    "00001",
    "00010",
    "00100",
    "01000",
    "11111",
};

RealImage checked(RealImage image) {
    require_central_support(image);
    return image;
}

void fill_box(RealImage& image, int x0, int y0, int width, int height) {
    for (int y = y0; y < y0 + height; ++y)
        for (int x = x0; x < x0 + width; ++x) image.at(x, y) = 1.0;
}

std::vector<int> parse_args(std::string_view text, const std::string& spec) {
    std::vector<int> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        std::string_view item = text.substr(0, comma);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        int value = 0;
        const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc() || end != item.data() + item.size()) {
            throw ConfigError("bad integer argument in object spec '" + spec + "'");
        }
        out.push_back(value);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

RealImage letter_object(const Grid2D& grid, int scale) {
    if (scale < 1) throw ConfigError("letter scale must be >= 1");
    const int w = 5 * scale, h = 7 * scale;
    RealImage image(grid);
    if (w > grid.nx() / 2 || h > grid.ny() / 2) throw ConfigError("letter does not fit in the central half of the grid");
    const int x0 = grid.nx() / 2 - w / 2, y0 = grid.ny() / 2 - h / 2;
    for (int row = 0; row < 7; ++row)
        for (int col = 0; col < 5; ++col)
            if (kGlyph[static_cast<std::size_t>(row)][col] == '1') fill_box(image, x0 + col * scale, y0 + row * scale, scale, scale);
    return checked(std::move(image));
}

RealImage two_points_object(const Grid2D& grid, int separation_px) {
    if (separation_px < 1) throw ConfigError("two-point separation must be >= 1 pixel");
    if (separation_px >= grid.nx() / 2) throw ConfigError("two-point separation does not fit in the central half");
    RealImage image(grid);
    const int x1 = grid.nx() / 2 - separation_px / 2;
    image.at(x1, grid.ny() / 2) = 1.0;
    image.at(x1 + separation_px, grid.ny() / 2) = 1.0;
    return checked(std::move(image));
}

RealImage rectangle_object(const Grid2D& grid, int width, int height) {
    if (width < 1 || height < 1) throw ConfigError("rectangle sides must be >= 1");
    if (width > grid.nx() / 2 || height > grid.ny() / 2) throw ConfigError("rectangle does not fit in the central half");
    RealImage image(grid);
    fill_box(image, grid.nx() / 2 - width / 2, grid.ny() / 2 - height / 2, width, height);
    return checked(std::move(image));
}

RealImage double_slit_object(const Grid2D& grid, int slit_width, int slit_height, int spacing) {
    if (slit_width < 1 || slit_height < 1 || spacing <= slit_width) throw ConfigError("bad double-slit geometry");
    if (spacing + slit_width > grid.nx() / 2 || slit_height > grid.ny() / 2) {
        throw ConfigError("double slit does not fit in the central half");
    }
    RealImage image(grid);
    const int left = grid.nx() / 2 - (spacing + slit_width) / 2;
    const int y0 = grid.ny() / 2 - slit_height / 2;
    fill_box(image, left, y0, slit_width, slit_height);
    fill_box(image, left + spacing, y0, slit_width, slit_height);
    return checked(std::move(image));
}

RealImage builtin_object(const std::string& spec, const Grid2D& grid) {
    std::string_view view(spec);
    std::string_view name = view;
    std::vector<int> args;
    if (const auto open = view.find('('); open != std::string_view::npos) {
        if (view.back() != ')') throw ConfigError("object spec '" + spec + "' is missing ')'");
        name = view.substr(0, open);
        args = parse_args(view.substr(open + 1, view.size() - open - 2), spec);
    }
    auto want = [&](std::size_t n) {
        if (args.size() != n) throw ConfigError("object '" + std::string(name) + "' takes " + std::to_string(n) + " argument(s)");
    };
    if (name == "letter") {
        if (args.empty()) return letter_object(grid);
        want(1);
        return letter_object(grid, args[0]);
    }
    if (name == "two-points") {
        want(1);
        return two_points_object(grid, args[0]);
    }
    if (name == "rectangle") {
        want(2);
        return rectangle_object(grid, args[0], args[1]);
    }
    if (name == "double-slit") {
        if (args.empty()) return double_slit_object(grid);
        want(3);
        return double_slit_object(grid, args[0], args[1], args[2]);
    }
    throw ConfigError("unknown built-in object '" + spec + "'");
}

}  // namespace ghost
