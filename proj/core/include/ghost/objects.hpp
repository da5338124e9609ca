#pragma once

#include <string>

#include "ghost/grid.hpp"

namespace ghost {

// Built-in test objects. All are binary transmittances placed around the grid
// center and confined to the central half.

/// Hollow "2" from a 5x7 bitmap font, each font cell `scale` pixels wide.
RealImage letter_object(const Grid2D& grid, int scale = 3);

/// Two single-pixel points on the row ny/2, `separation_px` apart along x.
RealImage two_points_object(const Grid2D& grid, int separation_px);

/// Filled width x height box.
RealImage rectangle_object(const Grid2D& grid, int width, int height);

/// Two vertical slits of the given width and height whose centers are
/// `spacing` pixels apart.
RealImage double_slit_object(const Grid2D& grid, int slit_width = 2, int slit_height = 12, int spacing = 8);

/// Parses "letter", "letter(scale)", "two-points(sep_px)", "rectangle(w,h)",
/// "double-slit" or "double-slit(w,h,spacing)". Throws ConfigError on
/// unknown names or bad arguments.
RealImage builtin_object(const std::string& spec, const Grid2D& grid);

}  // namespace ghost
