#pragma once

#include <string_view>

#include "rtopmap/geometry.hpp"

namespace rtopmap {

inline constexpr int kLevelCount = 8;

// Em-box approximations for label extents, as fractions of the font size.
struct LabelMetrics {
    double width_ratio = 0.6;
    double height_ratio = 1.2;
};

// Percent of the default font size: weight/10 clamped to [80, 200].
double font_size(double weight);

// Number of UTF-8 code points.
std::size_t char_count(std::string_view utf8);

// World-units per screen unit halves with each level: 2^(level-1).
double level_scale(int level);

// Label extent in world units at `level`.
Size2 label_size(std::string_view label, double font, int level, const LabelMetrics& metrics = {});

}  // namespace rtopmap
