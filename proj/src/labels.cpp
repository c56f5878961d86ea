#include "rtopmap/labels.hpp"

#include <algorithm>
#include <cmath>

namespace rtopmap {

double font_size(double weight) {
    const double f = weight / 10.0;
    if (f <= 80.0) return 80.0;
    if (f >= 200.0) return 200.0;
    return f;
}

std::size_t char_count(std::string_view utf8) {
    return static_cast<std::size_t>(std::count_if(utf8.begin(), utf8.end(), [](char c) {
        return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
    }));
}

double level_scale(int level) { return std::ldexp(1.0, level - 1); }

Size2 label_size(std::string_view label, double font, int level, const LabelMetrics& metrics) {
    const double scale = level_scale(level);
    const auto chars = static_cast<double>(std::max<std::size_t>(1, char_count(label)));
    return {chars * font * metrics.width_ratio / scale, font * metrics.height_ratio / scale};
}

}  // namespace rtopmap
