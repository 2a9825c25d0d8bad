#pragma once

#include <cstddef>
#include <string>

#include "secam/errors.hpp"

namespace secam {

/// Axis-aligned pixel box, half-open: [x_min, x_max) x [y_min, y_max).
struct BBox {
    int x_min = 0;
    int y_min = 0;
    int x_max = 1;
    int y_max = 1;

    BBox() = default;
    BBox(int x0, int y0, int x1, int y1) : x_min(x0), y_min(y0), x_max(x1), y_max(y1) {
        if (x0 >= x1 || y0 >= y1)
            throw ArgumentError("degenerate box (" + std::to_string(x0) + "," + std::to_string(y0) +
                                "," + std::to_string(x1) + "," + std::to_string(y1) + ")");
    }

    int width() const noexcept { return x_max - x_min; }
    int height() const noexcept { return y_max - y_min; }
    long long area() const noexcept { return static_cast<long long>(width()) * height(); }

    bool contains(int x, int y) const noexcept {
        return x >= x_min && x < x_max && y >= y_min && y < y_max;
    }
    bool fits(std::size_t image_width, std::size_t image_height) const noexcept {
        return x_min >= 0 && y_min >= 0 && static_cast<std::size_t>(x_max) <= image_width &&
               static_cast<std::size_t>(y_max) <= image_height;
    }

    friend bool operator==(const BBox&, const BBox&) = default;
};

}  // namespace secam
