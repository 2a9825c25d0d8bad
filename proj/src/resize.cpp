#include <algorithm>
#include <cmath>

#include "secam/errors.hpp"
#include "secam/image.hpp"

namespace secam {

namespace {

struct Tap {
    std::size_t lo;
    std::size_t hi;
    double frac;
};

std::vector<Tap> taps(std::size_t src, std::size_t dst) {
    std::vector<Tap> out(dst);
    const double scale = dst > 1 ? static_cast<double>(src - 1) / static_cast<double>(dst - 1) : 0.0;
    for (std::size_t i = 0; i < dst; ++i) {
        const double pos = static_cast<double>(i) * scale;
        const auto lo = std::min(static_cast<std::size_t>(std::floor(pos)), src - 1);
        const auto hi = std::min(lo + 1, src - 1);
        out[i] = {lo, hi, pos - static_cast<double>(lo)};
    }
    // Land exactly on the last source sample.
    if (dst > 1) out.back() = {src - 1, src - 1, 0.0};
    return out;
}

}  // namespace

Grid<double> bilinear_resize(const Grid<double>& src, std::size_t target_width,
                             std::size_t target_height) {
    if (src.empty()) throw ArgumentError("cannot resize an empty grid");
    if (target_width == 0 || target_height == 0)
        throw ArgumentError("resize target must be at least 1x1");

    const auto xs = taps(src.width(), target_width);
    const auto ys = taps(src.height(), target_height);
    Grid<double> out(target_width, target_height);
    for (std::size_t y = 0; y < target_height; ++y) {
        const auto& ty = ys[y];
        for (std::size_t x = 0; x < target_width; ++x) {
            const auto& tx = xs[x];
            // std::lerp keeps results inside the endpoint range.
            const double top = std::lerp(src(tx.lo, ty.lo), src(tx.hi, ty.lo), tx.frac);
            const double bottom = std::lerp(src(tx.lo, ty.hi), src(tx.hi, ty.hi), tx.frac);
            out(x, y) = std::lerp(top, bottom, ty.frac);
        }
    }
    return out;
}

}  // namespace secam
