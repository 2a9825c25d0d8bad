#include <array>
#include <cmath>

#include "secam/image.hpp"

namespace secam {

namespace {

// Linear sRGB -> XYZ for the D65 white point.
constexpr double kM[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

// Reference white taken as the matrix row sums so that R = G = B lands
// exactly on a = b = 0.
constexpr double kWhite[3] = {
    kM[0][0] + kM[0][1] + kM[0][2],
    kM[1][0] + kM[1][1] + kM[1][2],
    kM[2][0] + kM[2][1] + kM[2][2],
};

constexpr double kDelta = 6.0 / 29.0;

double linearize(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

const std::array<double, 256>& linear_table() {
    static const auto table = [] {
        std::array<double, 256> t{};
        for (int i = 0; i < 256; ++i) t[i] = linearize(i / 255.0);
        return t;
    }();
    return table;
}

double lab_f(double t) {
    return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

}  // namespace

Lab srgb_to_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const auto& lin = linear_table();
    const double r = lin[r8], g = lin[g8], b = lin[b8];
    const double fx = lab_f((kM[0][0] * r + kM[0][1] * g + kM[0][2] * b) / kWhite[0]);
    const double fy = lab_f((kM[1][0] * r + kM[1][1] * g + kM[1][2] * b) / kWhite[1]);
    const double fz = lab_f((kM[2][0] * r + kM[2][1] * g + kM[2][2] * b) / kWhite[2]);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

LabImage srgb_to_lab(const RgbImage& image) {
    LabImage out(image.width(), image.height());
    const auto& px = image.pixels();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = srgb_to_lab(px[3 * i], px[3 * i + 1], px[3 * i + 2]);
    }
    return out;
}

}  // namespace secam
