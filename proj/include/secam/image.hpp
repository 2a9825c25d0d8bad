#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "secam/grid.hpp"

namespace secam {

/// 8-bit sRGB image, interleaved RGB, row-major.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(std::size_t width, std::size_t height);
    RgbImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return width_ * height_; }

    std::uint8_t* pixel(std::size_t x, std::size_t y) { return &pixels_[3 * (y * width_ + x)]; }
    const std::uint8_t* pixel(std::size_t x, std::size_t y) const {
        return &pixels_[3 * (y * width_ + x)];
    }
    std::vector<std::uint8_t>& pixels() noexcept { return pixels_; }
    const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

struct Lab {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;
};

using LabImage = Grid<Lab>;

/// Decodes 8/16-bit gray, RGB or RGBA PNG into 8-bit RGB; alpha is dropped.
RgbImage load_png(const std::filesystem::path& path);
void save_png(const RgbImage& image, const std::filesystem::path& path);

/// Single-channel PNG writers. bit_depth 1 writes a bilevel image where any
/// nonzero value is white.
void save_mask_png(const Mask& mask, const std::filesystem::path& path);
void save_gray16_png(const Grid<std::uint16_t>& image, const std::filesystem::path& path);

/// Reads a gray PNG of any bit depth into 0/1 values (nonzero -> 1).
Mask load_mask_png(const std::filesystem::path& path);

/// sRGB (D65, 2-degree observer) to CIELAB.
Lab srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);
LabImage srgb_to_lab(const RgbImage& image);

/// Bilinear resampling with the align-corners convention: source corner
/// samples land exactly on destination corners.
Grid<double> bilinear_resize(const Grid<double>& src, std::size_t target_width,
                             std::size_t target_height);

}  // namespace secam
