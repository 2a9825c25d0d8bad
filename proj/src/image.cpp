#include "secam/image.hpp"

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

#include <png.h>

#include "secam/errors.hpp"

namespace secam {

namespace fs = std::filesystem;

RgbImage::RgbImage(std::size_t width, std::size_t height)
    : width_(width), height_(height), pixels_(width * height * 3, 0) {}

RgbImage::RgbImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != width_ * height_ * 3)
        throw ShapeError("RGB buffer of " + std::to_string(pixels_.size()) + " bytes for " +
                         std::to_string(width_) + "x" + std::to_string(height_) + " image");
}

namespace {

std::vector<std::uint8_t> read_simplified(const fs::path& path, png_uint_32 format,
                                          png_uint_32& w, png_uint_32& h) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
        throw FormatError(path.string() + ": " + image.message);
    }
    image.format = format;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw FormatError(path.string() + ": " + msg);
    }
    w = image.width;
    h = image.height;
    return buffer;
}

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};

// Classic libpng writer for single-channel images.
void write_gray(const fs::path& path, std::size_t width, std::size_t height, int bit_depth,
                const std::vector<std::vector<png_byte>>& rows) {
    std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
    if (!file) throw IoError("cannot open " + path.string() + " for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng initialisation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed writing " + path.string());
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                 bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (const auto& row : rows) png_write_row(png, row.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

RgbImage load_png(const fs::path& path) {
    png_uint_32 w = 0, h = 0;
    // Read with alpha and discard it; asking libpng for RGB would composite.
    const auto rgba = read_simplified(path, PNG_FORMAT_RGBA, w, h);
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0, n = static_cast<std::size_t>(w) * h; i < n; ++i) {
        rgb[3 * i] = rgba[4 * i];
        rgb[3 * i + 1] = rgba[4 * i + 1];
        rgb[3 * i + 2] = rgba[4 * i + 2];
    }
    return RgbImage(w, h, std::move(rgb));
}

Mask load_mask_png(const fs::path& path) {
    png_uint_32 w = 0, h = 0;
    auto buffer = read_simplified(path, PNG_FORMAT_GRAY, w, h);
    for (auto& v : buffer) v = v != 0 ? 1 : 0;
    return Mask(w, h, std::move(buffer));
}

void save_png(const RgbImage& image, const fs::path& path) {
    png_image out{};
    out.version = PNG_IMAGE_VERSION;
    out.width = static_cast<png_uint_32>(image.width());
    out.height = static_cast<png_uint_32>(image.height());
    out.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&out, path.c_str(), 0, image.pixels().data(), 0, nullptr)) {
        throw IoError(path.string() + ": " + out.message);
    }
}

void save_mask_png(const Mask& mask, const fs::path& path) {
    std::vector<std::vector<png_byte>> rows(mask.height(),
                                            std::vector<png_byte>((mask.width() + 7) / 8, 0));
    for (std::size_t y = 0; y < mask.height(); ++y) {
        for (std::size_t x = 0; x < mask.width(); ++x) {
            if (mask(x, y)) rows[y][x / 8] |= static_cast<png_byte>(0x80u >> (x % 8));
        }
    }
    write_gray(path, mask.width(), mask.height(), 1, rows);
}

void save_gray16_png(const Grid<std::uint16_t>& image, const fs::path& path) {
    std::vector<std::vector<png_byte>> rows(image.height(), std::vector<png_byte>(image.width() * 2));
    for (std::size_t y = 0; y < image.height(); ++y) {
        for (std::size_t x = 0; x < image.width(); ++x) {
            const auto v = image(x, y);
            rows[y][2 * x] = static_cast<png_byte>(v >> 8);  // PNG is big-endian
            rows[y][2 * x + 1] = static_cast<png_byte>(v & 0xff);
        }
    }
    write_gray(path, image.width(), image.height(), 16, rows);
}

}  // namespace secam
