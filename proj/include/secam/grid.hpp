#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "secam/errors.hpp"

namespace secam {

/// Dense row-major 2-D array. Index with (x, y); x is the column.
template <typename T>
class Grid {
public:
    Grid() = default;

    Grid(std::size_t width, std::size_t height, T fill = T{})
        : width_(width), height_(height), data_(width * height, fill) {}

    Grid(std::size_t width, std::size_t height, std::vector<T> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != width_ * height_) {
            throw ShapeError("grid data length " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(width_) + "x" +
                             std::to_string(height_));
        }
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
    const T& operator()(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    bool same_shape(std::size_t w, std::size_t h) const noexcept {
        return width_ == w && height_ == h;
    }
    template <typename U>
    bool same_shape(const Grid<U>& other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<T> data_;
};

using Mask = Grid<std::uint8_t>;

}  // namespace secam
