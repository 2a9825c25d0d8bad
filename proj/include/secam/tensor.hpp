#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace secam {

enum class DType : std::uint8_t { Float32, Float64, UInt8 };

std::string_view to_string(DType dtype);
std::size_t element_size(DType dtype);

/// Immutable n-dimensional row-major array. The shape is non-empty, every
/// dimension is at least 1 and the element count matches the product of
/// the shape; construction throws ShapeError otherwise.
class Tensor {
public:
    using Shape = std::vector<std::size_t>;

    Tensor(Shape shape, std::vector<float> data);
    Tensor(Shape shape, std::vector<double> data);
    Tensor(Shape shape, std::vector<std::uint8_t> data);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
    std::size_t size() const noexcept;
    DType dtype() const noexcept;

    /// Typed view; throws ArgumentError if T does not match dtype().
    template <typename T>
    std::span<const T> data() const;

    /// Element i widened to double.
    double at(std::size_t i) const;

    /// Copy of all elements widened to double.
    std::vector<double> to_double() const;

    /// Raw little-endian payload as stored.
    std::span<const std::byte> bytes() const;

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    void validate() const;

    Shape shape_;
    std::variant<std::vector<float>, std::vector<double>, std::vector<std::uint8_t>> data_;
};

std::string shape_to_string(const Tensor::Shape& shape);

}  // namespace secam
