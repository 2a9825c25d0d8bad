#include "secam/tensor.hpp"

#include <functional>
#include <numeric>

#include "secam/errors.hpp"

namespace secam {

std::string_view to_string(DType dtype) {
    switch (dtype) {
        case DType::Float32: return "float32";
        case DType::Float64: return "float64";
        case DType::UInt8: return "uint8";
    }
    return "unknown";
}

std::size_t element_size(DType dtype) {
    switch (dtype) {
        case DType::Float32: return 4;
        case DType::Float64: return 8;
        case DType::UInt8: return 1;
    }
    return 0;
}

std::string shape_to_string(const Tensor::Shape& shape) {
    std::string out = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(shape[i]);
    }
    return out + ")";
}

Tensor::Tensor(Shape shape, std::vector<float> data) : shape_(std::move(shape)), data_(std::move(data)) {
    validate();
}
Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    validate();
}
Tensor::Tensor(Shape shape, std::vector<std::uint8_t> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    validate();
}

void Tensor::validate() const {
    if (shape_.empty()) throw ShapeError("tensor shape must have at least one dimension");
    for (auto d : shape_) {
        if (d == 0) throw ShapeError("tensor dimension of size 0 in " + shape_to_string(shape_));
    }
    const auto expected =
        std::accumulate(shape_.begin(), shape_.end(), std::size_t{1}, std::multiplies<>());
    if (expected != size()) {
        throw ShapeError("tensor of shape " + shape_to_string(shape_) + " needs " +
                         std::to_string(expected) + " elements, got " + std::to_string(size()));
    }
}

std::size_t Tensor::size() const noexcept {
    return std::visit([](const auto& v) { return v.size(); }, data_);
}

DType Tensor::dtype() const noexcept {
    switch (data_.index()) {
        case 0: return DType::Float32;
        case 1: return DType::Float64;
        default: return DType::UInt8;
    }
}

template <typename T>
std::span<const T> Tensor::data() const {
    const auto* v = std::get_if<std::vector<T>>(&data_);
    if (!v) throw ArgumentError("tensor dtype is " + std::string(to_string(dtype())));
    return *v;
}

template std::span<const float> Tensor::data<float>() const;
template std::span<const double> Tensor::data<double>() const;
template std::span<const std::uint8_t> Tensor::data<std::uint8_t>() const;

double Tensor::at(std::size_t i) const {
    return std::visit([i](const auto& v) { return static_cast<double>(v.at(i)); }, data_);
}

std::vector<double> Tensor::to_double() const {
    return std::visit([](const auto& v) { return std::vector<double>(v.begin(), v.end()); }, data_);
}

std::span<const std::byte> Tensor::bytes() const {
    return std::visit([](const auto& v) { return std::as_bytes(std::span(v)); }, data_);
}

}  // namespace secam
