#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "secam/tensor.hpp"

namespace secam {

// NPY v1.0 reader/writer. Only little-endian, C-ordered float32, float64
// and uint8 arrays are accepted on read.

Tensor read_tensor(const std::filesystem::path& path);
Tensor parse_npy(std::span<const std::byte> file_bytes);

void write_tensor(const Tensor& tensor, const std::filesystem::path& path);
std::string encode_npy(const Tensor& tensor);

/// Writes a C-ordered '<i4' array. Used for label maps; read_tensor does
/// not accept the result.
void write_int32_npy(std::span<const std::int32_t> values, const Tensor::Shape& shape,
                     const std::filesystem::path& path);

/// The padded NPY v1.0 preamble (magic, version, length, header dict)
/// numpy itself writes for this descr and shape.
std::string npy_preamble(std::string_view descr, const Tensor::Shape& shape);

enum class WeightMode { Channel, Spatial };

std::string_view to_string(WeightMode mode);
WeightMode parse_weight_mode(std::string_view text);

/// Class weights for one class: a scalar per channel (GAP + FC models) or a
/// full K x h x w map (gradients).
struct WeightSpec {
    WeightMode mode;
    Tensor values;
};

/// Everything needed to explain one (image, model, class) triple.
/// Construct through make_explanation_inputs or read_bundle, both of which
/// check the cross-shape invariants.
struct ExplanationInputs {
    Tensor features;  // K x h x w
    WeightSpec weights;
    int class_id = 0;
    std::string class_name;
    std::optional<Tensor> logits;
    std::filesystem::path image_path;
    std::map<std::string, std::string> metadata;

    std::size_t channels() const { return features.dim(0); }
    std::size_t feature_height() const { return features.dim(1); }
    std::size_t feature_width() const { return features.dim(2); }
};

/// Throws ShapeError if the features/weights/logits shapes disagree.
void validate(const ExplanationInputs& inputs);

ExplanationInputs make_explanation_inputs(Tensor features, WeightSpec weights, int class_id,
                                          std::optional<Tensor> logits = std::nullopt);

/// Loads a bundle manifest (JSON). Relative paths resolve against the
/// manifest's directory.
ExplanationInputs read_bundle(const std::filesystem::path& manifest_path);

}  // namespace secam
