#pragma once

#include <cstddef>
#include <vector>

#include "secam/grid.hpp"
#include "secam/tensor_io.hpp"

namespace secam {

enum class Resolution { Feature, Image };

/// Class activation map M_c. Values are always finite.
class CamMap {
public:
    CamMap(Grid<double> values, int class_id, Resolution resolution);

    const Grid<double>& values() const noexcept { return values_; }
    Grid<double>& values() noexcept { return values_; }
    int class_id() const noexcept { return class_id_; }
    Resolution resolution() const noexcept { return resolution_; }
    std::size_t width() const noexcept { return values_.width(); }
    std::size_t height() const noexcept { return values_.height(); }

private:
    Grid<double> values_;
    int class_id_;
    Resolution resolution_;
};

/// M_c(x, y) = sum_k w_k^c(x, y) f_k(x, y), accumulated in double.
/// Channel weights are broadcast over (x, y).
CamMap compute_cam(const ExplanationInputs& inputs);

/// S_c = sum over (x, y) of M_c. Only meaningful before upsampling, so an
/// image-resolution map is rejected with ArgumentError.
double class_score(const CamMap& cam);

/// Numerically stable softmax (max subtracted before exponentiation).
std::vector<double> softmax(const std::vector<double>& scores);

CamMap& relu_inplace(CamMap& cam);

/// Bilinear (align-corners) upsampling of a feature-resolution map.
CamMap upsample_to_image(const CamMap& cam, std::size_t height, std::size_t width);

/// The map used for region averaging: compute_cam, ReLU for gradient
/// (spatial) weights, then upsampling to height x width.
CamMap image_cam(const ExplanationInputs& inputs, std::size_t height, std::size_t width);

}  // namespace secam
