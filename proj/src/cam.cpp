#include "secam/cam.hpp"

#include <algorithm>
#include <cmath>

#include "secam/errors.hpp"
#include "secam/image.hpp"

namespace secam {

CamMap::CamMap(Grid<double> values, int class_id, Resolution resolution)
    : values_(std::move(values)), class_id_(class_id), resolution_(resolution) {
    for (double v : values_.values()) {
        if (!std::isfinite(v)) throw ArgumentError("class activation map has non-finite values");
    }
}

CamMap compute_cam(const ExplanationInputs& inputs) {
    validate(inputs);
    const auto k = inputs.channels(), h = inputs.feature_height(), w = inputs.feature_width();
    const auto plane = h * w;
    const auto features = inputs.features.to_double();
    const auto weights = inputs.weights.values.to_double();
    const bool spatial = inputs.weights.mode == WeightMode::Spatial;

    Grid<double> m(w, h, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
        const double* f = features.data() + c * plane;
        if (spatial) {
            const double* wk = weights.data() + c * plane;
            for (std::size_t i = 0; i < plane; ++i) m[i] += wk[i] * f[i];
        } else {
            const double wk = weights[c];
            for (std::size_t i = 0; i < plane; ++i) m[i] += wk * f[i];
        }
    }
    return CamMap(std::move(m), inputs.class_id, Resolution::Feature);
}

double class_score(const CamMap& cam) {
    if (cam.resolution() != Resolution::Feature)
        throw ArgumentError("class score is only defined on the feature-resolution map");
    double total = 0.0;
    for (double v : cam.values().values()) total += v;
    return total;
}

std::vector<double> softmax(const std::vector<double>& scores) {
    if (scores.empty()) throw ArgumentError("softmax of an empty vector");
    for (double s : scores) {
        if (!std::isfinite(s)) throw ArgumentError("softmax input must be finite");
    }
    const double top = *std::max_element(scores.begin(), scores.end());
    std::vector<double> out(scores.size());
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = std::exp(scores[i] - top);
        total += out[i];
    }
    for (double& v : out) v /= total;
    return out;
}

CamMap& relu_inplace(CamMap& cam) {
    for (double& v : cam.values().values()) v = std::max(v, 0.0);
    return cam;
}

CamMap upsample_to_image(const CamMap& cam, std::size_t height, std::size_t width) {
    if (cam.resolution() != Resolution::Feature)
        throw ArgumentError("map is already at image resolution");
    return CamMap(bilinear_resize(cam.values(), width, height), cam.class_id(), Resolution::Image);
}

CamMap image_cam(const ExplanationInputs& inputs, std::size_t height, std::size_t width) {
    auto cam = compute_cam(inputs);
    if (inputs.weights.mode == WeightMode::Spatial) relu_inplace(cam);
    return upsample_to_image(cam, height, width);
}

}  // namespace secam
