#pragma once

#include <array>
#include <cstdint>

#include "secam/cam.hpp"
#include "secam/explain.hpp"
#include "secam/image.hpp"
#include "secam/slic.hpp"

namespace secam {

using Rgb = std::array<std::uint8_t, 3>;

/// 256-entry jet-style lookup, index 0 = lowest value (dark blue).
const std::array<Rgb, 256>& jet_colormap();

struct RenderStyle {
    enum class Mode { Boundaries, Heatmap, Masked };

    Mode mode = Mode::Masked;
    double alpha = 0.5;       // heatmap opacity, [0, 1]
    double dim_factor = 0.0;  // brightness of unselected regions, [0, 1]
    Rgb boundary_color{255, 255, 0};

    void validate() const;
};

/// Recolors every pixel with a 4-neighbour of a different label.
RgbImage draw_boundaries(const RgbImage& image, const SegmentLabels& labels, Rgb color);

/// Min-max normalised map through the jet table, blended as
/// alpha * color + (1 - alpha) * image. A constant map uses the lowest entry.
RgbImage overlay_heatmap(const RgbImage& image, const CamMap& cam, double alpha);

/// Keeps masked pixels and scales the others by dim_factor.
RgbImage render_masked(const RgbImage& image, const Mask& mask, double dim_factor);
RgbImage render_masked(const RgbImage& image, const SecamExplanation& explanation,
                       double dim_factor);

}  // namespace secam
