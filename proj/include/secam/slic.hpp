#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "secam/grid.hpp"
#include "secam/image.hpp"

namespace secam {

enum class SearchMode {
    Windowed,  // candidates restricted to centers within a 2S x 2S window
    Full,      // every center is a candidate
};

struct SlicParams {
    int k = 49;
    double m = 10.0;  // compactness, [1, 20]
    int max_iters = 10;
    double eps = 1.0;  // stop once summed labxy center movement drops below
    SearchMode search = SearchMode::Windowed;

    /// Throws ArgumentError unless 1 <= k <= pixel_count, m in [1, 20],
    /// max_iters >= 1 and eps >= 0.
    void validate(std::size_t pixel_count) const;
};

/// Grid interval S = sqrt(N / k).
double grid_interval(std::size_t pixel_count, int k);

/// D_s = d_lab + (m / S) d_xy.
inline double slic_distance(double d_lab, double d_xy, double m, double s) {
    return d_lab + (m / s) * d_xy;
}

struct ClusterCenter {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const ClusterCenter&, const ClusterCenter&) = default;
};

/// Distance between a center and pixel (x, y) of `lab`.
double slic_distance(const ClusterCenter& c, const Lab& p, double x, double y, double m, double s);

/// Per-pixel region ids. Provisional labellings (straight out of
/// assign_labels) may leave ids unused; after enforce_connectivity the ids
/// are exactly 0..region_count-1 and every region is 4-connected.
struct SegmentLabels {
    Grid<std::int32_t> labels;
    int region_count = 0;

    std::size_t width() const noexcept { return labels.width(); }
    std::size_t height() const noexcept { return labels.height(); }
    std::int32_t operator()(std::size_t x, std::size_t y) const { return labels(x, y); }

    /// Pixel count per region id.
    std::vector<std::size_t> region_sizes() const;

    friend bool operator==(const SegmentLabels&, const SegmentLabels&) = default;
};

/// Squared lab differences of the horizontal and vertical neighbours.
/// Defined for interior pixels only (1 <= x <= W-2, 1 <= y <= H-2).
double image_gradient(const LabImage& lab, std::size_t x, std::size_t y);

/// Grid-sampled centers moved to the lowest-gradient pixel of their 3x3
/// neighbourhood. Produces exactly params.k centers.
std::vector<ClusterCenter> init_centers(const LabImage& lab, const SlicParams& params);

/// Grid positions before perturbation, as integer pixel coordinates.
std::vector<std::pair<std::size_t, std::size_t>> grid_positions(std::size_t width,
                                                                 std::size_t height, int k);

SegmentLabels assign_labels(const LabImage& lab, const std::vector<ClusterCenter>& centers,
                            const SlicParams& params);

/// Sum over pixels of D_s to the center each pixel is labelled with.
double assignment_cost(const LabImage& lab, const std::vector<ClusterCenter>& centers,
                       const SegmentLabels& labels, const SlicParams& params);

struct CenterUpdate {
    std::vector<ClusterCenter> centers;
    std::vector<bool> empty;  // true where a cluster lost all pixels
    double movement = 0.0;    // summed labxy L2 displacement
};

/// Mean labxy vector of each cluster's members. Empty clusters keep their
/// previous center.
CenterUpdate update_centers(const LabImage& lab, const SegmentLabels& labels,
                            const std::vector<ClusterCenter>& previous);

/// Splits every label into 4-connected components, merges components
/// smaller than min_region_size into their largest 4-adjacent neighbour and
/// renumbers regions in raster order of first appearance.
SegmentLabels enforce_connectivity(const SegmentLabels& labels, std::size_t min_region_size);

/// Stray-segment threshold S^2 / 4 used by segment().
std::size_t min_region_size(std::size_t pixel_count, int k);

/// Per-iteration record produced by segment() when a trace is requested.
struct SlicTrace {
    std::vector<double> costs;  // assignment cost after each assign step
    std::vector<double> movements;
    int iterations = 0;
};

SegmentLabels segment(const LabImage& lab, const SlicParams& params, SlicTrace* trace = nullptr);
SegmentLabels segment(const RgbImage& image, const SlicParams& params, SlicTrace* trace = nullptr);

}  // namespace secam
