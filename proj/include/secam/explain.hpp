#pragma once

#include <string>
#include <vector>

#include "secam/cam.hpp"
#include "secam/slic.hpp"

namespace secam {

struct SelectionRule {
    enum class Kind { TopN, Threshold };

    Kind kind = Kind::TopN;
    int n = 3;       // TopN: number of regions
    double t = 0.5;  // Threshold: fraction of the maximum region value, (0, 1]

    static SelectionRule top_n(int n) { return {Kind::TopN, n, 0.0}; }
    static SelectionRule threshold(double t) { return {Kind::Threshold, 0, t}; }

    /// Throws ArgumentError for n < 1 (TopN) or t outside (0, 1] (Threshold).
    void validate() const;
    std::string describe() const;  // "topn3", "threshold0.5"

    friend bool operator==(const SelectionRule&, const SelectionRule&) = default;
};

/// Mean CAM value per region, indexed by region id.
using RegionValues = std::vector<double>;

struct SecamExplanation {
    RegionValues region_values;
    std::vector<int> selected;  // ascending region ids
    Mask mask;                  // 1 where the pixel's region is selected
    int class_id = 0;
    std::string class_name;
    SelectionRule rule;
};

/// M_c^s = (1/|s|) sum over the pixels of s of M_c. The map must be at
/// image resolution and match the label grid. Regions without pixels get 0.
RegionValues region_average(const CamMap& cam, const SegmentLabels& labels);

/// TopN: the n highest values, ties to the lower id. Threshold: every
/// region with value >= t * max; the argmax regions are always included,
/// which matters when the maximum is negative.
std::vector<int> select_regions(const RegionValues& values, const SelectionRule& rule);

Mask selection_mask(const SegmentLabels& labels, const std::vector<int>& selected);

/// Region averaging and selection on an image-resolution map.
SecamExplanation explain_map(const CamMap& image_cam, const SegmentLabels& labels,
                             const SelectionRule& rule);

/// Full composition: CAM, ReLU for gradient weights, upsampling to the
/// label grid, region averaging, selection and mask.
SecamExplanation explain(const ExplanationInputs& inputs, const SegmentLabels& labels,
                         const SelectionRule& rule);

}  // namespace secam
