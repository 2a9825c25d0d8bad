#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "secam/bbox.hpp"
#include "secam/explain.hpp"
#include "secam/grid.hpp"

namespace secam {

struct GroundTruth {
    std::string image_id;
    int class_id = 0;
    std::vector<BBox> boxes;  // at least one
};

/// Tightest box around the true pixels; EmptyMaskError if there are none.
BBox bbox_of_mask(const Mask& mask);

double iou(const BBox& a, const BBox& b);

/// Fraction of explanation pixels that fall inside the ground truth.
double ebpg(const Mask& explanation, const BBox& truth);
double ebpg(const BBox& explanation, const BBox& truth);
/// Ground truth taken as the union of all boxes.
double ebpg(const Mask& explanation, const std::vector<BBox>& truth);

struct MetricReport {
    std::string image_id;
    std::string method = "secam";
    double iou = 0.0;
    double ebpg = 0.0;
    BBox explanation_box;
    BBox matched_truth;
    std::size_t region_count = 0;
    std::size_t selected_count = 0;
    std::size_t mask_pixels = 0;
    double runtime_ms = 0.0;
};

/// IOU of the mask's bounding box against the best-matching truth box;
/// EBPG of the raw mask against the union of truth boxes.
MetricReport evaluate(const SecamExplanation& explanation, const GroundTruth& truth);
MetricReport evaluate(const Mask& mask, const GroundTruth& truth);

/// Reads the JSON sidecar {image_id, class_id, boxes: [[x0, y0, x1, y1], ...]}.
GroundTruth read_ground_truth(const std::filesystem::path& path);
void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);

/// Parses a PASCAL-VOC annotation. VOC coordinates are 1-based and
/// inclusive; they are converted to 0-based half-open boxes. When
/// object_name is set, only objects with that <name> are kept.
GroundTruth ground_truth_from_voc(const std::filesystem::path& xml_path, int class_id,
                                  const std::optional<std::string>& object_name = std::nullopt,
                                  std::optional<std::string> image_id = std::nullopt);

/// CSV header and row for table assembly.
std::string report_csv_header();
std::string report_csv_row(const MetricReport& report);

}  // namespace secam
