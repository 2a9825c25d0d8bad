#pragma once

#include "secam/explain.hpp"
#include "secam/image.hpp"
#include "secam/slic.hpp"
#include "secam/tensor_io.hpp"

namespace secam {

/// Wall-clock milliseconds per stage.
struct StageTiming {
    double segment_ms = 0.0;  // CIELAB conversion + SLIC + connectivity
    double cam_ms = 0.0;      // CAM, optional ReLU, upsampling
    double select_ms = 0.0;   // region averaging, selection, mask
    double total_ms() const { return segment_ms + cam_ms + select_ms; }
};

struct PipelineResult {
    SegmentLabels labels;
    CamMap cam;  // image resolution
    SecamExplanation explanation;
    StageTiming timing;
};

/// Segments `image`, computes the CAM from `inputs` and explains it.
PipelineResult run_pipeline(const ExplanationInputs& inputs, const RgbImage& image,
                            const SlicParams& params, const SelectionRule& rule);

}  // namespace secam
