#include "secam/pipeline.hpp"

#include <chrono>

namespace secam {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

PipelineResult run_pipeline(const ExplanationInputs& inputs, const RgbImage& image,
                            const SlicParams& params, const SelectionRule& rule) {
    rule.validate();
    params.validate(image.pixel_count());
    StageTiming timing;

    auto start = Clock::now();
    auto labels = segment(image, params);
    timing.segment_ms = ms_since(start);

    start = Clock::now();
    auto cam = image_cam(inputs, image.height(), image.width());
    timing.cam_ms = ms_since(start);

    start = Clock::now();
    auto explanation = explain_map(cam, labels, rule);
    explanation.class_name = inputs.class_name;
    timing.select_ms = ms_since(start);

    return {std::move(labels), std::move(cam), std::move(explanation), timing};
}

}  // namespace secam
