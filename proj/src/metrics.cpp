#include "secam/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include "secam/errors.hpp"

namespace secam {

BBox bbox_of_mask(const Mask& mask) {
    int x0 = static_cast<int>(mask.width()), y0 = static_cast<int>(mask.height());
    int x1 = -1, y1 = -1;
    for (std::size_t y = 0; y < mask.height(); ++y) {
        for (std::size_t x = 0; x < mask.width(); ++x) {
            if (!mask(x, y)) continue;
            x0 = std::min(x0, static_cast<int>(x));
            y0 = std::min(y0, static_cast<int>(y));
            x1 = std::max(x1, static_cast<int>(x));
            y1 = std::max(y1, static_cast<int>(y));
        }
    }
    if (x1 < 0) throw EmptyMaskError("mask has no true pixels");
    return {x0, y0, x1 + 1, y1 + 1};
}

double iou(const BBox& a, const BBox& b) {
    const long long iw = std::max(0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const long long ih = std::max(0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const long long inter = iw * ih;
    const long long uni = a.area() + b.area() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double ebpg(const Mask& explanation, const std::vector<BBox>& truth) {
    std::size_t inside = 0, total = 0;
    for (std::size_t y = 0; y < explanation.height(); ++y) {
        for (std::size_t x = 0; x < explanation.width(); ++x) {
            if (!explanation(x, y)) continue;
            ++total;
            const bool hit = std::any_of(truth.begin(), truth.end(), [&](const BBox& g) {
                return g.contains(static_cast<int>(x), static_cast<int>(y));
            });
            if (hit) ++inside;
        }
    }
    if (total == 0) throw EmptyMaskError("explanation has no pixels");
    return static_cast<double>(inside) / static_cast<double>(total);
}

double ebpg(const Mask& explanation, const BBox& truth) {
    return ebpg(explanation, std::vector<BBox>{truth});
}

double ebpg(const BBox& s, const BBox& g) {
    const long long iw = std::max(0, std::min(s.x_max, g.x_max) - std::max(s.x_min, g.x_min));
    const long long ih = std::max(0, std::min(s.y_max, g.y_max) - std::max(s.y_min, g.y_min));
    return static_cast<double>(iw * ih) / static_cast<double>(s.area());
}

MetricReport evaluate(const Mask& mask, const GroundTruth& truth) {
    if (truth.boxes.empty()) throw ArgumentError("ground truth for " + truth.image_id + " has no boxes");
    for (const auto& g : truth.boxes) {
        if (!g.fits(mask.width(), mask.height()))
            throw ShapeError("ground-truth box lies outside the " + std::to_string(mask.width()) +
                             "x" + std::to_string(mask.height()) + " image");
    }
    MetricReport r;
    r.image_id = truth.image_id;
    r.explanation_box = bbox_of_mask(mask);
    r.matched_truth = truth.boxes.front();
    r.iou = -1.0;
    for (const auto& g : truth.boxes) {
        const double v = iou(r.explanation_box, g);
        if (v > r.iou) {
            r.iou = v;
            r.matched_truth = g;
        }
    }
    r.ebpg = ebpg(mask, truth.boxes);
    r.mask_pixels = static_cast<std::size_t>(std::count(mask.values().begin(), mask.values().end(), 1));
    return r;
}

MetricReport evaluate(const SecamExplanation& explanation, const GroundTruth& truth) {
    auto r = evaluate(explanation.mask, truth);
    r.region_count = explanation.region_values.size();
    r.selected_count = explanation.selected.size();
    return r;
}

std::string report_csv_header() { return "image_id,method,iou,ebpg,runtime_ms"; }

std::string report_csv_row(const MetricReport& r) {
    char buf[128];
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.3f", r.iou, r.ebpg, r.runtime_ms);
    return r.image_id + "," + r.method + buf;
}

}  // namespace secam
