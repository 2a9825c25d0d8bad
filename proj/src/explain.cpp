#include "secam/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "secam/errors.hpp"

namespace secam {

void SelectionRule::validate() const {
    if (kind == Kind::TopN && n < 1)
        throw ArgumentError("top-n selection needs n >= 1, got " + std::to_string(n));
    if (kind == Kind::Threshold && !(t > 0.0 && t <= 1.0))
        throw ArgumentError("threshold must be in (0, 1], got " + std::to_string(t));
}

std::string SelectionRule::describe() const {
    std::ostringstream out;
    if (kind == Kind::TopN)
        out << "topn" << n;
    else
        out << "threshold" << t;
    return out.str();
}

RegionValues region_average(const CamMap& cam, const SegmentLabels& labels) {
    if (cam.resolution() != Resolution::Image)
        throw ArgumentError("region averaging needs an image-resolution map");
    if (!cam.values().same_shape(labels.labels))
        throw ShapeError("map is " + std::to_string(cam.width()) + "x" +
                         std::to_string(cam.height()) + " but labels are " +
                         std::to_string(labels.width()) + "x" + std::to_string(labels.height()));

    const auto regions = static_cast<std::size_t>(labels.region_count);
    std::vector<double> sums(regions, 0.0);
    std::vector<std::size_t> counts(regions, 0);
    const auto values = cam.values().values();
    const auto ids = labels.labels.values();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto id = ids[i];
        if (id < 0 || static_cast<std::size_t>(id) >= regions)
            throw ShapeError("label " + std::to_string(id) + " outside region count " +
                             std::to_string(regions));
        sums[static_cast<std::size_t>(id)] += values[i];
        ++counts[static_cast<std::size_t>(id)];
    }
    for (std::size_t r = 0; r < regions; ++r) {
        if (counts[r]) sums[r] /= static_cast<double>(counts[r]);
    }
    return sums;
}

std::vector<int> select_regions(const RegionValues& values, const SelectionRule& rule) {
    rule.validate();
    if (values.empty()) throw ArgumentError("no regions to select from");

    std::vector<int> out;
    if (rule.kind == SelectionRule::Kind::TopN) {
        std::vector<int> order(values.size());
        std::iota(order.begin(), order.end(), 0);
        const auto take = std::min(order.size(), static_cast<std::size_t>(rule.n));
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take),
                          order.end(), [&](int a, int b) {
                              if (values[a] != values[b]) return values[a] > values[b];
                              return a < b;
                          });
        out.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
    } else {
        const double top = *std::max_element(values.begin(), values.end());
        const double cutoff = rule.t * top;
        for (std::size_t r = 0; r < values.size(); ++r) {
            if (values[r] >= cutoff || values[r] == top) out.push_back(static_cast<int>(r));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Mask selection_mask(const SegmentLabels& labels, const std::vector<int>& selected) {
    std::vector<std::uint8_t> chosen(static_cast<std::size_t>(labels.region_count), 0);
    for (int r : selected) {
        if (r < 0 || r >= labels.region_count)
            throw ArgumentError("selected region " + std::to_string(r) + " does not exist");
        chosen[static_cast<std::size_t>(r)] = 1;
    }
    Mask mask(labels.width(), labels.height(), 0);
    const auto ids = labels.labels.values();
    for (std::size_t i = 0; i < ids.size(); ++i) mask[i] = chosen[static_cast<std::size_t>(ids[i])];
    return mask;
}

SecamExplanation explain_map(const CamMap& image_cam, const SegmentLabels& labels,
                             const SelectionRule& rule) {
    SecamExplanation out;
    out.region_values = region_average(image_cam, labels);
    out.selected = select_regions(out.region_values, rule);
    out.mask = selection_mask(labels, out.selected);
    out.class_id = image_cam.class_id();
    out.rule = rule;
    return out;
}

SecamExplanation explain(const ExplanationInputs& inputs, const SegmentLabels& labels,
                         const SelectionRule& rule) {
    rule.validate();
    const auto cam = image_cam(inputs, labels.height(), labels.width());
    auto out = explain_map(cam, labels, rule);
    out.class_name = inputs.class_name;
    return out;
}

}  // namespace secam
