#include "secam/slic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "secam/errors.hpp"

namespace secam {

void SlicParams::validate(std::size_t pixel_count) const {
    if (k < 1 || static_cast<std::size_t>(k) > pixel_count)
        throw ArgumentError("k must be in [1, " + std::to_string(pixel_count) + "], got " +
                            std::to_string(k));
    if (!(m >= 1.0 && m <= 20.0))
        throw ArgumentError("m must be in [1, 20], got " + std::to_string(m));
    if (max_iters < 1) throw ArgumentError("max_iters must be positive");
    if (!(eps >= 0.0)) throw ArgumentError("eps must be non-negative");
}

double grid_interval(std::size_t pixel_count, int k) {
    return std::sqrt(static_cast<double>(pixel_count) / static_cast<double>(k));
}

std::size_t min_region_size(std::size_t pixel_count, int k) {
    const double s = grid_interval(pixel_count, k);
    return static_cast<std::size_t>(std::floor(s * s / 4.0));
}

double slic_distance(const ClusterCenter& c, const Lab& p, double x, double y, double m,
                     double s) {
    const double dl = c.l - p.l, da = c.a - p.a, db = c.b - p.b;
    const double dx = c.x - x, dy = c.y - y;
    return slic_distance(std::sqrt(dl * dl + da * da + db * db), std::sqrt(dx * dx + dy * dy), m,
                         s);
}

std::vector<std::size_t> SegmentLabels::region_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(region_count, 0)), 0);
    for (auto id : labels.values()) {
        if (id >= 0 && id < region_count) ++sizes[static_cast<std::size_t>(id)];
    }
    return sizes;
}

double image_gradient(const LabImage& lab, std::size_t x, std::size_t y) {
    if (lab.width() < 3 || lab.height() < 3 || x < 1 || y < 1 || x > lab.width() - 2 ||
        y > lab.height() - 2) {
        throw ArgumentError("gradient undefined at (" + std::to_string(x) + ", " +
                            std::to_string(y) + ")");
    }
    auto sq = [](const Lab& p, const Lab& q) {
        const double dl = p.l - q.l, da = p.a - q.a, db = p.b - q.b;
        return dl * dl + da * da + db * db;
    };
    return sq(lab(x + 1, y), lab(x - 1, y)) + sq(lab(x, y + 1), lab(x, y - 1));
}

std::vector<std::pair<std::size_t, std::size_t>> grid_positions(std::size_t width,
                                                                 std::size_t height, int k) {
    const std::size_t n = width * height;
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw ArgumentError("k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));
    const auto count = static_cast<std::size_t>(k);
    const double s = grid_interval(n, k);

    // Rows spaced ~S apart; the k centers are spread over the rows so that
    // each row holds floor or ceil of k / rows.
    auto rows = static_cast<std::size_t>(std::lround(static_cast<double>(height) / s));
    rows = std::clamp<std::size_t>(rows, 1, count);
    rows = std::max(rows, (count + width - 1) / width);

    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(count);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t in_row = count / rows + (r < count % rows ? 1 : 0);
        const auto y = static_cast<std::size_t>((static_cast<double>(r) + 0.5) *
                                                static_cast<double>(height) /
                                                static_cast<double>(rows));
        for (std::size_t i = 0; i < in_row; ++i) {
            const auto x = static_cast<std::size_t>((static_cast<double>(i) + 0.5) *
                                                    static_cast<double>(width) /
                                                    static_cast<double>(in_row));
            out.emplace_back(x, y);
        }
    }
    return out;
}

std::vector<ClusterCenter> init_centers(const LabImage& lab, const SlicParams& params) {
    params.validate(lab.size());
    const auto w = lab.width(), h = lab.height();
    auto interior = [&](std::size_t x, std::size_t y) {
        return x >= 1 && y >= 1 && x + 2 <= w && y + 2 <= h;
    };

    std::vector<ClusterCenter> centers;
    for (auto [gx, gy] : grid_positions(w, h, params.k)) {
        std::size_t bx = gx, by = gy;
        double best = interior(gx, gy) ? image_gradient(lab, gx, gy)
                                       : std::numeric_limits<double>::infinity();
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const auto x = static_cast<std::ptrdiff_t>(gx) + dx;
                const auto y = static_cast<std::ptrdiff_t>(gy) + dy;
                if (x < 0 || y < 0) continue;
                const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
                if (!interior(ux, uy)) continue;
                const double g = image_gradient(lab, ux, uy);
                if (g < best) {
                    best = g;
                    bx = ux;
                    by = uy;
                }
            }
        }
        const Lab& p = lab(bx, by);
        centers.push_back({p.l, p.a, p.b, static_cast<double>(bx), static_cast<double>(by)});
    }
    return centers;
}

SegmentLabels assign_labels(const LabImage& lab, const std::vector<ClusterCenter>& centers,
                            const SlicParams& params) {
    if (centers.empty()) throw ArgumentError("assign_labels needs at least one center");
    const auto w = lab.width(), h = lab.height();
    const double s = grid_interval(lab.size(), params.k);

    Grid<std::int32_t> labels(w, h, -1);
    std::vector<double> best(lab.size(), std::numeric_limits<double>::infinity());

    auto consider = [&](std::size_t ci, std::size_t x0, std::size_t x1, std::size_t y0,
                        std::size_t y1) {
        const auto& c = centers[ci];
        for (std::size_t y = y0; y < y1; ++y) {
            for (std::size_t x = x0; x < x1; ++x) {
                const std::size_t i = y * w + x;
                const double d = slic_distance(c, lab[i], static_cast<double>(x),
                                               static_cast<double>(y), params.m, s);
                if (d < best[i]) {
                    best[i] = d;
                    labels[i] = static_cast<std::int32_t>(ci);
                }
            }
        }
    };

    if (params.search == SearchMode::Full) {
        for (std::size_t ci = 0; ci < centers.size(); ++ci) consider(ci, 0, w, 0, h);
        return {std::move(labels), static_cast<int>(centers.size())};
    }

    auto lo = [](double v) { return static_cast<std::size_t>(std::max(0.0, std::ceil(v))); };
    auto hi = [](double v, std::size_t limit) {
        if (v < 0.0) return std::size_t{0};
        return std::min(limit, static_cast<std::size_t>(std::floor(v)) + 1);
    };
    for (std::size_t ci = 0; ci < centers.size(); ++ci) {
        const auto& c = centers[ci];
        consider(ci, lo(c.x - s), hi(c.x + s, w), lo(c.y - s), hi(c.y + s, h));
    }

    // Pixels outside every window go to the spatially nearest center.
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            if (labels(x, y) >= 0) continue;
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t ci = 0; ci < centers.size(); ++ci) {
                const double dx = centers[ci].x - static_cast<double>(x);
                const double dy = centers[ci].y - static_cast<double>(y);
                const double d = dx * dx + dy * dy;
                if (d < nearest) {
                    nearest = d;
                    labels(x, y) = static_cast<std::int32_t>(ci);
                }
            }
        }
    }
    return {std::move(labels), static_cast<int>(centers.size())};
}

double assignment_cost(const LabImage& lab, const std::vector<ClusterCenter>& centers,
                       const SegmentLabels& labels, const SlicParams& params) {
    const double s = grid_interval(lab.size(), params.k);
    double total = 0.0;
    for (std::size_t y = 0; y < lab.height(); ++y) {
        for (std::size_t x = 0; x < lab.width(); ++x) {
            const auto& c = centers.at(static_cast<std::size_t>(labels(x, y)));
            total += slic_distance(c, lab(x, y), static_cast<double>(x), static_cast<double>(y),
                                   params.m, s);
        }
    }
    return total;
}

CenterUpdate update_centers(const LabImage& lab, const SegmentLabels& labels,
                            const std::vector<ClusterCenter>& previous) {
    if (!lab.same_shape(labels.labels)) throw ShapeError("labels do not match image size");
    struct Sum {
        double l = 0, a = 0, b = 0, x = 0, y = 0;
        std::size_t n = 0;
    };
    std::vector<Sum> sums(previous.size());
    for (std::size_t y = 0; y < lab.height(); ++y) {
        for (std::size_t x = 0; x < lab.width(); ++x) {
            const auto id = labels(x, y);
            if (id < 0 || static_cast<std::size_t>(id) >= sums.size())
                throw ArgumentError("label " + std::to_string(id) + " has no center");
            auto& sum = sums[static_cast<std::size_t>(id)];
            const auto& p = lab(x, y);
            sum.l += p.l;
            sum.a += p.a;
            sum.b += p.b;
            sum.x += static_cast<double>(x);
            sum.y += static_cast<double>(y);
            ++sum.n;
        }
    }

    CenterUpdate out{previous, std::vector<bool>(previous.size(), false), 0.0};
    for (std::size_t i = 0; i < sums.size(); ++i) {
        const auto& sum = sums[i];
        if (sum.n == 0) {
            out.empty[i] = true;
            continue;
        }
        const double n = static_cast<double>(sum.n);
        const ClusterCenter c{sum.l / n, sum.a / n, sum.b / n, sum.x / n, sum.y / n};
        const auto& p = previous[i];
        out.movement += std::sqrt((c.l - p.l) * (c.l - p.l) + (c.a - p.a) * (c.a - p.a) +
                                  (c.b - p.b) * (c.b - p.b) + (c.x - p.x) * (c.x - p.x) +
                                  (c.y - p.y) * (c.y - p.y));
        out.centers[i] = c;
    }
    return out;
}

SegmentLabels segment(const LabImage& lab, const SlicParams& params, SlicTrace* trace) {
    params.validate(lab.size());
    auto centers = init_centers(lab, params);
    SegmentLabels labels;
    for (int iter = 0; iter < params.max_iters; ++iter) {
        labels = assign_labels(lab, centers, params);
        auto update = update_centers(lab, labels, centers);
        if (trace) {
            trace->costs.push_back(assignment_cost(lab, centers, labels, params));
            trace->movements.push_back(update.movement);
            trace->iterations = iter + 1;
        }
        centers = std::move(update.centers);
        if (update.movement < params.eps) break;
    }
    return enforce_connectivity(labels, min_region_size(lab.size(), params.k));
}

SegmentLabels segment(const RgbImage& image, const SlicParams& params, SlicTrace* trace) {
    return segment(srgb_to_lab(image), params, trace);
}

}  // namespace secam
