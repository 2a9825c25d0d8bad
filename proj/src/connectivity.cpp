#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <set>

#include "secam/slic.hpp"

namespace secam {

namespace {

struct Components {
    Grid<std::int32_t> ids;
    std::vector<std::size_t> sizes;
};

// 4-connected components of equal label value, numbered in raster order of
// their first pixel.
Components label_components(const Grid<std::int32_t>& labels) {
    const auto w = labels.width(), h = labels.height();
    Components out{Grid<std::int32_t>(w, h, -1), {}};
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < labels.size(); ++start) {
        if (out.ids[start] >= 0) continue;
        const auto id = static_cast<std::int32_t>(out.sizes.size());
        const auto value = labels[start];
        std::size_t size = 0;
        out.ids[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            const auto i = stack.back();
            stack.pop_back();
            ++size;
            const auto x = i % w, y = i / w;
            auto visit = [&](std::size_t j) {
                if (out.ids[j] < 0 && labels[j] == value) {
                    out.ids[j] = id;
                    stack.push_back(j);
                }
            };
            if (x > 0) visit(i - 1);
            if (x + 1 < w) visit(i + 1);
            if (y > 0) visit(i - w);
            if (y + 1 < h) visit(i + w);
        }
        out.sizes.push_back(size);
    }
    return out;
}

}  // namespace

SegmentLabels enforce_connectivity(const SegmentLabels& labels, std::size_t min_region_size) {
    const auto w = labels.width(), h = labels.height();
    auto comps = label_components(labels.labels);
    const std::size_t n = comps.sizes.size();

    std::vector<std::set<std::int32_t>> adjacent(n);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const auto a = comps.ids(x, y);
            if (x + 1 < w && comps.ids(x + 1, y) != a) {
                adjacent[a].insert(comps.ids(x + 1, y));
                adjacent[comps.ids(x + 1, y)].insert(a);
            }
            if (y + 1 < h && comps.ids(x, y + 1) != a) {
                adjacent[a].insert(comps.ids(x, y + 1));
                adjacent[comps.ids(x, y + 1)].insert(a);
            }
        }
    }

    std::vector<std::int32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::int32_t c) {
        while (parent[c] != c) {
            parent[c] = parent[parent[c]];
            c = parent[c];
        }
        return c;
    };
    auto& size = comps.sizes;

    // Smallest stray component first; ties by component id.
    using Entry = std::pair<std::size_t, std::int32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (std::size_t c = 0; c < n; ++c) {
        if (size[c] < min_region_size) queue.emplace(size[c], static_cast<std::int32_t>(c));
    }
    std::size_t roots = n;
    while (!queue.empty() && roots > 1) {
        const auto [sz, c] = queue.top();
        queue.pop();
        if (find(c) != c || size[c] != sz) continue;  // stale entry

        std::int32_t target = -1;
        for (auto nb : adjacent[c]) {
            const auto r = find(nb);
            if (r == c) continue;
            if (target < 0 || size[r] > size[target] || (size[r] == size[target] && r < target))
                target = r;
        }
        if (target < 0) continue;

        parent[c] = target;
        size[target] += size[c];
        --roots;
        if (adjacent[target].size() < adjacent[c].size()) std::swap(adjacent[target], adjacent[c]);
        adjacent[target].insert(adjacent[c].begin(), adjacent[c].end());
        adjacent[c].clear();
        if (size[target] < min_region_size) queue.emplace(size[target], target);
    }

    SegmentLabels out{Grid<std::int32_t>(w, h, 0), 0};
    std::vector<std::int32_t> remap(n, -1);
    for (std::size_t i = 0; i < out.labels.size(); ++i) {
        const auto root = find(comps.ids[i]);
        if (remap[root] < 0) remap[root] = out.region_count++;
        out.labels[i] = remap[root];
    }
    return out;
}

}  // namespace secam
