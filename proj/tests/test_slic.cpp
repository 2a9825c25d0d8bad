#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "doctest.h"
#include "secam/errors.hpp"
#include "secam/slic.hpp"
#include "test_support.hpp"

using namespace secam;
using secam::test::all_regions_connected;
using secam::test::is_compact_partition;
using secam::test::kmeans_oracle;

namespace {

LabImage lab_from(std::size_t w, std::size_t h, auto&& fn) {
    LabImage lab(w, h);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) lab(x, y) = fn(x, y);
    return lab;
}

SegmentLabels labels_from(std::size_t w, std::size_t h, std::vector<std::int32_t> v, int regions) {
    return {Grid<std::int32_t>(w, h, std::move(v)), regions};
}

}  // namespace

TEST_CASE("SlicParams validation") {
    SlicParams p;
    CHECK_NOTHROW(p.validate(100));
    p.k = 0;
    CHECK_THROWS_AS(p.validate(100), ArgumentError);
    p.k = 101;
    CHECK_THROWS_AS(p.validate(100), ArgumentError);
    p.k = 4;
    p.m = 0.5;
    CHECK_THROWS_AS(p.validate(100), ArgumentError);
    p.m = 20.5;
    CHECK_THROWS_AS(p.validate(100), ArgumentError);
    p.m = 20;
    CHECK_NOTHROW(p.validate(100));
    p.max_iters = 0;
    CHECK_THROWS_AS(p.validate(100), ArgumentError);
}

TEST_CASE("slic_distance combines lab and scaled xy distance") {
    CHECK(slic_distance(0.0, 5.0, 10.0, 10.0) == 5.0);
    CHECK(slic_distance(3.0, 4.0, 5.0, 2.0) == 13.0);
    const ClusterCenter c{50, 0, 0, 0, 0};
    CHECK(slic_distance(c, Lab{53, 4, 0}, 3.0, 4.0, 10.0, 10.0) == doctest::Approx(10.0));
}

TEST_CASE("image_gradient") {
    SUBCASE("constant image is flat") {
        const auto lab = lab_from(6, 5, [](auto, auto) { return Lab{40, 5, -3}; });
        for (std::size_t y = 1; y <= 3; ++y)
            for (std::size_t x = 1; x <= 4; ++x) CHECK(image_gradient(lab, x, y) == 0.0);
    }
    SUBCASE("L ramp along x gives 2^2") {
        const auto lab = lab_from(6, 5, [](auto x, auto) { return Lab{double(x), 1, 1}; });
        CHECK(image_gradient(lab, 2, 2) == 4.0);
    }
    SUBCASE("matches a direct evaluation on random data") {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(-50, 50);
        const auto lab = lab_from(9, 7, [&](auto, auto) { return Lab{u(rng), u(rng), u(rng)}; });
        for (std::size_t y = 1; y < 6; ++y) {
            for (std::size_t x = 1; x < 8; ++x) {
                const auto &r = lab(x + 1, y), &l = lab(x - 1, y), &d = lab(x, y + 1),
                           &t = lab(x, y - 1);
                const double h2 = (r.l - l.l) * (r.l - l.l) + (r.a - l.a) * (r.a - l.a) +
                                  (r.b - l.b) * (r.b - l.b);
                const double v2 = (d.l - t.l) * (d.l - t.l) + (d.a - t.a) * (d.a - t.a) +
                                  (d.b - t.b) * (d.b - t.b);
                CHECK(image_gradient(lab, x, y) == doctest::Approx(h2 + v2).epsilon(1e-12));
                CHECK(image_gradient(lab, x, y) >= 0.0);
            }
        }
    }
    SUBCASE("border pixels are rejected") {
        const auto lab = lab_from(5, 5, [](auto, auto) { return Lab{}; });
        CHECK_THROWS_AS(image_gradient(lab, 0, 2), ArgumentError);
        CHECK_THROWS_AS(image_gradient(lab, 2, 4), ArgumentError);
        CHECK_THROWS_AS(image_gradient(lab, 4, 1), ArgumentError);
    }
}

TEST_CASE("init_centers") {
    SlicParams p;
    SUBCASE("100x100, k=4 sits on the S=50 grid") {
        const auto pos = grid_positions(100, 100, 4);
        using P = std::pair<std::size_t, std::size_t>;
        CHECK(pos == std::vector<P>{{25, 25}, {75, 25}, {25, 75}, {75, 75}});
        CHECK(grid_interval(10000, 4) == 50.0);
    }
    SUBCASE("224x224, k=49 is the 7x7 grid with spacing 32") {
        const auto pos = grid_positions(224, 224, 49);
        REQUIRE(pos.size() == 49);
        for (std::size_t i = 0; i < 49; ++i) {
            CHECK(pos[i].first == 16 + 32 * (i % 7));
            CHECK(pos[i].second == 16 + 32 * (i / 7));
        }
    }
    SUBCASE("constant image leaves centers on the grid") {
        const auto lab = lab_from(100, 100, [](auto, auto) { return Lab{70, 1, 2}; });
        p.k = 4;
        const auto centers = init_centers(lab, p);
        REQUIRE(centers.size() == 4);
        CHECK(centers[0] == ClusterCenter{70, 1, 2, 25, 25});
        CHECK(centers[3] == ClusterCenter{70, 1, 2, 75, 75});
    }
    SUBCASE("center moves to the unique gradient minimum of its 3x3 window") {
        // L = ((x-26)^2 + (y-26)^2) / 2 gives G = 4(x-26)^2 + 4(y-26)^2,
        // minimal at (26, 26), which is the diagonal neighbour of (25, 25).
        const auto lab = lab_from(100, 100, [](auto x, auto y) {
            const double dx = double(x) - 26, dy = double(y) - 26;
            return Lab{0.5 * (dx * dx + dy * dy), 0, 0};
        });
        p.k = 4;
        const auto centers = init_centers(lab, p);
        CHECK(centers[0].x == 26);
        CHECK(centers[0].y == 26);
        CHECK(centers[0].l == 0.0);
    }
    SUBCASE("a dark spot next to a grid point pushes the center off it") {
        // Spot at (26, 25): G > 0 at its 4-neighbours (25,25), (26,24),
        // (26,26); zero elsewhere. First zero in row-major order is (24,24).
        auto lab = lab_from(100, 100, [](auto, auto) { return Lab{80, 0, 0}; });
        lab(26, 25) = Lab{5, 0, 0};
        REQUIRE(image_gradient(lab, 25, 25) > 0.0);
        p.k = 4;
        const auto centers = init_centers(lab, p);
        CHECK(centers[0].x == 24);
        CHECK(centers[0].y == 24);
        CHECK(image_gradient(lab, 24, 24) == 0.0);
    }
    SUBCASE("k larger than the pixel count") {
        const auto lab = lab_from(3, 3, [](auto, auto) { return Lab{}; });
        p.k = 10;
        CHECK_THROWS_AS(init_centers(lab, p), ArgumentError);
    }
    SUBCASE("center count equals k over many shapes") {
        std::mt19937_64 rng(8);
        std::uniform_int_distribution<std::size_t> dim(1, 120);
        for (int trial = 0; trial < 300; ++trial) {
            const auto w = dim(rng), h = dim(rng);
            std::uniform_int_distribution<int> kd(1, static_cast<int>(std::min<std::size_t>(w * h, 400)));
            const int k = kd(rng);
            const auto pos = grid_positions(w, h, k);
            CAPTURE(w);
            CAPTURE(h);
            CAPTURE(k);
            CHECK(pos.size() == static_cast<std::size_t>(k));
            std::set<std::pair<std::size_t, std::size_t>> unique(pos.begin(), pos.end());
            CHECK(unique.size() == pos.size());
            for (auto [x, y] : pos) {
                CHECK(x < w);
                CHECK(y < h);
            }
        }
    }
}

TEST_CASE("assign_labels") {
    SlicParams p;
    p.search = SearchMode::Full;
    SUBCASE("ties go to the lower center index") {
        const auto lab = lab_from(3, 1, [](auto, auto) { return Lab{50, 0, 0}; });
        p.k = 2;
        const std::vector<ClusterCenter> centers{{50, 0, 0, 0, 0}, {50, 0, 0, 2, 0}};
        const auto labels = assign_labels(lab, centers, p);
        CHECK(labels(0, 0) == 0);
        CHECK(labels(1, 0) == 0);  // equidistant
        CHECK(labels(2, 0) == 1);
        p.search = SearchMode::Windowed;
        CHECK(assign_labels(lab, centers, p) == labels);
    }
    SUBCASE("uniform colour, full search: Voronoi partition of center positions") {
        const auto lab = lab_from(40, 30, [](auto, auto) { return Lab{60, 10, 10}; });
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> ux(0, 39.99), uy(0, 29.99);
        p.k = 7;
        std::vector<ClusterCenter> centers;
        for (int i = 0; i < 7; ++i) centers.push_back({60, 10, 10, ux(rng), uy(rng)});
        const auto labels = assign_labels(lab, centers, p);
        for (std::size_t y = 0; y < 30; ++y) {
            for (std::size_t x = 0; x < 40; ++x) {
                int nearest = 0;
                double best = 1e300;
                for (int c = 0; c < 7; ++c) {
                    const double d = std::hypot(centers[c].x - x, centers[c].y - y);
                    if (d < best) {
                        best = d;
                        nearest = c;
                    }
                }
                CHECK(labels(x, y) == nearest);
            }
        }
    }
    SUBCASE("windowed search assigns stragglers to the nearest center") {
        const auto lab = lab_from(50, 50, [](auto, auto) { return Lab{50, 0, 0}; });
        p.search = SearchMode::Windowed;
        p.k = 25;  // S = 10
        const std::vector<ClusterCenter> centers{{50, 0, 0, 2, 2}, {50, 0, 0, 5, 40}};
        const auto labels = assign_labels(lab, centers, p);
        CHECK(labels(49, 0) == 0);
        CHECK(labels(49, 49) == 1);
        for (auto v : labels.labels.values()) CHECK(v >= 0);
    }
    SUBCASE("no centers") {
        const auto lab = lab_from(2, 2, [](auto, auto) { return Lab{}; });
        CHECK_THROWS_AS(assign_labels(lab, {}, p), ArgumentError);
    }
}

TEST_CASE("update_centers") {
    SUBCASE("single-pixel cluster equals that pixel") {
        const auto lab = lab_from(2, 1, [](auto x, auto) { return Lab{double(10 * x), 3, -4}; });
        const auto labels = labels_from(2, 1, {0, 1}, 2);
        const auto up = update_centers(lab, labels, {{}, {}});
        CHECK(up.centers[1] == ClusterCenter{10, 3, -4, 1, 0});
    }
    SUBCASE("two pixels at x=0 and x=10") {
        const auto lab = lab_from(11, 1, [](auto, auto) { return Lab{20, 0, 0}; });
        std::vector<std::int32_t> v(11, 1);
        v[0] = v[10] = 0;
        const auto up = update_centers(lab, labels_from(11, 1, v, 2), {{}, {}});
        CHECK(up.centers[0].x == 5.0);
        CHECK(up.centers[0].l == 20.0);
    }
    SUBCASE("empty clusters keep their previous center and are flagged") {
        const auto lab = lab_from(2, 2, [](auto, auto) { return Lab{1, 2, 3}; });
        const ClusterCenter keep{9, 9, 9, 1, 1};
        const auto up = update_centers(lab, labels_from(2, 2, {0, 0, 0, 0}, 2), {{}, keep});
        CHECK(up.empty == std::vector<bool>{false, true});
        CHECK(up.centers[1] == keep);
    }
    SUBCASE("random partition matches an independent accumulation pass") {
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> u(-60, 60);
        const auto lab = lab_from(23, 17, [&](auto, auto) { return Lab{u(rng), u(rng), u(rng)}; });
        const auto labels = secam::test::random_partition(23, 17, 9, rng);
        const auto up = update_centers(lab, labels, std::vector<ClusterCenter>(9));
        for (int c = 0; c < 9; ++c) {
            // Second pass: collect members first, then average.
            std::vector<std::pair<std::size_t, std::size_t>> members;
            for (std::size_t y = 0; y < 17; ++y)
                for (std::size_t x = 0; x < 23; ++x)
                    if (labels(x, y) == c) members.emplace_back(x, y);
            ClusterCenter mean{};
            for (auto [x, y] : members) {
                mean.l += lab(x, y).l / members.size();
                mean.a += lab(x, y).a / members.size();
                mean.b += lab(x, y).b / members.size();
                mean.x += double(x) / members.size();
                mean.y += double(y) / members.size();
            }
            CHECK(up.centers[c].l == doctest::Approx(mean.l));
            CHECK(up.centers[c].a == doctest::Approx(mean.a));
            CHECK(up.centers[c].b == doctest::Approx(mean.b));
            CHECK(up.centers[c].x == doctest::Approx(mean.x));
            CHECK(up.centers[c].y == doctest::Approx(mean.y));
        }
    }
}

TEST_CASE("enforce_connectivity") {
    SUBCASE("connected labels only get compacted") {
        // Ids 5 and 2 in raster order become 0 and 1.
        const auto in = labels_from(4, 2, {5, 5, 2, 2, 5, 5, 2, 2}, 6);
        const auto out = enforce_connectivity(in, 2);
        CHECK(out.region_count == 2);
        CHECK(out.labels.values()[0] == 0);
        CHECK(out.labels(2, 0) == 1);
        CHECK(out.labels(3, 1) == 1);
    }
    SUBCASE("isolated pixel is absorbed by its surrounding region") {
        std::vector<std::int32_t> v(25, 1);
        v[12] = 0;
        const auto out = enforce_connectivity(labels_from(5, 5, v, 2), 4);
        CHECK(out.region_count == 1);
        for (auto id : out.labels.values()) CHECK(id == 0);
    }
    SUBCASE("stray segment joins its largest neighbour") {
        // Column B (size 3) between A (size 9) and C (size 6); B is stray
        // for min size 4 and must merge into A.
        std::vector<std::int32_t> v;
        for (int r = 0; r < 3; ++r) v.insert(v.end(), {0, 0, 0, 1, 2, 2});
        const auto out = enforce_connectivity(labels_from(6, 3, v, 3), 4);
        CHECK(out.region_count == 2);
        CHECK(out.labels(3, 1) == out.labels(0, 0));
        CHECK(out.labels(4, 1) != out.labels(0, 0));
    }
    SUBCASE("large disjoint pieces of one label become separate regions") {
        const auto in = labels_from(5, 2, {0, 0, 1, 0, 0, 0, 0, 1, 0, 0}, 2);
        const auto out = enforce_connectivity(in, 1);
        CHECK(out.region_count == 3);
        CHECK(all_regions_connected(out));
    }
    SUBCASE("checkerboard resolves to a connected partition") {
        for (int min_size : {1, 2, 5, 20}) {
            std::vector<std::int32_t> v(12 * 10);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = ((i % 12) + (i / 12)) % 2;
            const auto out = enforce_connectivity(labels_from(12, 10, v, 2), min_size);
            CHECK(is_compact_partition(out));
            CHECK(all_regions_connected(out));
            std::size_t total = 0;
            for (auto s : out.region_sizes()) {
                total += s;
                if (out.region_count > 1) CHECK(s >= static_cast<std::size_t>(min_size));
            }
            CHECK(total == 120);
        }
    }
    SUBCASE("random labellings always end connected and compact") {
        std::mt19937_64 rng(33);
        for (int trial = 0; trial < 40; ++trial) {
            const auto in = secam::test::random_partition(17, 13, 1 + trial % 6, rng);
            const auto out = enforce_connectivity(in, static_cast<std::size_t>(trial % 9));
            CHECK(is_compact_partition(out));
            CHECK(all_regions_connected(out));
        }
    }
}

TEST_CASE("segment") {
    SlicParams p;
    SUBCASE("uniform 64x64, k=4, full search: four quadrants, equal to k-means") {
        const auto img = secam::test::uniform_image(64, 64, 120, 80, 200);
        p.k = 4;
        p.search = SearchMode::Full;
        const auto labels = segment(img, p);
        CHECK(labels.region_count == 4);
        // Row/column 32 is equidistant from both centers and goes to the
        // lower index.
        CHECK(labels.region_sizes() == std::vector<std::size_t>{33 * 33, 31 * 33, 33 * 31, 31 * 31});
        CHECK(labels(0, 0) == 0);
        CHECK(labels(63, 0) == 1);
        CHECK(labels(0, 63) == 2);
        CHECK(labels(63, 63) == 3);
        CHECK(labels.labels == kmeans_oracle(srgb_to_lab(img), p));
    }
    SUBCASE("k=1 gives one region") {
        std::mt19937_64 rng(1);
        p.k = 1;
        const auto labels = segment(secam::test::random_image(30, 20, rng), p);
        CHECK(labels.region_count == 1);
    }
    SUBCASE("natural 224x224 image, k=49") {
        const auto img = load_png(secam::test::data_dir() / "chelsea_224.png");
        const auto labels = segment(img, p);
        CHECK(labels.region_count >= 40);
        CHECK(labels.region_count <= 60);
        CHECK(is_compact_partition(labels));
        CHECK(all_regions_connected(labels));
    }
    SUBCASE("deterministic") {
        std::mt19937_64 rng(5);
        const auto img = secam::test::random_image(48, 40, rng);
        p.k = 20;
        CHECK(segment(img, p) == segment(img, p));
    }
    SUBCASE("labels of a constant image do not depend on m") {
        const auto img = secam::test::uniform_image(50, 37, 10, 200, 90);
        p.k = 12;
        for (auto mode : {SearchMode::Full, SearchMode::Windowed}) {
            p.search = mode;
            p.m = 1;
            const auto base = segment(img, p);
            for (double m : {2.0, 10.0, 20.0}) {
                p.m = m;
                CHECK(segment(img, p) == base);
            }
        }
    }
    SUBCASE("partition holds after every stage") {
        std::mt19937_64 rng(19);
        const auto lab = srgb_to_lab(secam::test::random_image(40, 40, rng));
        p.k = 16;
        auto centers = init_centers(lab, p);
        for (int iter = 0; iter < 3; ++iter) {
            const auto labels = assign_labels(lab, centers, p);
            std::size_t total = 0;
            for (auto s : labels.region_sizes()) total += s;
            CHECK(total == lab.size());
            centers = update_centers(lab, labels, centers).centers;
        }
        const auto final_labels = segment(lab, p);
        std::size_t total = 0;
        for (auto s : final_labels.region_sizes()) total += s;
        CHECK(total == lab.size());
    }
    SUBCASE("full-search assignment cost does not increase") {
        for (std::uint64_t seed = 100; seed < 105; ++seed) {
            std::mt19937_64 rng(seed);
            const auto img = secam::test::random_image(48, 48, rng);
            p.search = SearchMode::Full;
            p.k = 25;
            SlicTrace trace;
            segment(img, p, &trace);
            for (std::size_t i = 1; i < trace.costs.size(); ++i)
                CHECK(trace.costs[i] <= trace.costs[i - 1] + 1e-6);
        }
    }
}
