#include <random>

#include "doctest.h"
#include "secam/errors.hpp"
#include "secam/metrics.hpp"
#include "test_support.hpp"

using namespace secam;

namespace {

Mask box_mask(std::size_t w, std::size_t h, const BBox& b) {
    Mask m(w, h, 0);
    for (int y = b.y_min; y < b.y_max; ++y)
        for (int x = b.x_min; x < b.x_max; ++x) m(x, y) = 1;
    return m;
}

BBox random_box(std::mt19937_64& rng, int w, int h) {
    std::uniform_int_distribution<int> ux(0, w - 1), uy(0, h - 1);
    int x0 = ux(rng), x1 = ux(rng), y0 = uy(rng), y1 = uy(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    return {x0, y0, x1 + 1, y1 + 1};
}

}  // namespace

TEST_CASE("bbox_of_mask") {
    Mask m(10, 10, 0);
    CHECK_THROWS_AS(bbox_of_mask(m), EmptyMaskError);
    m(3, 5) = 1;
    CHECK(bbox_of_mask(m) == BBox(3, 5, 4, 6));
    m = Mask(10, 10, 1);
    CHECK(bbox_of_mask(m) == BBox(0, 0, 10, 10));
    m = Mask(10, 10, 0);
    m(0, 0) = m(9, 9) = 1;
    CHECK(bbox_of_mask(m) == BBox(0, 0, 10, 10));
}

TEST_CASE("iou") {
    const BBox a(0, 0, 10, 10);
    CHECK(iou(a, a) == 1.0);
    CHECK(iou(a, BBox(10, 0, 20, 10)) == 0.0);
    CHECK(iou(a, BBox(20, 20, 30, 30)) == 0.0);
    CHECK(iou(a, BBox(5, 0, 15, 10)) == 1.0 / 3.0);
    CHECK(iou(a, BBox(0, 0, 10, 5)) == 0.5);

    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 500; ++trial) {
        const auto p = random_box(rng, 30, 30), q = random_box(rng, 30, 30);
        const double v = iou(p, q);
        CHECK(v == iou(q, p));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK((v == 1.0) == (p == q));
    }
}

TEST_CASE("ebpg") {
    const BBox g(10, 10, 30, 30);
    SUBCASE("inside and disjoint") {
        CHECK(ebpg(box_mask(40, 40, BBox(12, 12, 20, 20)), g) == 1.0);
        CHECK(ebpg(box_mask(40, 40, BBox(0, 0, 5, 5)), g) == 0.0);
        CHECK(ebpg(BBox(12, 12, 20, 20), g) == 1.0);
        CHECK(ebpg(BBox(0, 0, 5, 5), g) == 0.0);
    }
    SUBCASE("100 pixels, 75 inside") {
        const BBox s(5, 10, 25, 15);  // 20 x 5 pixels, columns 10..24 inside
        CHECK(ebpg(box_mask(40, 40, s), g) == 0.75);
        CHECK(ebpg(s, g) == 0.75);
    }
    SUBCASE("empty explanation") {
        CHECK_THROWS_AS(ebpg(Mask(5, 5, 0), BBox(0, 0, 2, 2)), EmptyMaskError);
        CHECK_THROWS_AS(ebpg(Mask(5, 5, 0), std::vector<BBox>{BBox(0, 0, 2, 2)}), EmptyMaskError);
    }
    SUBCASE("random masks against a per-pixel count") {
        std::mt19937_64 rng(2);
        std::bernoulli_distribution on(0.3);
        for (int trial = 0; trial < 300; ++trial) {
            Mask m(25, 20, 0);
            for (auto& v : m.values()) v = on(rng);
            m(trial % 25, trial % 20) = 1;
            const auto b = random_box(rng, 25, 20);
            long inside = 0, total = 0;
            for (int y = 0; y < 20; ++y)
                for (int x = 0; x < 25; ++x)
                    if (m(x, y)) {
                        ++total;
                        if (x >= b.x_min && x < b.x_max && y >= b.y_min && y < b.y_max) ++inside;
                    }
            const double v = ebpg(m, b);
            CHECK(v == double(inside) / double(total));
            CHECK((v == 1.0) == (inside == total));
        }
    }
    SUBCASE("union of boxes counts overlap once") {
        const Mask m = box_mask(20, 20, BBox(0, 0, 10, 10));
        const std::vector<BBox> boxes{BBox(0, 0, 5, 10), BBox(3, 0, 6, 10)};
        CHECK(ebpg(m, boxes) == 0.6);
    }
}

TEST_CASE("evaluate") {
    const GroundTruth truth{"img", 1, {BBox(4, 6, 14, 16)}};
    SUBCASE("mask equal to the truth box") {
        const auto r = evaluate(box_mask(20, 20, truth.boxes[0]), truth);
        CHECK(r.iou == 1.0);
        CHECK(r.ebpg == 1.0);
        CHECK(r.image_id == "img");
        CHECK(r.mask_pixels == 100);
        CHECK(r.explanation_box == truth.boxes[0]);
    }
    SUBCASE("mask covering the top half of the truth box") {
        const auto r = evaluate(box_mask(20, 20, BBox(4, 6, 14, 11)), truth);
        CHECK(r.iou == 0.5);
        CHECK(r.ebpg == 1.0);
    }
    SUBCASE("best-matching box is used for iou") {
        GroundTruth two{"x", 0, {BBox(0, 0, 3, 3), BBox(10, 10, 20, 20)}};
        const auto r = evaluate(box_mask(20, 20, BBox(10, 10, 20, 20)), two);
        CHECK(r.iou == 1.0);
        CHECK(r.matched_truth == two.boxes[1]);
    }
    SUBCASE("box outside the image") {
        const GroundTruth bad{"b", 0, {BBox(0, 0, 30, 5)}};
        CHECK_THROWS_AS(evaluate(box_mask(20, 20, BBox(0, 0, 2, 2)), bad), ShapeError);
    }
    SUBCASE("translation equivariance") {
        std::mt19937_64 rng(3);
        std::bernoulli_distribution on(0.4);
        for (int trial = 0; trial < 100; ++trial) {
            Mask m(40, 40, 0);
            for (int y = 0; y < 20; ++y)
                for (int x = 0; x < 20; ++x) m(x, y) = on(rng);
            m(5, 5) = 1;
            const auto g = random_box(rng, 20, 20);
            const int dx = trial % 20, dy = (trial * 7) % 20;
            Mask shifted(40, 40, 0);
            for (int y = 0; y < 20; ++y)
                for (int x = 0; x < 20; ++x) shifted(x + dx, y + dy) = m(x, y);
            const auto a = evaluate(m, {"a", 0, {g}});
            const auto b = evaluate(shifted, {"a", 0, {BBox(g.x_min + dx, g.y_min + dy, g.x_max + dx, g.y_max + dy)}});
            CHECK(a.iou == b.iou);
            CHECK(a.ebpg == b.ebpg);
        }
    }
}

TEST_CASE("ground truth files") {
    secam::test::TempDir dir;
    SUBCASE("JSON round trip") {
        const GroundTruth t{"bird_01", 94, {BBox(1, 2, 30, 40), BBox(5, 5, 6, 6)}};
        write_ground_truth(t, dir.path() / "t.json");
        const auto back = read_ground_truth(dir.path() / "t.json");
        CHECK(back.image_id == t.image_id);
        CHECK(back.class_id == 94);
        CHECK(back.boxes == t.boxes);
    }
    SUBCASE("malformed JSON") {
        secam::test::write_file(dir.path() / "a.json", R"({"image_id": "x", "class_id": 1, "boxes": []})");
        CHECK_THROWS_AS(read_ground_truth(dir.path() / "a.json"), Error);
        secam::test::write_file(dir.path() / "b.json", R"({"image_id": "x", "class_id": 1, "boxes": [[3, 3, 3, 9]]})");
        CHECK_THROWS_AS(read_ground_truth(dir.path() / "b.json"), Error);
        secam::test::write_file(dir.path() / "c.json", "{");
        CHECK_THROWS_AS(read_ground_truth(dir.path() / "c.json"), Error);
        CHECK_THROWS_AS(read_ground_truth(dir.path() / "missing.json"), Error);
    }
    SUBCASE("VOC annotation") {
        secam::test::write_file(dir.path() / "2008_000001.xml", R"(<annotation>
  <filename>2008_000001.jpg</filename>
  <size><width>500</width><height>375</height><depth>3</depth></size>
  <object>
    <name>bird</name>
    <bndbox><xmin>1</xmin><ymin>10</ymin><xmax>100</xmax><ymax>200</ymax></bndbox>
  </object>
  <object>
    <name>person</name>
    <bndbox><xmin>150</xmin><ymin>20</ymin><xmax>300</xmax><ymax>375</ymax></bndbox>
  </object>
</annotation>
)");
        const auto all = ground_truth_from_voc(dir.path() / "2008_000001.xml", 3);
        CHECK(all.image_id == "2008_000001");
        CHECK(all.class_id == 3);
        REQUIRE(all.boxes.size() == 2);
        CHECK(all.boxes[0] == BBox(0, 9, 100, 200));
        CHECK(all.boxes[1] == BBox(149, 19, 300, 375));
        CHECK(all.boxes[1].fits(500, 375));

        const auto birds = ground_truth_from_voc(dir.path() / "2008_000001.xml", 3, "bird", "custom");
        CHECK(birds.image_id == "custom");
        CHECK(birds.boxes == std::vector<BBox>{BBox(0, 9, 100, 200)});
        CHECK_THROWS_AS(ground_truth_from_voc(dir.path() / "2008_000001.xml", 3, "cat"), Error);

        secam::test::write_file(dir.path() / "bad.xml", "<annotation><object>");
        CHECK_THROWS_AS(ground_truth_from_voc(dir.path() / "bad.xml", 0), Error);
    }
}

TEST_CASE("CSV report") {
    CHECK(report_csv_header() == "image_id,method,iou,ebpg,runtime_ms");
    MetricReport r;
    r.image_id = "a";
    r.iou = 0.5;
    r.ebpg = 1.0 / 3.0;
    r.runtime_ms = 12.34567;
    CHECK(report_csv_row(r) == "a,secam,0.500000,0.333333,12.346");
}
