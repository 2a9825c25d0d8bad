#include "secam/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "secam/cam.hpp"
#include "secam/errors.hpp"
#include "secam/metrics.hpp"
#include "secam/pipeline.hpp"
#include "secam/render.hpp"

namespace secam::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SlicOptions {
    int k = 49;
    double m = 10.0;
    int max_iters = 10;
    std::string search = "windowed";

    SlicParams params() const {
        SlicParams p;
        p.k = k;
        p.m = m;
        p.max_iters = max_iters;
        p.search = search == "full" ? SearchMode::Full : SearchMode::Windowed;
        return p;
    }
    std::string tag() const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "k%d_m%g", k, m);
        return buf;
    }
};

struct RuleOptions {
    std::string rule = "topn";
    int n = 3;
    double t = 0.5;

    SelectionRule selection() const {
        return rule == "threshold" ? SelectionRule::threshold(t) : SelectionRule::top_n(n);
    }
};

struct Options {
    std::string image;
    std::string bundle;
    std::string truth;
    std::string explanations;
    std::string out_dir = ".";
    std::string style = "masked";
    std::string xml;
    std::string object_name;
    std::string image_id;
    std::string out_file;
    double alpha = 0.5;
    double dim = 0.0;
    int class_id = 0;
    int repeat = 10;
    bool timing = false;
    SlicOptions slic;
    RuleOptions rule;
};

void add_slic_options(CLI::App* cmd, SlicOptions& o) {
    cmd->add_option("--k", o.k, "Requested number of superpixels")->check(CLI::PositiveNumber);
    cmd->add_option("--m", o.m, "Compactness")->check(CLI::Range(1.0, 20.0));
    cmd->add_option("--max-iters", o.max_iters, "SLIC iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--search", o.search, "Candidate centers per pixel")
        ->check(CLI::IsMember({"windowed", "full"}));
}

void add_rule_options(CLI::App* cmd, RuleOptions& o) {
    cmd->add_option("--rule", o.rule, "Region selection rule")
        ->check(CLI::IsMember({"topn", "threshold"}));
    cmd->add_option("--n", o.n, "Regions kept by topn")->check(CLI::PositiveNumber);
    cmd->add_option("--t", o.t, "Fraction of the max region value for threshold")
        ->check(CLI::Range(0.0, 1.0));
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

std::string stem_of(const fs::path& p) { return p.stem().string(); }

Grid<std::uint16_t> label_image(const SegmentLabels& labels) {
    if (labels.region_count > 65535) throw ArgumentError("too many regions for a 16-bit PNG");
    Grid<std::uint16_t> out(labels.width(), labels.height());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint16_t>(labels.labels[i]);
    return out;
}

json rule_json(const SelectionRule& rule) {
    if (rule.kind == SelectionRule::Kind::TopN) return {{"kind", "top_n"}, {"n", rule.n}};
    return {{"kind", "threshold"}, {"t", rule.t}};
}

json timing_json(const StageTiming& t) {
    return {{"segment_ms", t.segment_ms},
            {"cam_ms", t.cam_ms},
            {"select_ms", t.select_ms},
            {"total_ms", t.total_ms()}};
}

void print_timing(std::ostream& out, const StageTiming& t) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "stage      ms\nsegment    %.3f\ncam        %.3f\nselect     %.3f\ntotal      %.3f\n",
                  t.segment_ms, t.cam_ms, t.select_ms, t.total_ms());
    out << buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
}

RgbImage load_image_for(const Options& o, const ExplanationInputs* inputs) {
    if (!o.image.empty()) return load_png(o.image);
    if (inputs && !inputs->image_path.empty()) return load_png(inputs->image_path);
    throw ArgumentError("no input image: pass --image or a bundle that names one");
}

std::string image_stem(const Options& o, const ExplanationInputs* inputs) {
    if (!o.image.empty()) return stem_of(o.image);
    return stem_of(inputs->image_path);
}

int cmd_segment(const Options& o, std::ostream& out) {
    const auto image = load_png(o.image);
    const auto params = o.slic.params();
    const auto start = std::chrono::steady_clock::now();
    const auto labels = segment(image, params);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    const auto dir = prepare_out_dir(o.out_dir);
    const auto base = stem_of(o.image);
    const auto tag = o.slic.tag();
    const auto label_png = dir / (base + "_labels_" + tag + ".png");
    const auto label_npy = dir / (base + "_labels_" + tag + ".npy");
    const auto boundary_png = dir / (base + "_segment_" + tag + ".png");
    save_gray16_png(label_image(labels), label_png);
    write_int32_npy(labels.labels.values(), {labels.height(), labels.width()}, label_npy);
    save_png(draw_boundaries(image, labels, RenderStyle{}.boundary_color), boundary_png);

    out << "regions " << labels.region_count << "\n"
        << label_png.string() << "\n"
        << label_npy.string() << "\n"
        << boundary_png.string() << "\n";
    if (o.timing) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "segment_ms %.3f\n", ms);
        out << buf;
    }
    return kOk;
}

int cmd_cam(const Options& o, std::ostream& out) {
    const auto inputs = read_bundle(o.bundle);
    auto cam = compute_cam(inputs);
    json report{{"class_id", inputs.class_id},
                {"class_name", inputs.class_name},
                {"class_score", class_score(cam)},
                {"height", cam.height()},
                {"width", cam.width()}};
    if (inputs.logits) {
        const auto probs = softmax(inputs.logits->to_double());
        const auto c = static_cast<std::size_t>(inputs.class_id);
        report["logit"] = inputs.logits->at(c);
        report["probability"] = probs[c];
    }
    if (inputs.weights.mode == WeightMode::Spatial) relu_inplace(cam);

    const auto dir = prepare_out_dir(o.out_dir);
    const auto path = dir / (stem_of(inputs.image_path) + "_cam.npy");
    std::vector<float> values(cam.values().values().begin(), cam.values().values().end());
    write_tensor(Tensor({cam.height(), cam.width()}, std::move(values)), path);
    report["cam_path"] = path.filename().string();
    out << report.dump(2) << "\n";
    return kOk;
}

json explanation_json(const std::string& image_id, const ExplanationInputs& inputs,
                      const PipelineResult& run, const SlicParams& params,
                      const std::string& mask_name) {
    const auto& e = run.explanation;
    json doc{{"image_id", image_id},
             {"method", "secam"},
             {"class_id", e.class_id},
             {"class_name", e.class_name},
             {"width", run.labels.width()},
             {"height", run.labels.height()},
             {"slic",
              {{"k", params.k},
               {"m", params.m},
               {"max_iters", params.max_iters},
               {"eps", params.eps},
               {"search", params.search == SearchMode::Full ? "full" : "windowed"},
               {"region_count", run.labels.region_count}}},
             {"rule", rule_json(e.rule)},
             {"region_values", e.region_values},
             {"selected", e.selected},
             {"mask_path", mask_name},
             {"class_score", class_score(compute_cam(inputs))}};
    if (inputs.logits) {
        const auto probs = softmax(inputs.logits->to_double());
        doc["probability"] = probs[static_cast<std::size_t>(inputs.class_id)];
    }
    doc["timing"] = timing_json(run.timing);
    return doc;
}

int cmd_explain(const Options& o, std::ostream& out) {
    const auto inputs = read_bundle(o.bundle);
    const auto image = load_image_for(o, &inputs);
    const auto params = o.slic.params();
    const auto rule = o.rule.selection();
    const auto run = run_pipeline(inputs, image, params, rule);

    const auto dir = prepare_out_dir(o.out_dir);
    const auto id = image_stem(o, &inputs);
    const auto base = id + "_secam_" + rule.describe() + "_k" + std::to_string(params.k);
    const auto mask_name = base + "_mask.png";
    save_mask_png(run.explanation.mask, dir / mask_name);
    save_png(render_masked(image, run.explanation, o.dim), dir / (base + ".png"));
    write_text(dir / (base + ".json"),
               explanation_json(id, inputs, run, params, mask_name).dump(2) + "\n");

    out << (dir / (base + ".json")).string() << "\n";
    out << "selected";
    for (int r : run.explanation.selected) out << " " << r;
    out << "\n";
    if (o.timing) print_timing(out, run.timing);
    return kOk;
}

int cmd_render(const Options& o, std::ostream& out) {
    std::optional<ExplanationInputs> inputs;
    if (!o.bundle.empty()) inputs = read_bundle(o.bundle);
    const auto image = load_image_for(o, inputs ? &*inputs : nullptr);
    const auto id = image_stem(o, inputs ? &*inputs : nullptr);
    const auto dir = prepare_out_dir(o.out_dir);

    RgbImage result;
    std::string name;
    if (o.style == "boundaries") {
        result = draw_boundaries(image, segment(image, o.slic.params()), RenderStyle{}.boundary_color);
        name = id + "_boundaries_" + o.slic.tag() + ".png";
    } else {
        if (!inputs) throw ArgumentError("--style " + o.style + " needs --bundle");
        if (o.style == "heatmap") {
            const auto cam = image_cam(*inputs, image.height(), image.width());
            result = overlay_heatmap(image, cam, o.alpha);
            char buf[32];
            std::snprintf(buf, sizeof buf, "a%g", o.alpha);
            name = id + "_heatmap_" + buf + ".png";
        } else {
            const auto rule = o.rule.selection();
            const auto run = run_pipeline(*inputs, image, o.slic.params(), rule);
            result = render_masked(image, run.explanation, o.dim);
            name = id + "_masked_" + rule.describe() + "_" + o.slic.tag() + ".png";
        }
    }
    save_png(result, dir / name);
    out << (dir / name).string() << "\n";
    return kOk;
}

std::vector<fs::path> json_files(const fs::path& p) {
    std::vector<fs::path> files;
    if (fs::is_directory(p)) {
        for (const auto& entry : fs::directory_iterator(p)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json")
                files.push_back(entry.path());
        }
    } else {
        files.push_back(p);
    }
    std::sort(files.begin(), files.end());
    return files;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
    std::map<std::string, GroundTruth> truths;
    for (const auto& f : json_files(o.truth)) {
        auto gt = read_ground_truth(f);
        truths[gt.image_id] = std::move(gt);
    }

    std::vector<MetricReport> rows;
    std::vector<std::string> unmatched;
    for (const auto& f : json_files(o.explanations)) {
        std::ifstream in(f);
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error&) {
            continue;
        }
        if (!doc.is_object() || !doc.contains("mask_path") || !doc.contains("image_id")) continue;
        const auto id = doc["image_id"].get<std::string>();
        const auto it = truths.find(id);
        if (it == truths.end()) {
            unmatched.push_back(id);
            continue;
        }
        const auto mask = load_mask_png(f.parent_path() / doc["mask_path"].get<std::string>());
        auto report = evaluate(mask, it->second);
        report.method = doc.value("method", "secam");
        if (doc.contains("timing")) report.runtime_ms = doc["timing"].value("total_ms", 0.0);
        if (doc.contains("selected")) report.selected_count = doc["selected"].size();
        if (doc.contains("region_values")) report.region_count = doc["region_values"].size();
        rows.push_back(report);
    }

    for (const auto& id : unmatched) err << "no ground truth for image_id " << id << "\n";
    if (rows.empty()) {
        err << "no explanation matched any ground truth\n";
        return kNoData;
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return std::tie(a.image_id, a.method) < std::tie(b.image_id, b.method);
    });

    std::string csv = report_csv_header() + "\n";
    json doc = json::array();
    for (const auto& r : rows) {
        csv += report_csv_row(r) + "\n";
        doc.push_back({{"image_id", r.image_id},
                       {"method", r.method},
                       {"iou", r.iou},
                       {"ebpg", r.ebpg},
                       {"runtime_ms", r.runtime_ms},
                       {"explanation_box",
                        {r.explanation_box.x_min, r.explanation_box.y_min, r.explanation_box.x_max,
                         r.explanation_box.y_max}},
                       {"matched_truth",
                        {r.matched_truth.x_min, r.matched_truth.y_min, r.matched_truth.x_max,
                         r.matched_truth.y_max}},
                       {"region_count", r.region_count},
                       {"selected_count", r.selected_count},
                       {"mask_pixels", r.mask_pixels}});
    }
    const auto dir = prepare_out_dir(o.out_dir);
    write_text(dir / "report.csv", csv);
    write_text(dir / "report.json", doc.dump(2) + "\n");
    out << csv;
    return kOk;
}

int cmd_bench(const Options& o, std::ostream& out) {
    const auto inputs = read_bundle(o.bundle);
    const auto image = load_image_for(o, &inputs);
    const auto params = o.slic.params();
    const auto rule = o.rule.selection();

    std::vector<StageTiming> runs;
    for (int i = 0; i < o.repeat; ++i) runs.push_back(run_pipeline(inputs, image, params, rule).timing);

    auto column = [&](auto get) {
        std::vector<double> v;
        for (const auto& t : runs) v.push_back(get(t));
        std::sort(v.begin(), v.end());
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        return json{{"mean", mean}, {"min", v.front()}, {"median", v[v.size() / 2]}, {"max", v.back()}};
    };
    json doc{{"repeat", o.repeat},
             {"width", image.width()},
             {"height", image.height()},
             {"channels", inputs.channels()},
             {"k", params.k},
             {"segment_ms", column([](const StageTiming& t) { return t.segment_ms; })},
             {"cam_ms", column([](const StageTiming& t) { return t.cam_ms; })},
             {"select_ms", column([](const StageTiming& t) { return t.select_ms; })},
             {"total_ms", column([](const StageTiming& t) { return t.total_ms(); })}};
    out << doc.dump(2) << "\n";
    return kOk;
}

int cmd_voc(const Options& o, std::ostream& out) {
    std::optional<std::string> name, id;
    if (!o.object_name.empty()) name = o.object_name;
    if (!o.image_id.empty()) id = o.image_id;
    const auto gt = ground_truth_from_voc(o.xml, o.class_id, name, id);
    fs::path target = o.out_file.empty() ? prepare_out_dir(o.out_dir) / (gt.image_id + ".json")
                                         : fs::path(o.out_file);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    write_ground_truth(gt, target);
    out << target.string() << "\n";
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Segmentation-class activation mapping explanations"};
    app.require_subcommand(1);
    Options o;

    auto* seg = app.add_subcommand("segment", "SLIC superpixels: label PNG/NPY and boundary image");
    seg->add_option("--image", o.image, "Input PNG")->required();
    add_slic_options(seg, o.slic);
    seg->add_option("--out-dir", o.out_dir);
    seg->add_flag("--timing", o.timing);

    auto* cam = app.add_subcommand("cam", "Class activation map at feature resolution");
    cam->add_option("--bundle", o.bundle, "Bundle manifest")->required();
    cam->add_option("--out-dir", o.out_dir);

    auto* exp = app.add_subcommand("explain", "Full explanation: JSON, mask and masked render");
    exp->add_option("--bundle", o.bundle, "Bundle manifest")->required();
    exp->add_option("--image", o.image, "Overrides the bundle's image");
    add_slic_options(exp, o.slic);
    add_rule_options(exp, o.rule);
    exp->add_option("--dim", o.dim, "Brightness of unselected regions")->check(CLI::Range(0.0, 1.0));
    exp->add_option("--out-dir", o.out_dir);
    exp->add_flag("--timing", o.timing);

    auto* ren = app.add_subcommand("render", "Boundary, heatmap or masked render");
    ren->add_option("--image", o.image);
    ren->add_option("--bundle", o.bundle);
    ren->add_option("--style", o.style)->check(CLI::IsMember({"boundaries", "heatmap", "masked"}));
    ren->add_option("--alpha", o.alpha)->check(CLI::Range(0.0, 1.0));
    ren->add_option("--dim", o.dim)->check(CLI::Range(0.0, 1.0));
    add_slic_options(ren, o.slic);
    add_rule_options(ren, o.rule);
    ren->add_option("--out-dir", o.out_dir);

    auto* ev = app.add_subcommand("eval", "IOU / EBPG report against ground-truth boxes");
    ev->add_option("--explanations", o.explanations, "Directory of explanation JSON files")
        ->required();
    ev->add_option("--truth", o.truth, "Ground-truth JSON file or directory")->required();
    ev->add_option("--out-dir", o.out_dir);

    auto* bench = app.add_subcommand("bench", "Repeated pipeline runs with stage timing");
    bench->add_option("--bundle", o.bundle)->required();
    bench->add_option("--image", o.image);
    bench->add_option("--repeat", o.repeat)->check(CLI::PositiveNumber);
    add_slic_options(bench, o.slic);
    add_rule_options(bench, o.rule);

    auto* voc = app.add_subcommand("voc2json", "Convert a PASCAL-VOC annotation to ground truth");
    voc->add_option("--xml", o.xml)->required();
    voc->add_option("--class-id", o.class_id)->required();
    voc->add_option("--name", o.object_name, "Keep only objects with this name");
    voc->add_option("--image-id", o.image_id);
    voc->add_option("--out", o.out_file);
    voc->add_option("--out-dir", o.out_dir);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*seg) return cmd_segment(o, out);
        if (*cam) return cmd_cam(o, out);
        if (*exp) return cmd_explain(o, out);
        if (*ren) return cmd_render(o, out);
        if (*ev) return cmd_eval(o, out, err);
        if (*bench) return cmd_bench(o, out);
        if (*voc) return cmd_voc(o, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}

}  // namespace secam::cli
