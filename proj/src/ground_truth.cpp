#include <fstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "secam/errors.hpp"
#include "secam/metrics.hpp"

namespace secam {

namespace fs = std::filesystem;
using nlohmann::json;

GroundTruth read_ground_truth(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open ground truth " + path.string());
    GroundTruth gt;
    try {
        const auto doc = json::parse(in);
        gt.image_id = doc.at("image_id").get<std::string>();
        gt.class_id = doc.at("class_id").get<int>();
        for (const auto& b : doc.at("boxes")) {
            if (!b.is_array() || b.size() != 4)
                throw ManifestError("each box must be [x_min, y_min, x_max, y_max]");
            gt.boxes.emplace_back(b[0].get<int>(), b[1].get<int>(), b[2].get<int>(),
                                  b[3].get<int>());
        }
    } catch (const json::exception& e) {
        throw ManifestError(path.string() + ": " + e.what());
    }
    if (gt.boxes.empty()) throw ManifestError(path.string() + ": no boxes");
    return gt;
}

void write_ground_truth(const GroundTruth& truth, const fs::path& path) {
    json doc{{"image_id", truth.image_id}, {"class_id", truth.class_id}, {"boxes", json::array()}};
    for (const auto& b : truth.boxes) doc["boxes"].push_back({b.x_min, b.y_min, b.x_max, b.y_max});
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << "\n";
}

GroundTruth ground_truth_from_voc(const fs::path& xml_path, int class_id,
                                  const std::optional<std::string>& object_name,
                                  std::optional<std::string> image_id) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_xml(xml_path.string(), tree);
    } catch (const pt::xml_parser_error& e) {
        throw FormatError(xml_path.string() + ": " + e.what());
    }

    GroundTruth gt;
    gt.class_id = class_id;
    const auto ann_node = tree.get_child_optional("annotation");
    if (!ann_node) throw FormatError(xml_path.string() + ": no <annotation> element");
    const auto& ann = *ann_node;
    if (image_id) {
        gt.image_id = *image_id;
    } else {
        gt.image_id = fs::path(ann.get<std::string>("filename", xml_path.stem().string())).stem().string();
    }
    try {
        for (const auto& [tag, node] : ann) {
            if (tag != "object") continue;
            if (object_name && node.get<std::string>("name", "") != *object_name) continue;
            const auto& box = node.get_child("bndbox");
            const int xmin = static_cast<int>(box.get<double>("xmin"));
            const int ymin = static_cast<int>(box.get<double>("ymin"));
            const int xmax = static_cast<int>(box.get<double>("xmax"));
            const int ymax = static_cast<int>(box.get<double>("ymax"));
            gt.boxes.emplace_back(xmin - 1, ymin - 1, xmax, ymax);
        }
    } catch (const pt::ptree_error& e) {
        throw FormatError(xml_path.string() + ": " + e.what());
    }
    if (gt.boxes.empty()) throw ManifestError(xml_path.string() + ": no matching objects");
    return gt;
}

}  // namespace secam
