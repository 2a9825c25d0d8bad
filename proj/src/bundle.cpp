#include <fstream>

#include <nlohmann/json.hpp>

#include "secam/errors.hpp"
#include "secam/tensor_io.hpp"

namespace secam {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(WeightMode mode) {
    return mode == WeightMode::Channel ? "channel" : "spatial";
}

WeightMode parse_weight_mode(std::string_view text) {
    if (text == "channel") return WeightMode::Channel;
    if (text == "spatial") return WeightMode::Spatial;
    throw ManifestError("weight_mode must be \"channel\" or \"spatial\", got \"" +
                        std::string(text) + "\"");
}

void validate(const ExplanationInputs& in) {
    const auto& f = in.features.shape();
    if (f.size() != 3)
        throw ShapeError("features must be K x h x w, got " + shape_to_string(f));
    const auto& w = in.weights.values.shape();
    if (in.weights.mode == WeightMode::Channel) {
        if (w.size() != 1 || w[0] != f[0])
            throw ShapeError("channel weights must have shape (" + std::to_string(f[0]) +
                             ",), got " + shape_to_string(w));
    } else if (w != f) {
        throw ShapeError("spatial weights must match features " + shape_to_string(f) + ", got " +
                         shape_to_string(w));
    }
    if (in.logits && in.logits->rank() != 1)
        throw ShapeError("logits must be 1-D, got " + shape_to_string(in.logits->shape()));
    if (in.class_id < 0) throw ShapeError("class_id must be non-negative");
    if (in.logits && static_cast<std::size_t>(in.class_id) >= in.logits->dim(0))
        throw ShapeError("class_id " + std::to_string(in.class_id) + " outside logits of length " +
                         std::to_string(in.logits->dim(0)));
}

ExplanationInputs make_explanation_inputs(Tensor features, WeightSpec weights, int class_id,
                                          std::optional<Tensor> logits) {
    ExplanationInputs in{std::move(features), std::move(weights), class_id, {}, std::move(logits),
                         {}, {}};
    validate(in);
    return in;
}

namespace {

const json& require(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null())
        throw ManifestError(std::string("manifest is missing \"") + key + "\"");
    return *it;
}

std::string require_string(const json& doc, const char* key) {
    const auto& v = require(doc, key);
    if (!v.is_string()) throw ManifestError(std::string("\"") + key + "\" must be a string");
    return v.get<std::string>();
}

fs::path resolve(const fs::path& base, const std::string& rel) {
    fs::path p(rel);
    return p.is_absolute() ? p : base / p;
}

}  // namespace

ExplanationInputs read_bundle(const fs::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open manifest " + manifest_path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ManifestError(manifest_path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw ManifestError("manifest must be a JSON object");

    const auto base = manifest_path.parent_path();
    const auto features_path = resolve(base, require_string(doc, "features"));
    const auto weights_path = resolve(base, require_string(doc, "weights"));
    const auto mode = parse_weight_mode(require_string(doc, "weight_mode"));
    const auto& cls = require(doc, "class_id");
    if (!cls.is_number_integer()) throw ManifestError("\"class_id\" must be an integer");
    const auto image = resolve(base, require_string(doc, "image"));

    ExplanationInputs out{read_tensor(features_path),
                          WeightSpec{mode, read_tensor(weights_path)},
                          cls.get<int>(),
                          {},
                          std::nullopt,
                          image,
                          {}};
    if (auto it = doc.find("logits"); it != doc.end() && !it->is_null()) {
        if (!it->is_string()) throw ManifestError("\"logits\" must be a string");
        out.logits = read_tensor(resolve(base, it->get<std::string>()));
    }
    if (auto it = doc.find("class_name"); it != doc.end() && it->is_string())
        out.class_name = it->get<std::string>();
    if (auto it = doc.find("metadata"); it != doc.end() && it->is_object()) {
        for (const auto& [k, v] : it->items())
            out.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    validate(out);
    return out;
}

}  // namespace secam
