#include "tdiff/model_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "tdiff/csv.hpp"

namespace tdiff {

namespace {

Vector read_array(const nlohmann::json& doc, const char* key, std::vector<std::string>& problems) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        problems.push_back(std::string("missing field \"") + key + "\"");
        return {};
    }
    if (!it->is_array()) {
        problems.push_back(std::string("field \"") + key + "\" must be an array");
        return {};
    }
    Vector v(Eigen::Index(it->size()));
    for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& e = (*it)[i];
        if (!e.is_number()) {
            problems.push_back(std::string(key) + "[" + std::to_string(i) + "] is not a number");
            v(Eigen::Index(i)) = 0.0;
        } else {
            v(Eigen::Index(i)) = e.get<double>();
        }
    }
    return v;
}

}  // namespace

ThresholdModel parse_model_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError({std::string("malformed JSON: ") + e.what()});
    }
    if (!doc.is_object()) throw ValidationError({"model must be a JSON object"});

    std::vector<std::string> problems;
    for (const auto& [key, value] : doc.items()) {
        if (key != "thresholds" && key != "drifts" && key != "vols")
            problems.push_back("unknown field \"" + key + "\"");
    }
    ThresholdModel m;
    m.thresholds = read_array(doc, "thresholds", problems);
    m.drifts = read_array(doc, "drifts", problems);
    m.vols = read_array(doc, "vols", problems);
    if (!problems.empty()) throw ValidationError(std::move(problems));
    require_valid(m);
    return m;
}

ThresholdModel load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError({"cannot open model file " + path});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_json(buf.str());
}

std::string model_to_json(const ThresholdModel& model) {
    auto array = [](const Vector& v) {
        std::string s = "[";
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (i) s += ", ";
            s += format_number(v(i));
        }
        return s + "]";
    };
    return "{\"thresholds\": " + array(model.thresholds) + ", \"drifts\": " + array(model.drifts) +
           ", \"vols\": " + array(model.vols) + "}\n";
}

}  // namespace tdiff
