#include "mval/world_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mval {

namespace {

nlohmann::json table(const std::vector<double>& flat, std::size_t rows, std::size_t cols) {
    auto t = nlohmann::json::array();
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = nlohmann::json::array();
        for (std::size_t c = 0; c < cols; ++c) row.push_back(flat[r * cols + c]);
        t.push_back(std::move(row));
    }
    return t;
}

std::vector<double> flatten(const nlohmann::json& t, std::size_t rows, std::size_t cols, const char* name) {
    if (!t.is_array() || t.size() != rows) throw InvalidArgument(std::string(name) + " must have n1 rows");
    std::vector<double> flat;
    flat.reserve(rows * cols);
    for (const auto& row : t) {
        if (!row.is_array() || row.size() != cols) throw InvalidArgument(std::string(name) + " rows must have n2 entries");
        for (const auto& v : row) flat.push_back(v.get<double>());
    }
    return flat;
}

}  // namespace

std::string world_to_json(const ClusterWorld& w) {
    nlohmann::json j;
    j["n1"] = w.n1();
    j["n2"] = w.n2();
    j["pair_mass"] = table(w.pair_mass(), w.n1(), w.n2());
    j["label_prob"] = table(w.label_prob(), w.n1(), w.n2());
    return j.dump(2) + "\n";
}

ClusterWorld world_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("world file is not valid JSON: ") + e.what());
    }
    try {
        const auto n1 = j.at("n1").get<std::size_t>();
        const auto n2 = j.at("n2").get<std::size_t>();
        return ClusterWorld(n1, n2, flatten(j.at("pair_mass"), n1, n2, "pair_mass"),
                            flatten(j.at("label_prob"), n1, n2, "label_prob"));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed world file: ") + e.what());
    }
}

void write_world(const ClusterWorld& w, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << world_to_json(w);
    if (!out) throw Error("failed writing " + path.string());
}

ClusterWorld read_world(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return world_from_json(ss.str());
}

}  // namespace mval
