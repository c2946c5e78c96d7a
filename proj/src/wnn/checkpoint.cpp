#include "cryptwnn/wnn/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cryptwnn::wnn {
namespace {

using nlohmann::json;

json groups_to_json(const ParamGroups& g) {
    json j;
    const auto gs = g.groups();
    for (std::size_t k = 0; k < gs.size(); ++k) j[ParamGroups::kNames[k]] = *gs[k];
    return j;
}

void groups_from_json(const json& j, ParamGroups& g) {
    auto gs = g.groups();
    for (std::size_t k = 0; k < gs.size(); ++k) *gs[k] = j.at(ParamGroups::kNames[k]).get<std::vector<double>>();
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& c) {
    json j;
    j["format"] = "cryptwnn-wnn-params";
    j["version"] = 1;
    j["shape"] = {{"nin", c.params.shape.nin}, {"nhn", c.params.shape.nhn}, {"nout", WnnShape::nout}};
    j["params"] = groups_to_json(c.params);
    if (c.momentum) j["momentum"] = groups_to_json(*c.momentum);
    return j.dump(2);
}

Checkpoint checkpoint_from_json(const std::string& text) {
    try {
        const auto j = json::parse(text);
        if (j.at("format") != "cryptwnn-wnn-params" || j.at("version") != 1) {
            throw ShapeError("not a version 1 parameter checkpoint");
        }
        Checkpoint c;
        c.params.shape = {j.at("shape").at("nin").get<std::size_t>(), j.at("shape").at("nhn").get<std::size_t>()};
        if (j.at("shape").value("nout", std::size_t{1}) != 1) throw ShapeError("only one output node is supported");
        groups_from_json(j.at("params"), c.params);
        c.params.validate();
        if (j.contains("momentum")) {
            MomentumState m;
            groups_from_json(j["momentum"], m);
            WnnParams probe;
            static_cast<ParamGroups&>(probe) = m;
            probe.shape = c.params.shape;
            probe.validate();
            c.momentum = std::move(m);
        }
        return c;
    } catch (const json::exception& e) {
        throw ShapeError(std::string("checkpoint: ") + e.what());
    }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << checkpoint_to_json(c) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return checkpoint_from_json(ss.str());
}

}  // namespace cryptwnn::wnn
