#include "orthotile/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "orthotile/errors.hpp"

namespace orthotile {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path);
    out << text;
    if (!out) throw InputError("write failed for " + path);
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(what + ": " + e.what());
    }
}

std::string dump_json(const Json& j) { return j.dump() + "\n"; }

std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Json map_to_json(const OrthodiagonalMap& m, const std::array<VertexId, 4>* marked) {
    Json j;
    Json verts = Json::array();
    for (VertexId v = 0; v < m.vertex_count(); ++v) {
        Json o;
        o["id"] = v;
        o["x"] = m.pos(v).x;
        o["y"] = m.pos(v).y;
        o["color"] = m.color(v) == Color::primal ? "primal" : "dual";
        verts.push_back(std::move(o));
    }
    j["vertices"] = std::move(verts);
    Json faces = Json::array();
    for (const Face& f : m.faces()) faces.push_back(Json::array({f[0], f[1], f[2], f[3]}));
    j["faces"] = std::move(faces);
    j["boundary"] = m.boundary();
    if (marked) j["marked"] = Json::array({(*marked)[0], (*marked)[1], (*marked)[2], (*marked)[3]});
    return j;
}

OrthodiagonalMap map_from_json(const Json& j) {
    try {
        const auto& jv = j.at("vertices");
        const std::size_t n = jv.size();
        std::vector<Vertex> verts(n);
        std::vector<bool> seen(n, false);
        for (const auto& o : jv) {
            auto id = o.at("id").get<std::size_t>();
            if (id >= n || seen[id]) throw InputError("vertex ids must be dense and unique");
            seen[id] = true;
            std::string c = o.at("color").get<std::string>();
            if (c != "primal" && c != "dual") throw InputError("vertex color must be primal or dual");
            verts[id] = {{o.at("x").get<double>(), o.at("y").get<double>()}, c == "primal" ? Color::primal : Color::dual};
        }
        std::vector<Face> faces;
        for (const auto& f : j.at("faces")) {
            if (f.size() != 4) throw InputError("faces must have exactly 4 vertices");
            faces.push_back({f[0].get<VertexId>(), f[1].get<VertexId>(), f[2].get<VertexId>(), f[3].get<VertexId>()});
        }
        auto boundary = j.at("boundary").get<std::vector<VertexId>>();
        return OrthodiagonalMap(std::move(verts), std::move(faces), std::move(boundary));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed map: ") + e.what());
    }
}

std::optional<std::array<VertexId, 4>> marked_from_json(const Json& j) {
    if (!j.contains("marked")) return std::nullopt;
    try {
        const auto& a = j.at("marked");
        if (a.size() != 4) throw InputError("marked must list 4 vertex ids");
        return std::array<VertexId, 4>{a[0].get<VertexId>(), a[1].get<VertexId>(), a[2].get<VertexId>(), a[3].get<VertexId>()};
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed marked list: ") + e.what());
    }
}

Json marked_map_to_json(const MarkedRectangleMap& m) { return map_to_json(m.map(), &m.marked()); }

MarkedRectangleMap marked_map_from_json(const Json& j) {
    auto marked = marked_from_json(j);
    if (!marked) throw InputError("map has no marked vertices");
    return MarkedRectangleMap(map_from_json(j), *marked);
}

}  // namespace orthotile
