#pragma once

#include <fstream>
#include <istream>
#include <string>

#include <json.hpp>

#include "robin/geometry.hpp"
#include "robin/mesh.hpp"
#include "robin/sweep.hpp"

namespace robin {

// Polygon input: {"vertices": [[x, y], ...]}. Validation (convexity,
// orientation, degeneracy) happens in the geometry layer.
inline ConvexPolygon polygon_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("vertices"))
        throw std::invalid_argument("polygon file needs a top-level \"vertices\" array");
    const auto& verts = j.at("vertices");
    if (!verts.is_array())
        throw std::invalid_argument("\"vertices\" must be an array of [x, y] pairs");
    std::vector<Vec2> pts;
    for (const auto& v : verts) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw std::invalid_argument("each vertex must be a numeric [x, y] pair");
        pts.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return ConvexPolygon::validate(std::move(pts));
}

inline ConvexPolygon load_polygon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open polygon file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("polygon file " + path + " is not valid JSON: " + e.what());
    }
    return polygon_from_json(j);
}

inline TruncationSpec truncation_from_json(const nlohmann::json& j, TruncationSpec spec = {}) {
    if (j.contains("offset")) spec.offset = j.at("offset").get<double>();
    if (j.contains("bc")) {
        const std::string bc = j.at("bc").get<std::string>();
        if (bc == "dirichlet")
            spec.bc = ArtificialBC::Dirichlet;
        else if (bc == "neumann")
            spec.bc = ArtificialBC::Neumann;
        else
            throw std::invalid_argument("mesh bc must be \"dirichlet\" or \"neumann\"");
    }
    if (j.contains("h_boundary_layer"))
        spec.h_boundary_layer = j.at("h_boundary_layer").get<double>();
    if (j.contains("h_interior")) spec.h_interior = j.at("h_interior").get<double>();
    if (j.contains("grading_ratio")) spec.grading_ratio = j.at("grading_ratio").get<double>();
    if (j.contains("grading_levels")) spec.grading_levels = j.at("grading_levels").get<int>();
    return spec;
}

inline nlohmann::json truncation_to_json(const TruncationSpec& spec) {
    return nlohmann::json{{"offset", spec.offset},
                          {"bc", spec.bc == ArtificialBC::Dirichlet ? "dirichlet" : "neumann"},
                          {"h_boundary_layer", spec.h_boundary_layer},
                          {"h_interior", spec.h_interior},
                          {"grading_ratio", spec.grading_ratio},
                          {"grading_levels", spec.grading_levels}};
}

inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
    SweepConfig cfg;
    if (j.contains("alphas")) {
        cfg.alphas.clear();
        for (const auto& a : j.at("alphas")) cfg.alphas.push_back(a.get<double>());
    }
    if (j.contains("m_max")) cfg.m_max = j.at("m_max").get<int>();
    if (j.contains("refinements")) cfg.refinements = j.at("refinements").get<int>();
    if (j.contains("bc_mode")) {
        const std::string mode = j.at("bc_mode").get<std::string>();
        if (mode == "both")
            cfg.bc_mode = SweepBCMode::Both;
        else if (mode == "dirichlet")
            cfg.bc_mode = SweepBCMode::DirichletOnly;
        else if (mode == "neumann")
            cfg.bc_mode = SweepBCMode::NeumannOnly;
        else
            throw std::invalid_argument("bc_mode must be \"both\", \"dirichlet\" or \"neumann\"");
    }
    if (j.contains("solver_tol")) cfg.solver_tol = j.at("solver_tol").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<unsigned>();
    if (j.contains("mesh")) cfg.mesh = truncation_from_json(j.at("mesh"));
    return cfg;
}

inline nlohmann::json sweep_config_to_json(const SweepConfig& cfg) {
    const char* mode = cfg.bc_mode == SweepBCMode::Both ? "both"
                       : cfg.bc_mode == SweepBCMode::DirichletOnly ? "dirichlet"
                                                                   : "neumann";
    nlohmann::json j{{"alphas", cfg.alphas},     {"m_max", cfg.m_max},
                     {"refinements", cfg.refinements}, {"bc_mode", mode},
                     {"solver_tol", cfg.solver_tol},
                     {"seed", cfg.seed},         {"threads", cfg.threads}};
    if (cfg.mesh) j["mesh"] = truncation_to_json(*cfg.mesh);
    return j;
}

}  // namespace robin
