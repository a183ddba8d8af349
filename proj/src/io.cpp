#include "curr/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "curr/errors.hpp"

namespace curr {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json mesh_to_json(const EmbeddedComplex& c) {
    Json j;
    j["ambient_dim"] = c.ambient_dim();
    Json verts = Json::array();
    for (Index v = 0; v < c.vertex_count(); ++v) {
        Json p = Json::array();
        for (int i = 0; i < c.ambient_dim(); ++i) p.push_back(c.vertex(v)[i]);
        verts.push_back(std::move(p));
    }
    j["vertices"] = std::move(verts);
    Json by_dim = Json::array();
    for (int k = 1; k <= c.top_dim(); ++k) {
        Json list = Json::array();
        for (Index s = 0; s < c.simplex_count(k); ++s) {
            Json tuple = Json::array();
            for (Index v : c.simplex_vertices(k, s)) tuple.push_back(v);
            list.push_back(std::move(tuple));
        }
        by_dim.push_back(std::move(list));
    }
    j["simplices"] = std::move(by_dim); // index 0 holds dimension-1 simplices
    return j;
}

std::shared_ptr<const EmbeddedComplex> mesh_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("mesh section must be an object");
    if (!j.contains("ambient_dim") || !j.contains("vertices"))
        throw InputError("mesh section needs 'ambient_dim' and 'vertices'");
    const int d = j.at("ambient_dim").get<int>();
    std::vector<double> coords;
    for (const auto& p : j.at("vertices")) {
        if (!p.is_array() || static_cast<int>(p.size()) != d)
            throw InputError("mesh vertex with wrong coordinate count");
        for (const auto& x : p) coords.push_back(x.get<double>());
    }
    std::vector<std::vector<std::vector<Index>>> simplices(1);
    if (j.contains("simplices")) {
        int k = 1;
        for (const auto& list : j.at("simplices")) {
            simplices.resize(static_cast<std::size_t>(k) + 1);
            for (const auto& tuple : list) {
                std::vector<Index> t;
                for (const auto& v : tuple) t.push_back(v.get<Index>());
                if (static_cast<int>(t.size()) != k + 1)
                    throw InputError("simplex tuple of dimension " + std::to_string(k) +
                                     " has wrong vertex count");
                simplices[static_cast<std::size_t>(k)].push_back(std::move(t));
            }
            ++k;
        }
    }
    return make_complex(d, std::move(coords), std::move(simplices));
}

namespace {

Json chain_to_json(const SimplicialCurrent& T) {
    Json j;
    j["dim"] = T.dim();
    Json entries = Json::array();
    for (auto [s, m] : T.entries()) entries.push_back(Json::array({s, m}));
    j["entries"] = std::move(entries);
    return j;
}

SimplicialCurrent chain_from_json(const Json& j, const std::shared_ptr<const EmbeddedComplex>& mesh,
                                  const std::string& name) {
    if (!j.contains("dim") || !j.contains("entries"))
        throw InputError("chain '" + name + "' needs 'dim' and 'entries'");
    SimplicialCurrent T(mesh, j.at("dim").get<int>());
    for (const auto& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 2)
            throw InputError("chain '" + name + "': entries must be [simplex, multiplicity] pairs");
        T.add(e[0].get<Index>(), e[1].get<Mult>());
    }
    return T;
}

Json map_to_json(const PiecewiseAffineMap& psi) {
    Json j;
    j["target_dim"] = psi.target_dim();
    Json imgs = Json::array();
    for (Index v = 0; v < psi.source().vertex_count(); ++v) {
        Json p = Json::array();
        for (int i = 0; i < psi.target_dim(); ++i) p.push_back(psi.vertex_image(v)[i]);
        imgs.push_back(std::move(p));
    }
    j["vertex_images"] = std::move(imgs);
    return j;
}

PiecewiseAffineMap map_from_json(const Json& j, const std::shared_ptr<const EmbeddedComplex>& mesh,
                                 const std::string& name) {
    if (!j.contains("target_dim") || !j.contains("vertex_images"))
        throw InputError("map '" + name + "' needs 'target_dim' and 'vertex_images'");
    const int m = j.at("target_dim").get<int>();
    std::vector<double> images;
    for (const auto& p : j.at("vertex_images")) {
        if (!p.is_array() || static_cast<int>(p.size()) != m)
            throw InputError("map '" + name + "': vertex image with wrong coordinate count");
        for (const auto& x : p) images.push_back(x.get<double>());
    }
    return PiecewiseAffineMap(mesh, m, std::move(images));
}

} // namespace

Json to_json(const CurrentFile& f) {
    Json j;
    j["version"] = f.version;
    j["mesh"] = mesh_to_json(*f.mesh);
    Json chains = Json::object();
    for (const auto& [name, chain] : f.chains) chains[name] = chain_to_json(chain);
    j["chains"] = std::move(chains);
    Json maps = Json::object();
    for (const auto& [name, psi] : f.maps) maps[name] = map_to_json(psi);
    j["maps"] = std::move(maps);
    if (f.target_mesh && f.target_mesh != f.mesh) j["target"] = Json{{"mesh", mesh_to_json(*f.target_mesh)}};
    if (f.ball) {
        Json b;
        b["mesh"] = mesh_to_json(f.ball->complex());
        b["chain"] = chain_to_json(*f.ball);
        b["radius"] = f.ball_radius;
        j["ball"] = std::move(b);
    }
    if (f.kind) {
        Json info;
        info["kind"] = *f.kind;
        info["parameter"] = f.parameter;
        info["mesh_size"] = f.mesh_size;
        j["info"] = std::move(info);
    }
    return j;
}

CurrentFile current_file_from_json(const Json& j) {
    CurrentFile f;
    if (!j.is_object()) throw InputError("current file: top level must be an object");
    if (!j.contains("version")) throw InputError("current file: missing 'version'");
    f.version = j.at("version").get<std::string>();
    if (f.version != "1") throw InputError("current file: unsupported version '" + f.version + "'");
    if (!j.contains("mesh")) throw InputError("current file: missing 'mesh'");
    f.mesh = mesh_from_json(j.at("mesh"));
    if (j.contains("chains"))
        for (auto it = j.at("chains").begin(); it != j.at("chains").end(); ++it)
            f.chains.emplace(it.key(), chain_from_json(it.value(), f.mesh, it.key()));
    if (j.contains("maps"))
        for (auto it = j.at("maps").begin(); it != j.at("maps").end(); ++it)
            f.maps.emplace(it.key(), map_from_json(it.value(), f.mesh, it.key()));
    if (j.contains("target")) f.target_mesh = mesh_from_json(j.at("target").at("mesh"));
    if (j.contains("ball")) {
        auto bmesh = mesh_from_json(j.at("ball").at("mesh"));
        f.ball = chain_from_json(j.at("ball").at("chain"), bmesh, "ball");
        f.ball_radius = j.at("ball").value("radius", 1.0);
    }
    if (j.contains("info")) {
        f.kind = j.at("info").value("kind", std::string{});
        f.parameter = j.at("info").value("parameter", 0.0);
        f.mesh_size = j.at("info").value("mesh_size", 0.0);
    }
    return f;
}

CurrentFile load_current_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("malformed JSON in " + path + ": " + e.what());
    }
    try {
        return current_file_from_json(j);
    } catch (const Json::exception& e) {
        throw InputError("invalid current file " + path + ": " + e.what());
    }
}

void save_current_file(const CurrentFile& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path);
    out << to_json(f).dump(1) << "\n";
}

CurrentFile instance_to_file(const Instance& inst) {
    CurrentFile f;
    f.mesh = inst.T.complex_ptr();
    f.chains.emplace("T", inst.T);
    f.maps.emplace("psi", inst.psi);
    f.target_mesh = inst.target;
    f.ball = inst.ball;
    f.ball_radius = inst.ball_radius;
    f.kind = inst.kind;
    f.parameter = inst.parameter;
    f.mesh_size = inst.mesh_size;
    return f;
}

Json to_json(const MassReport& r) {
    Json j;
    j["total"] = r.total;
    Json per = Json::array();
    for (auto [s, v] : r.per_simplex) per.push_back(Json::array({s, v}));
    j["per_simplex"] = std::move(per);
    return j;
}

Json to_json(const FlatNormResult& r) {
    Json j;
    j["value"] = r.value;
    j["solver_status"] = to_string(r.solver_status);
    Json fill = Json::array();
    for (auto [s, v] : r.filling.entries) fill.push_back(Json::array({s, v}));
    j["filling"] = std::move(fill);
    Json res = Json::array();
    for (auto [s, v] : r.residual.entries) res.push_back(Json::array({s, v}));
    j["residual"] = std::move(res);
    return j;
}

Json to_json(const RigidityReport& r) {
    Json j;
    j["verdict"] = to_string(r.verdict);
    j["violated_hypotheses"] = r.violated_hypotheses;
    Json h;
    h["pushforward_is_ball"] = r.hypotheses.pushforward_is_ball;
    h["pushforward_defect"] = r.hypotheses.pushforward_defect;
    h["mass_preserved"] = r.hypotheses.mass_preserved;
    h["mass_difference"] = r.hypotheses.mass_difference;
    h["mass_T"] = r.hypotheses.mass_T;
    h["mass_pushforward"] = r.hypotheses.mass_pushforward;
    h["boundary_injective"] = r.hypotheses.boundary_injective;
    h["bilipschitz_ratio"] = r.hypotheses.bilipschitz_ratio;
    h["worst_collision"] = Json::array({r.hypotheses.worst_collision[0], r.hypotheses.worst_collision[1]});
    h["sphere_defect"] = r.hypotheses.sphere_defect;
    j["hypotheses"] = std::move(h);
    Json inj;
    inj["fraction_injective"] = r.injectivity.fraction_injective;
    inj["fraction_unit_multiplicity"] = r.injectivity.fraction_unit_multiplicity;
    inj["samples"] = r.injectivity.samples;
    j["essential_injectivity"] = std::move(inj);
    Json d;
    const bool inf = !std::isfinite(r.distortion.max_distortion);
    d["max_distortion"] = inf ? Json("inf") : Json(r.distortion.max_distortion);
    d["argmax_pair"] = Json::array({r.distortion.argmax_pair[0], r.distortion.argmax_pair[1]});
    d["geodesic_at_argmax"] = std::isfinite(r.distortion.geodesic_at_argmax)
                                  ? Json(r.distortion.geodesic_at_argmax)
                                  : Json("inf");
    d["image_at_argmax"] = r.distortion.image_at_argmax;
    j["distortion"] = std::move(d);
    j["distortion_tol"] = r.distortion_tol;
    return j;
}

Json to_json(const RigidityChainReport& r) {
    Json j;
    j["terms"] = r.terms;
    j["all_equal"] = r.all_equal;
    j["max_gap"] = r.max_gap;
    j["gradient_global"] = to_string(r.gradient_global);
    j["per_simplex_orthogonal"] = r.per_simplex_orthogonal;
    return j;
}

Json to_json(const CurveDecomposition& d) {
    Json j;
    j["curves"] = d.curves;
    j["loops"] = d.loops;
    j["curve_mass"] = d.curve_mass;
    j["loop_mass"] = d.loop_mass;
    return j;
}

std::string slice_report_csv(const SliceFamily& fam, const SliceMassIntegral& mi,
                             const SliceBoundaryCheck& bc, const SliceCommutationCheck& cc) {
    std::ostringstream os;
    os << "level,slice_mass,boundary_defect,commutation_defect\n";
    for (std::size_t i = 0; i < fam.levels.size(); ++i) {
        os << format_double(fam.levels[i].used) << "," << format_double(mi.per_level_mass[i]) << ","
           << format_double(i < bc.per_level.size() ? bc.per_level[i] : 0.0) << ","
           << format_double(i < cc.per_level.size() ? cc.per_level[i] : 0.0) << "\n";
    }
    return os.str();
}

std::string convergence_table_csv(const ConvergenceTable& t) {
    std::ostringstream os;
    os << "parameter,mass,flat_distance_to_ball,max_distortion,chain_vol_ball,chain_mass_pushforward_"
          "limit,chain_mass_limit,chain_mass_instance,chain_vol_ball_again,chain_monotone,chain_gap_rel\n";
    for (const auto& r : t.rows) {
        os << format_double(r.parameter) << "," << format_double(r.mass) << ","
           << format_double(r.flat_distance_to_ball) << ","
           << (std::isfinite(r.max_distortion) ? format_double(r.max_distortion) : "inf");
        for (double c : r.chain) os << "," << format_double(c);
        os << "," << (r.chain_monotone ? 1 : 0) << "," << format_double(r.chain_gap_rel) << "\n";
    }
    return os.str();
}

} // namespace curr
