#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "curr/experiments.hpp"
#include "curr/flatnorm.hpp"
#include "curr/rigidity.hpp"
#include "curr/slicing.hpp"

namespace curr {

using Json = nlohmann::json;

/// On-disk bundle: one mesh with named chains and maps, plus optional target
/// mesh (refining the maps' images), ball section and generator metadata.
/// Round-trips bit-exactly: simplices are emitted per dimension in id order,
/// so parsing reproduces identical ids; doubles use shortest exact form.
struct CurrentFile {
    std::string version = "1";
    std::shared_ptr<const EmbeddedComplex> mesh;
    std::map<std::string, SimplicialCurrent> chains;
    std::map<std::string, PiecewiseAffineMap> maps;

    std::shared_ptr<const EmbeddedComplex> target_mesh; // optional
    std::optional<SimplicialCurrent> ball;              // optional, on its own mesh
    double ball_radius = 1.0;

    std::optional<std::string> kind; // generator metadata
    double parameter = 0;
    double mesh_size = 0;
};

Json mesh_to_json(const EmbeddedComplex& c);
std::shared_ptr<const EmbeddedComplex> mesh_from_json(const Json& j);

Json to_json(const CurrentFile& f);
CurrentFile current_file_from_json(const Json& j);

CurrentFile load_current_file(const std::string& path);
void save_current_file(const CurrentFile& f, const std::string& path);

CurrentFile instance_to_file(const Instance& inst);

/// Report serialization (CLI --out payloads).
Json to_json(const MassReport& r);
Json to_json(const FlatNormResult& r);
Json to_json(const RigidityReport& r);
Json to_json(const RigidityChainReport& r);
Json to_json(const CurveDecomposition& d);

/// Fixed-column CSV emitters; all doubles use "%.17g".
std::string slice_report_csv(const SliceFamily& fam, const SliceMassIntegral& mi,
                             const SliceBoundaryCheck& bc, const SliceCommutationCheck& cc);
std::string convergence_table_csv(const ConvergenceTable& t);

std::string format_double(double v);

} // namespace curr
