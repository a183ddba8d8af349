#include "curr/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "curr/errors.hpp"
#include "curr/io.hpp"

namespace curr {

namespace {

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

MetricMode parse_metric(const std::string& s) {
    if (s == "ambient") return MetricMode::ambient();
    if (s.rfind("length:", 0) == 0) return MetricMode::length(std::stoi(s.substr(7)));
    if (s == "length") return MetricMode::length(2);
    throw InputError("metric must be 'ambient' or 'length:K'");
}

Vec parse_direction(const std::string& s) {
    std::vector<double> xs = parse_list(s);
    if (xs.size() != 2) throw InputError("--direction expects two comma-separated components");
    Vec v = make_vec({xs[0], xs[1]});
    const double n = v.norm();
    if (n == 0) throw InputError("--direction must be nonzero");
    return Vec(v / n);
}

const SimplicialCurrent& need_chain(const CurrentFile& f, const std::string& name) {
    auto it = f.chains.find(name);
    if (it == f.chains.end()) throw InputError("no chain named '" + name + "' in input file");
    return it->second;
}

const PiecewiseAffineMap& need_map(const CurrentFile& f, const std::string& name) {
    auto it = f.maps.find(name);
    if (it == f.maps.end()) throw InputError("no map named '" + name + "' in input file");
    return it->second;
}

std::shared_ptr<const EmbeddedComplex> pick_target(const CurrentFile& f,
                                                   const std::string& input2) {
    if (!input2.empty()) return load_current_file(input2).mesh;
    if (f.target_mesh) return f.target_mesh;
    return f.mesh;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw InputError("cannot write file: " + path);
    os << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(1) + "\n"); }

InstanceSpec spec_from_flags(const std::string& family, int n, double eps, double m, double r,
                             double r0, int grid) {
    if (family == "disk") return InstanceSpec::disk(n);
    if (family == "annulus") return InstanceSpec::annulus(eps, n);
    if (family == "split_disks") return InstanceSpec::split_disks(n);
    if (family == "schwarzschild") return InstanceSpec::schwarzschild(m, r, grid, r0);
    throw InputError("unknown family '" + family + "'");
}

struct CommonFlags {
    std::string input, input2, chain = "T", chain2, map = "psi", out, dump_lp;
    std::string direction = "0,1", metric; // empty: per-command default
    int levels = 256, samples = 8;
    std::uint64_t seed = 17;
    double tol = 1e-6;
};

} // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"curtool: integral currents on simplicial complexes"};
    app.require_subcommand(1);

    CommonFlags fl;
    std::string family;
    int n_segments = 512;
    double eps = 0.1, sch_m = 0.1, sch_r = 2.0, sch_r0 = -1;
    int grid = 96;
    std::string eps_list, m_list;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        if (needs_input) cmd->add_option("--input", fl.input, "CurrentFile path")->required();
        cmd->add_option("--input2", fl.input2, "second CurrentFile path");
        cmd->add_option("--chain", fl.chain, "chain name (default T)");
        cmd->add_option("--chain2", fl.chain2, "second chain name");
        cmd->add_option("--map", fl.map, "map name (default psi)");
        cmd->add_option("--direction", fl.direction, "slice direction 'x,y'");
        cmd->add_option("--levels", fl.levels, "number of slice levels");
        cmd->add_option("--samples", fl.samples, "sample count / geodesic sources");
        cmd->add_option("--seed", fl.seed, "random seed");
        cmd->add_option("--tol", fl.tol, "tolerance");
        cmd->add_option("--metric", fl.metric, "'ambient' or 'length:K'");
        cmd->add_option("--out", fl.out, "output path (JSON or CSV)");
        cmd->add_option("--dump-lp", fl.dump_lp, "dump the flat-norm LP in text format");
    };

    auto* cmd_mass = app.add_subcommand("mass", "total mass of a chain");
    add_common(cmd_mass, true);
    auto* cmd_boundary = app.add_subcommand("boundary", "boundary chain");
    add_common(cmd_boundary, true);
    auto* cmd_push = app.add_subcommand("pushforward", "pushforward of a chain by a map");
    add_common(cmd_push, true);
    auto* cmd_slice = app.add_subcommand("slice", "slice family report (CSV)");
    add_common(cmd_slice, true);
    auto* cmd_dec = app.add_subcommand("decompose", "decompose a 1-current into curves and loops");
    add_common(cmd_dec, true);
    auto* cmd_fn = app.add_subcommand("flatnorm", "simplicial flat norm via LP");
    add_common(cmd_fn, true);
    auto* cmd_fd = app.add_subcommand("flatdist", "flat distance between two chains");
    add_common(cmd_fd, true);
    auto* cmd_rig = app.add_subcommand("rigidity-check", "verify the rigidity hypotheses and distortion");
    add_common(cmd_rig, true);
    auto* cmd_chain = app.add_subcommand("chain-check", "top-dimensional equality chain");
    add_common(cmd_chain, true);

    auto* cmd_gen = app.add_subcommand("generate", "generate a named instance");
    add_common(cmd_gen, false);
    cmd_gen->add_option("--family", family, "disk | annulus | split_disks | schwarzschild")->required();
    cmd_gen->add_option("--n", n_segments, "boundary segments");
    cmd_gen->add_option("--eps", eps, "annulus inner radius");
    cmd_gen->add_option("--m", sch_m, "schwarzschild mass");
    cmd_gen->add_option("--r", sch_r, "schwarzschild outer radius");
    cmd_gen->add_option("--r0", sch_r0, "schwarzschild inner radius (default horizon)");
    cmd_gen->add_option("--grid", grid, "schwarzschild rings");

    auto* cmd_stab = app.add_subcommand("stability-run", "convergence table over a family");
    add_common(cmd_stab, false);
    cmd_stab->add_option("--family", family, "annulus | schwarzschild | disk")->required();
    cmd_stab->add_option("--n", n_segments, "boundary segments");
    cmd_stab->add_option("--eps", eps_list, "comma-separated annulus eps values");
    cmd_stab->add_option("--m", m_list, "comma-separated schwarzschild masses");
    cmd_stab->add_option("--r", sch_r, "schwarzschild outer radius");
    cmd_stab->add_option("--grid", grid, "schwarzschild rings");

    std::vector<std::string> argv_s;
    argv_s.push_back("curtool");
    argv_s.insert(argv_s.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(argv_s.size());
    for (const auto& s : argv_s) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "argument error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (cmd_mass->parsed()) {
            CurrentFile f = load_current_file(fl.input);
            MassReport r = mass(need_chain(f, fl.chain));
            out << "mass " << format_double(r.total) << "\n";
            if (!fl.out.empty()) write_json(fl.out, to_json(r));
            return 0;
        }
        if (cmd_boundary->parsed()) {
            CurrentFile f = load_current_file(fl.input);
            SimplicialCurrent bd = boundary(need_chain(f, fl.chain));
            out << "boundary entries " << bd.entries().size() << " mass "
                << format_double(mass(bd).total) << "\n";
            if (!fl.out.empty()) {
                CurrentFile g;
                g.mesh = f.mesh;
                g.chains.emplace(fl.chain + "_boundary", bd);
                save_current_file(g, fl.out);
            }
            return 0;
        }
        if (cmd_push->parsed()) {
            CurrentFile f = load_current_file(fl.input);
            auto target = pick_target(f, fl.input2);
            SimplicialCurrent pushed = pushforward(need_map(f, fl.map), need_chain(f, fl.chain), target);
            out << "pushforward entries " << pushed.entries().size() << " mass "
                << format_double(mass(pushed).total) << "\n";
            if (!fl.out.empty()) {
                CurrentFile g;
                g.mesh = target;
                g.chains.emplace(fl.chain + "_pushforward", pushed);
                save_current_file(g, fl.out);
            }
            return 0;
        }
        if (cmd_slice->parsed()) {
            CurrentFile f = load_current_file(fl.input);
            const auto& T = need_chain(f, fl.chain);
            const auto& psi = need_map(f, fl.map);
            Vec v = parse_direction(fl.direction);
            auto [levels, weights] = uniform_levels(T, psi, v, fl.levels);
            SliceFamily fam = slice(T, psi, v, levels, weights);
            SliceMassIntegral mi = slice_mass_integral(fam, T, psi);
            SliceBoundaryCheck bc = slice_boundary_check(fam, T, psi);
            SliceCommutationCheck cc = slice_commutation_check(fam, T, psi, pick_target(f, fl.input2));
            out << "slice levels " << fam.levels.size() << " integral " << format_double(mi.integral)
                << " bound " << format_double(mi.mass_bound) << " holds " << (mi.holds ? 1 : 0)
                << " max_boundary_defect " << format_double(bc.max_defect) << " max_commutation_defect "
                << format_double(cc.max_defect) << "\n";
            const std::string csv = slice_report_csv(fam, mi, bc, cc);
            if (!fl.out.empty())
                write_text(fl.out, csv);
            else
                out << csv;
            return 0;
        }
        if (cmd_dec->parsed()) {
            CurrentFile f = load_current_file(fl.input);
            CurveDecomposition d = decompose_1current(need_chain(f, fl.chain));
            out << "curves " << d.curves.size() << " loops " << d.loops.size() << " mass "
                << format_double(d.total_mass()) << "\n";
            if (!fl.out.empty()) write_json(fl.out, to_json(d));
            return 0;
        }
        if (cmd_fn->parsed()) {
            CurrentFile f = load_current_file(fl.input);
            std::ofstream lp;
            std::ostream* lp_os = nullptr;
            if (!fl.dump_lp.empty()) {
                lp.open(fl.dump_lp);
                if (!lp) throw InputError("cannot write file: " + fl.dump_lp);
                lp_os = &lp;
            }
            FlatNormResult r = flat_norm(need_chain(f, fl.chain), lp_os);
            out << "flatnorm " << format_double(r.value) << " status " << to_string(r.solver_status)
                << "\n";
            if (!fl.out.empty()) write_json(fl.out, to_json(r));
            return r.solver_status == SolverStatus::optimal ? 0 : 2;
        }
        if (cmd_fd->parsed()) {
            CurrentFile f = load_current_file(fl.input);
            const SimplicialCurrent& A = need_chain(f, fl.chain);
            std::optional<CurrentFile> f2;
            if (!fl.input2.empty()) f2 = load_current_file(fl.input2);
            const std::string bname = fl.chain2.empty() ? fl.chain : fl.chain2;
            const SimplicialCurrent& B = f2 ? need_chain(*f2, bname) : need_chain(f, bname);
            std::ofstream lp;
            std::ostream* lp_os = nullptr;
            if (!fl.dump_lp.empty()) {
                lp.open(fl.dump_lp);
                if (!lp) throw InputError("cannot write file: " + fl.dump_lp);
                lp_os = &lp;
            }
            FlatNormResult r = flat_distance(A, B, lp_os);
            out << "flatdist " << format_double(r.value) << " status " << to_string(r.solver_status)
                << "\n";
            if (!fl.out.empty()) write_json(fl.out, to_json(r));
            return r.solver_status == SolverStatus::optimal ? 0 : 2;
        }
        if (cmd_rig->parsed()) {
            CurrentFile f = load_current_file(fl.input);
            const auto& T = need_chain(f, fl.chain);
            const auto& psi = need_map(f, fl.map);
            std::optional<SimplicialCurrent> ball;
            double radius = f.ball_radius;
            if (!fl.input2.empty()) {
                CurrentFile f2 = load_current_file(fl.input2);
                const std::string bname = fl.chain2.empty() ? "T" : fl.chain2;
                ball = need_chain(f2, bname);
                radius = f2.ball_radius;
            } else if (f.ball) {
                ball = *f.ball;
            } else {
                throw InputError("rigidity-check needs a ball section or --input2");
            }
            RigidityOptions opts;
            opts.tol = fl.tol;
            opts.metric = parse_metric(fl.metric.empty() ? "ambient" : fl.metric);
            opts.distortion_samples = fl.samples;
            opts.injectivity_samples = std::max(64, 64 * fl.samples);
            opts.seed = fl.seed;
            opts.sphere_radius = radius;
            if (f.mesh_size > 0) opts.distortion_tol = 10.0 * f.mesh_size;
            RigidityReport rep =
                rigidity_check(T, psi, *ball, opts, f.target_mesh ? f.target_mesh : f.mesh);
            out << "verdict " << to_string(rep.verdict);
            if (!rep.violated_hypotheses.empty()) {
                out << " violated [";
                for (std::size_t i = 0; i < rep.violated_hypotheses.size(); ++i)
                    out << (i ? "," : "") << rep.violated_hypotheses[i];
                out << "]";
            }
            out << " max_distortion "
                << (std::isfinite(rep.distortion.max_distortion)
                        ? format_double(rep.distortion.max_distortion)
                        : "inf")
                << "\n";
            if (!fl.out.empty()) write_json(fl.out, to_json(rep));
            return rep.verdict == RigidityVerdict::consistent_with_isometry ? 0 : 1;
        }
        if (cmd_chain->parsed()) {
            CurrentFile f = load_current_file(fl.input);
            RigidityChainReport rep = euclidean_rigidity_chain(
                need_chain(f, fl.chain), need_map(f, fl.map), pick_target(f, fl.input2), fl.tol);
            out << "chain";
            for (double t : rep.terms) out << " " << format_double(t);
            out << " all_equal " << (rep.all_equal ? 1 : 0) << "\n";
            if (!fl.out.empty()) write_json(fl.out, to_json(rep));
            return rep.all_equal ? 0 : 1;
        }
        if (cmd_gen->parsed()) {
            InstanceSpec spec = spec_from_flags(family, n_segments, eps, sch_m, sch_r, sch_r0, grid);
            Instance inst = generate(spec);
            out << "generated " << inst.kind << " parameter " << format_double(inst.parameter)
                << " mass " << format_double(mass(inst.T).total) << " mesh_size "
                << format_double(inst.mesh_size) << "\n";
            if (fl.out.empty()) throw InputError("generate requires --out");
            save_current_file(instance_to_file(inst), fl.out);
            return 0;
        }
        if (cmd_stab->parsed()) {
            std::vector<InstanceSpec> specs;
            if (family == "annulus") {
                for (double e : parse_list(eps_list)) specs.push_back(InstanceSpec::annulus(e, n_segments));
            } else if (family == "schwarzschild") {
                for (double m : parse_list(m_list))
                    specs.push_back(InstanceSpec::schwarzschild(m, sch_r, grid));
            } else if (family == "disk") {
                specs.push_back(InstanceSpec::disk(n_segments));
            } else {
                throw InputError("stability-run: unknown family '" + family + "'");
            }
            if (specs.empty()) throw InputError("stability-run: empty parameter list");
            StabilityOptions sopts;
            sopts.metric = parse_metric(fl.metric.empty() ? "length:2" : fl.metric);
            sopts.seed = fl.seed;
            sopts.distortion_samples = fl.samples;
            ConvergenceTable table = stability_run(specs, sopts);
            const std::string csv = convergence_table_csv(table);
            out << "rows " << table.rows.size() << " flat_distance_decreasing "
                << (table.flat_distance_decreasing ? 1 : 0) << "\n";
            if (!fl.out.empty())
                write_text(fl.out, csv);
            else
                out << csv;
            return 0;
        }
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const GeometryError& e) {
        err << "geometry error: " << e.what() << "\n";
        return 2;
    } catch (const HypothesisError& e) {
        err << "hypothesis error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "no subcommand executed\n";
    return 2;
}

} // namespace curr
