#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "curr/cli.hpp"
#include "curr/errors.hpp"
#include "curr/io.hpp"
#include "support.hpp"

using namespace curr;
using namespace test_support;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/curr_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    int code = cli_run(args, out, err);
    if (out_text) *out_text = out.str() + err.str();
    return code;
}

} // namespace

TEST_CASE("current file round trip is bit exact") {
    Instance inst = generate(InstanceSpec::annulus(0.3, 64));
    CurrentFile f = instance_to_file(inst);
    Json j1 = to_json(f);
    CurrentFile g = current_file_from_json(j1);
    Json j2 = to_json(g);
    CHECK(j1.dump() == j2.dump());
    // chains and meshes survive identically
    CHECK(g.chains.at("T").entries() == f.chains.at("T").entries());
    CHECK(g.mesh->vertex_count() == f.mesh->vertex_count());
    for (Index v = 0; v < f.mesh->vertex_count(); ++v)
        for (int i = 0; i < 2; ++i) CHECK(g.mesh->vertex(v)[i] == f.mesh->vertex(v)[i]);
}

TEST_CASE("malformed files produce diagnostics") {
    TempFile tf("bad.json");
    std::ofstream(tf.path) << "{ not json";
    CHECK_THROWS_AS(load_current_file(tf.path), InputError);
    std::ofstream(tf.path) << "{\"version\":\"1\"}";
    CHECK_THROWS_AS(load_current_file(tf.path), InputError);
    std::ofstream(tf.path) << "{\"version\":\"9\",\"mesh\":{}}";
    CHECK_THROWS_AS(load_current_file(tf.path), InputError);
}

TEST_CASE("cli: generate, mass, boundary, flatnorm round") {
    TempFile disk("disk.json");
    CHECK(run({"generate", "--family", "disk", "--n", "256", "--out", disk.path}) == 0);

    std::string text;
    CHECK(run({"mass", "--input", disk.path, "--chain", "T"}, &text) == 0);
    CHECK(text.find("mass 3.1") != std::string::npos);

    TempFile bd("bd.json");
    CHECK(run({"boundary", "--input", disk.path, "--chain", "T", "--out", bd.path}) == 0);
    CurrentFile bf = load_current_file(bd.path);
    CHECK(bf.chains.count("T_boundary") == 1);

    std::string fn;
    CHECK(run({"flatnorm", "--input", bd.path, "--chain", "T_boundary"}, &fn) == 0);
    CHECK(fn.find("flatnorm") != std::string::npos);
}

TEST_CASE("cli: rigidity-check exit codes") {
    TempFile disk("disk_r.json");
    REQUIRE(run({"generate", "--family", "disk", "--n", "256", "--out", disk.path}) == 0);
    std::string text;
    CHECK(run({"rigidity-check", "--input", disk.path, "--chain", "T", "--map", "psi"}, &text) == 0);
    CHECK(text.find("consistent_with_isometry") != std::string::npos);

    TempFile split("split.json");
    REQUIRE(run({"generate", "--family", "split_disks", "--n", "256", "--out", split.path}) == 0);
    std::string vt;
    TempFile rep("rigidity.json");
    CHECK(run({"rigidity-check", "--input", split.path, "--chain", "T", "--map", "psi", "--out",
               rep.path}, &vt) == 1);
    CHECK(vt.find("hypotheses_violated") != std::string::npos);
    CHECK(vt.find("[3]") != std::string::npos);
    std::ifstream in(rep.path);
    Json j = Json::parse(in);
    CHECK(j.at("verdict") == "hypotheses_violated");
}

TEST_CASE("cli: slice CSV has the fixed columns") {
    TempFile disk("disk_s.json");
    REQUIRE(run({"generate", "--family", "disk", "--n", "128", "--out", disk.path}) == 0);
    TempFile csv("slice.csv");
    CHECK(run({"slice", "--input", disk.path, "--chain", "T", "--map", "psi", "--direction",
               "0,-1", "--levels", "16", "--out", csv.path}) == 0);
    std::ifstream in(csv.path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "level,slice_mass,boundary_defect,commutation_defect");
    int lines = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 16);
}

TEST_CASE("cli: stability-run emits decreasing flat distances") {
    TempFile csv("table.csv");
    std::string text;
    CHECK(run({"stability-run", "--family", "annulus", "--n", "128", "--eps", "0.4,0.2,0.1",
               "--out", csv.path}, &text) == 0);
    CHECK(text.find("flat_distance_decreasing 1") != std::string::npos);
    std::ifstream in(csv.path);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("parameter,mass,flat_distance_to_ball,max_distortion", 0) == 0);
}

TEST_CASE("cli: pushforward, decompose, flatdist, chain-check") {
    TempFile split("split_c.json");
    REQUIRE(run({"generate", "--family", "split_disks", "--n", "128", "--out", split.path}) == 0);

    TempFile pushed("pushed.json");
    std::string text;
    CHECK(run({"pushforward", "--input", split.path, "--chain", "T", "--map", "psi", "--out",
               pushed.path}, &text) == 0);
    CHECK(text.find("pushforward") != std::string::npos);
    CurrentFile pf = load_current_file(pushed.path);
    CHECK(pf.chains.count("T_pushforward") == 1);

    TempFile bd("split_bd.json");
    REQUIRE(run({"boundary", "--input", split.path, "--chain", "T", "--out", bd.path}) == 0);
    TempFile dec("dec.json");
    CHECK(run({"decompose", "--input", bd.path, "--chain", "T_boundary", "--out", dec.path},
              &text) == 0);
    CHECK(text.find("loops 2") != std::string::npos); // two half-disk boundary loops

    // chain-check: equalities hold on split disks (exit 0), fail under scaling
    CHECK(run({"chain-check", "--input", split.path, "--chain", "T", "--map", "psi"}, &text) == 0);
    CHECK(text.find("all_equal 1") != std::string::npos);

    // flat distance between the annulus and its ball via the file interface
    TempFile ann("ann.json");
    REQUIRE(run({"generate", "--family", "annulus", "--eps", "0.2", "--n", "128", "--out",
                 ann.path}) == 0);
    CurrentFile af = load_current_file(ann.path);
    REQUIRE(af.ball.has_value());
    CurrentFile ballf;
    ballf.mesh = af.ball->complex_ptr();
    ballf.chains.emplace("T", *af.ball);
    TempFile ballp("ball.json");
    save_current_file(ballf, ballp.path);
    CHECK(run({"flatdist", "--input", ann.path, "--chain", "T", "--input2", ballp.path, "--chain2",
               "T"}, &text) == 0);
    const double val = std::stod(text.substr(text.find("flatdist") + 9));
    CHECK(val == doctest::Approx(M_PI * 0.04).epsilon(0.1));
}

TEST_CASE("cli: generate schwarzschild and mass") {
    TempFile g("schw.json");
    std::string text;
    CHECK(run({"generate", "--family", "schwarzschild", "--m", "0.05", "--r", "2", "--grid", "32",
               "--out", g.path}, &text) == 0);
    CHECK(text.find("generated schwarzschild_graph") != std::string::npos);
    CurrentFile f = load_current_file(g.path);
    CHECK(f.mesh->ambient_dim() == 3);
    REQUIRE(f.target_mesh);
    CHECK(f.target_mesh->ambient_dim() == 2);
    CHECK(run({"mass", "--input", g.path, "--chain", "T"}, &text) == 0);
}

TEST_CASE("cli: malformed input exits 2 with a diagnostic") {
    TempFile bad("bad2.json");
    std::ofstream(bad.path) << "{]";
    std::string text;
    CHECK(run({"mass", "--input", bad.path, "--chain", "T"}, &text) == 2);
    CHECK(text.find("malformed JSON") != std::string::npos);
    CHECK(run({"mass", "--input", "/nonexistent.json"}, &text) == 2);
}

TEST_CASE("cli: determinism of emitted reports") {
    TempFile split("split_d.json");
    REQUIRE(run({"generate", "--family", "split_disks", "--n", "128", "--out", split.path}) == 0);
    TempFile r1("rep1.json"), r2("rep2.json");
    run({"rigidity-check", "--input", split.path, "--chain", "T", "--map", "psi", "--seed", "5",
         "--out", r1.path});
    run({"rigidity-check", "--input", split.path, "--chain", "T", "--map", "psi", "--seed", "5",
         "--out", r2.path});
    std::ifstream f1(r1.path), f2(r2.path);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    CHECK_FALSE(s1.empty());
}
