#include "cli.hpp"

#include "weightlab/measure_io.hpp"
#include "weightlab/report.hpp"
#include "weightlab/triadic.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace weightlab;
using weightlab::cli::RunConfig;

namespace {

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "weightlab_cli_unit";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

struct Outcome {
  int status;
  std::string out, err;
};

Outcome run(const RunConfig& c) {
  std::ostringstream out, err;
  const int status = weightlab::cli::run(c, out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli-report") {
  TEST_CASE("gliding with eps <= 1/p is a usage error") {
    RunConfig c;
    c.command = "verify";
    c.subcommand = "gliding";
    c.eps = 0.5;
    const Outcome o = run(c);
    CHECK(o.status == cli::kUsage);
    const nlohmann::json e = nlohmann::json::parse(o.err);
    CHECK(e["error"]["message"] == "epsilon out of range");
    CHECK(e["error"]["code"] == "InvalidArgument");
  }

  TEST_CASE("build k=1 depth=1 writes the measure and the tree sidecar") {
    RunConfig c;
    c.command = "build";
    c.ks = {1};
    c.depth = 1;
    c.out = (scratch() / "w1.measure.json").string();
    REQUIRE(run(c).status == cli::kPass);
    const PiecewiseMeasure w = read_measure_file(c.out);
    CHECK(w == build_w_k(1, 1, SignRule::Greedy).measure);
    const nlohmann::json tree = read_json_file(scratch() / "w1.tree.json");
    CHECK(tree == tree_to_json(build_tree(1, 1, SignRule::Greedy)));
    CHECK(tree["generations"][0]["residuals"][0]["J"][0] == "1/3");
    CHECK(tree["generations"][0]["residuals"][0]["I"][0] == "0/1");
  }

  TEST_CASE("size cap maps to exit 3") {
    RunConfig c;
    c.command = "build";
    c.ks = {8};
    c.out = (scratch() / "w8.measure.json").string();
    const Outcome o = run(c);
    CHECK(o.status == cli::kResourceCap);
    CHECK(nlohmann::json::parse(o.err)["error"]["code"] == "SizeLimit");
    c.command = "verify";
    c.subcommand = "contmax";
    CHECK(run(c).status == cli::kResourceCap);
  }

  TEST_CASE("eval hilbert and maximal emit CSV") {
    RunConfig b;
    b.command = "build";
    b.ks = {1};
    b.depth = 0;
    b.out = (scratch() / "w1d0.measure.json").string();
    REQUIRE(run(b).status == cli::kPass);
    const auto points = scratch() / "pts.csv";
    std::ofstream(points) << "x\n1/3\n2/3\n5/6\n";
    RunConfig c;
    c.command = "eval";
    c.subcommand = "hilbert";
    c.measure = b.out;
    c.points = points.string();
    const Outcome h = run(c);
    CHECK(h.status == cli::kPass);
    CHECK(h.out.rfind("x,value,kind,error_bound\n", 0) == 0);
    CHECK(h.out.find("\n1/3,") != std::string::npos);
    CHECK(h.out.find("\n2/3,-inf,-inf,") != std::string::npos);
    c.subcommand = "maximal";
    const Outcome m = run(c);
    CHECK(m.status == cli::kPass);
    CHECK(m.out.find("\n5/6,6/5,1.2") != std::string::npos);
    c.linearize = "0,1";
    c.grid = "dyadic";
    c.j_min = -4;
    c.j_max = 1;
    const Outcome l = run(c);
    CHECK(l.status == cli::kPass);
    CHECK(nlohmann::json::parse(l.out).contains("assignments"));
  }

  TEST_CASE("cantor zeros schema") {
    RunConfig c;
    c.command = "cantor";
    c.subcommand = "zeros";
    c.r_max = 1;
    const Outcome o = run(c);
    REQUIRE(o.status == cli::kPass);
    const nlohmann::json z = nlohmann::json::parse(o.out);
    REQUIRE(z.size() == 3);
    CHECK(z[0]["r"] == 0);
    CHECK(z[0]["lo"].is_string());
    CHECK(z[0]["est"].get<double>() == doctest::Approx(0.5));
  }

  TEST_CASE("verify writes deterministic JSON and report re-checks it") {
    RunConfig c;
    c.command = "verify";
    c.subcommand = "theorem6";
    c.r = 1;
    c.T = 1;
    c.R = 7;
    c.json = (scratch() / "t6a.json").string();
    c.csv = (scratch() / "t6a.csv").string();
    REQUIRE(run(c).status == cli::kPass);
    RunConfig again = c;
    again.json = (scratch() / "t6b.json").string();
    again.csv.clear();
    REQUIRE(run(again).status == cli::kPass);
    CHECK(slurp(c.json) == slurp(again.json));
    CHECK(slurp(c.csv).rfind("check,k,p,depth,constant,value,bound,pass\n", 0) == 0);

    RunConfig r;
    r.command = "report";
    r.inputs = {c.json};
    const Outcome o = run(r);
    CHECK(o.status == cli::kPass);
    CHECK(o.out == slurp(c.csv));

    nlohmann::json tampered = read_json_file(c.json);
    tampered["reports"][0]["thresholds"][0]["exact_bound"] = "7/1";
    tampered["reports"][0]["thresholds"][0]["bound"] = 7.0;
    write_json_file(scratch() / "t6bad.json", tampered);
    r.inputs = {(scratch() / "t6bad.json").string()};
    CHECK(run(r).status == cli::kCheckFailure);
  }

  TEST_CASE("report on an empty set emits the header only") {
    write_json_file(scratch() / "empty.json", nlohmann::json{{"reports", nlohmann::json::array()}, {"pass", false}});
    RunConfig r;
    r.command = "report";
    r.inputs = {(scratch() / "empty.json").string()};
    const Outcome o = run(r);
    CHECK(o.out == "check,k,p,depth,constant,value,bound,pass\n");
    CHECK(o.status == cli::kCheckFailure);
  }

  TEST_CASE("unknown commands and bad exponents are usage errors") {
    RunConfig c;
    c.command = "frobnicate";
    CHECK(run(c).status == cli::kUsage);
    c.command = "verify";
    c.subcommand = "hlower";
    c.ps = {"1"};
    CHECK(run(c).status == cli::kUsage);
  }
}
