#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pfl/cli.hpp"
#include "pfl/model_io.hpp"

using namespace pfl;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

// x < y < x as a 2-cycle with reflexive rel_f
std::string cyclic_model_file() {
  Model m{Frame(2)};
  m.frame.rel_p.set(0, 1);
  m.frame.rel_p.set(1, 0);
  m.frame.rel_f.set(0, 0);
  m.frame.rel_f.set(1, 1);
  m.valuation[1].insert("p");
  return write_temp("pfl_cli_cycle.json", to_json(m).dump());
}

std::string chain_model_file() {
  Model m{Frame(2)};
  m.frame.rel_p.set(0, 1);
  m.frame.rel_f.set(0, 0);
  m.frame.rel_f.set(1, 1);
  m.valuation[1].insert("p");
  return write_temp("pfl_cli_chain.json", to_json(m).dump());
}

}  // namespace

TEST_CASE("decide exit codes and output") {
  auto valid = run_cli({"decide", "--logic", "pf", "[p]([p]p -> p) -> [p]p"});
  CHECK(valid.code == 0);
  CHECK(valid.doc()["verdict"] == "valid");
  CHECK(valid.doc()["logic"] == "PF");
  CHECK_FALSE(valid.doc().contains("countermodel"));

  auto invalid = run_cli({"decide", "--logic", "PF", "[p]p -> p"});
  CHECK(invalid.code == 1);
  json j = invalid.doc();
  CHECK(j["verdict"] == "invalid");
  CHECK(j["certificate_ok"] == true);
  Model m = model_from_json(j["countermodel"]);
  CHECK_FALSE(eval(m, j["world"].get<std::size_t>(), parse("[p]p -> p")));

  auto reduced = run_cli({"decide", "--logic", "PFw", "[f]p -> [p]p"});
  CHECK(reduced.code == 1);
  CHECK(reduced.doc().contains("refutes"));
}

TEST_CASE("logic names are case-insensitive") {
  CHECK(run_cli({"decide", "--logic", "S4.2", "<f>[f]p -> [f]<f>p"}).code == 0);
  CHECK(run_cli({"decide", "--logic", "s4.2", "<f>[f]p -> [f]<f>p"}).code == 0);
  CHECK(run_cli({"decide", "--logic", "GLTRIV", "[f]p <-> p"}).code == 0);
}

TEST_CASE("budget exhaustion exits with 3") {
  auto r = run_cli({"decide", "--logic", "pf", "--budget", "0", "[p]p & [p]q -> [p][p](p & q)"});
  CHECK(r.code == 3);
  CHECK(r.doc()["verdict"] == "budget");
  CHECK(r.doc().contains("reason"));
}

TEST_CASE("usage and input errors exit with 2") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"decide", "[p]p"}).code == 2);
  CHECK(run_cli({"decide", "--logic", "k4", "p"}).code == 2);
  auto syntax = run_cli({"decide", "--logic", "pf", "p ->"});
  CHECK(syntax.code == 2);
  CHECK(syntax.err.find("4") != std::string::npos);
  CHECK(run_cli({"decide", "--logic", "gl", "[f]p"}).code == 2);
  CHECK(run_cli({"frame-check", "/nonexistent/model.json"}).code == 2);
  CHECK(run_cli({"model-check", write_temp("pfl_cli_bad.json", "{\"worlds\": 1"), "0", "p"}).code == 2);
  CHECK(run_cli({"model-check", chain_model_file(), "7", "p"}).code == 2);
  CHECK(run_cli({"oracle", "--logic", "pf", "--bound", "1,x,2", "p"}).code == 2);
  CHECK(run_cli({"oracle", "--logic", "pf", "--jobs", "0", "p"}).code == 2);
}

TEST_CASE("frame-check reports a cyclic rel_p") {
  auto r = run_cli({"frame-check", cyclic_model_file()});
  CHECK(r.code == 1);
  json j = r.doc();
  CHECK(j["p_conversely_wellfounded"] == false);
  CHECK(j["is_pf_frame"] == false);
  CHECK(j["f_reflexive"] == true);

  auto ok = run_cli({"frame-check", chain_model_file()});
  CHECK(ok.code == 0);
  CHECK(ok.doc()["is_pf_frame"] == true);
  CHECK(ok.doc()["clusters"].size() == 2);
}

TEST_CASE("model-check") {
  auto t = run_cli({"model-check", chain_model_file(), "0", "[p]p"});
  CHECK(t.code == 0);
  CHECK(t.doc()["value"] == true);
  auto f = run_cli({"model-check", chain_model_file(), "0", "p"});
  CHECK(f.code == 1);
  CHECK(f.doc()["value"] == false);
  auto pretty = run_cli({"model-check", "--pretty", chain_model_file(), "1", "p"});
  CHECK(pretty.out == "p is true at world 1\n");
}

TEST_CASE("cnf") {
  auto r = run_cli({"cnf", "[f]([p]p | q)"});
  CHECK(r.code == 0);
  CHECK(r.doc()["cnf"] == "([p]p | [f]q)");
  CHECK(r.doc()["clauses"] == 1);
  CHECK(r.doc()["modal_degree"] == 1);
  CHECK(run_cli({"cnf", "--pretty", "p"}).out == "p\n");
}

TEST_CASE("oracle") {
  auto none = run_cli({"oracle", "--logic", "pf", "--bound", "2,2,3", "[f]q -> q"});
  CHECK(none.code == 0);
  CHECK(none.doc()["result"] == "none");
  CHECK(none.doc()["bound"][0] == 2);
  CHECK(none.doc()["frames_checked"].get<std::size_t>() > 0);

  auto found = run_cli({"oracle", "--logic", "pf", "--jobs", "2", "[p]p -> p"});
  CHECK(found.code == 1);
  CHECK(found.doc()["result"] == "countermodel");
  Model m = model_from_json(found.doc()["countermodel"]);
  CHECK_FALSE(eval(m, found.doc()["world"].get<std::size_t>(), parse("[p]p -> p")));

  CHECK(run_cli({"oracle", "--logic", "pf", "--bound", "1,3,3,8", "[f](p | q | r) -> p"}).code == 2);
}

TEST_CASE("dagger") {
  auto r = run_cli({"dagger", "[f]([p]p & r)"});
  CHECK(r.code == 0);
  json j = r.doc();
  REQUIRE(j["fresh"].size() == 1);
  const std::string id = j["fresh"].begin().key();
  CHECK(j["fresh"][id] == "[p]p");
  CHECK(j["dagger"] == print(parse("[f](" + id + " & r)")));
}

TEST_CASE("dot output") {
  auto path = (std::filesystem::temp_directory_path() / "pfl_cli_cm.dot").string();
  std::filesystem::remove(path);
  CHECK(run_cli({"decide", "--logic", "pf", "--dot", path, "[p]p -> p"}).code == 1);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  CHECK(text.find("digraph") != std::string::npos);
  CHECK(text.find("peripheries=2") != std::string::npos);
}
