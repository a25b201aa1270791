#include "pfl/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pfl/formula.hpp"
#include "pfl/kripke.hpp"
#include "pfl/model_io.hpp"
#include "pfl/normalform.hpp"
#include "pfl/oracle.hpp"
#include "pfl/solver.hpp"

namespace pfl {

namespace {

using nlohmann::json;

// Input problems detected after argument parsing; mapped to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

LogicId logic_arg(const std::string& name) {
  auto l = parse_logic(name);
  if (!l) throw InputError("unknown logic '" + name + "' (expected gl, s4.2, s, pf, pfw, gltriv)");
  return *l;
}

Formula formula_arg(const std::string& text) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw InputError(e.what());
  }
}

Model model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  try {
    return model_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
}

OracleBound bound_arg(const std::string& text) {
  std::vector<std::uint64_t> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      parts.push_back(std::stoull(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InputError("bad --bound component '" + item + "'");
    }
  }
  if (parts.size() != 3 && parts.size() != 4)
    throw InputError("--bound takes clusters,worlds-per-cluster,worlds-total[,max-valuations]");
  OracleBound b;
  b.max_clusters = parts[0];
  b.max_worlds_per_cluster = parts[1];
  b.max_worlds_total = parts[2];
  if (parts.size() == 4) b.max_valuations = parts[3];
  return b;
}

void write_dot(const std::string& path, const PointedModel& pm) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << to_dot(pm.model, pm.world);
}

void emit(std::ostream& out, const json& j) { out << j.dump() << "\n"; }

json report_json(const FrameReport& r) {
  return json{{"p_transitive", r.p_transitive},
              {"p_conversely_wellfounded", r.p_conversely_wellfounded},
              {"f_reflexive", r.f_reflexive},
              {"f_transitive", r.f_transitive},
              {"f_directed", r.f_directed},
              {"fc1", r.fc1},
              {"fc2", r.fc2},
              {"fc3", r.fc3},
              {"nice", r.nice},
              {"is_pf_frame", r.is_pf_frame},
              {"is_rooted_nice", r.is_rooted_nice},
              {"is_pba_clusters", r.is_pba_clusters}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision procedures for the bimodal logic PF and its neighbours", "pflogic"};
  app.require_subcommand(1);

  std::string logic_name, formula_text, file, bound_text = "3,3,6", dot_path;
  std::size_t world = 0, budget_memo = Budget{}.max_memo;
  unsigned jobs = 1;
  bool pretty = false;

  auto add_common = [&](CLI::App* sub) { sub->add_flag("--pretty", pretty, "Human-readable output"); };

  auto* decide_cmd = app.add_subcommand("decide", "Decide validity in a logic");
  decide_cmd->add_option("--logic", logic_name, "gl, s4.2, s, pf, pfw or gltriv")->required();
  decide_cmd->add_option("--budget", budget_memo, "Cap on memoized search states");
  decide_cmd->add_option("--dot", dot_path, "Write the countermodel as Graphviz");
  decide_cmd->add_option("formula", formula_text)->required();
  add_common(decide_cmd);

  auto* mc_cmd = app.add_subcommand("model-check", "Evaluate a formula at a world of a model file");
  mc_cmd->add_option("model", file)->required();
  mc_cmd->add_option("world", world)->required();
  mc_cmd->add_option("formula", formula_text)->required();
  add_common(mc_cmd);

  auto* fc_cmd = app.add_subcommand("frame-check", "Classify the frame of a model file");
  fc_cmd->add_option("model", file)->required();
  add_common(fc_cmd);

  auto* cnf_cmd = app.add_subcommand("cnf", "Convert to [p]-conjunctive normal form");
  cnf_cmd->add_option("formula", formula_text)->required();
  add_common(cnf_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force countermodel search over small frames");
  oracle_cmd->add_option("--logic", logic_name)->required();
  oracle_cmd->add_option("--bound", bound_text, "clusters,worlds-per-cluster,worlds-total[,valuations]");
  oracle_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--dot", dot_path, "Write the countermodel as Graphviz");
  oracle_cmd->add_option("formula", formula_text)->required();
  add_common(oracle_cmd);

  auto* dagger_cmd = app.add_subcommand("dagger", "Replace [p]-subformulas by fresh variables");
  dagger_cmd->add_option("formula", formula_text)->required();
  add_common(dagger_cmd);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (decide_cmd->parsed()) {
      LogicId logic = logic_arg(logic_name);
      Formula a = formula_arg(formula_text);
      Budget budget;
      budget.max_memo = budget_memo;
      Verdict v;
      try {
        v = decide(logic, a, budget);
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      json j{{"logic", to_string(logic)}, {"formula", print(a)}, {"verdict", to_string(v.outcome)}};
      if (v.countermodel) {
        j["countermodel"] = to_json(v.countermodel->model);
        j["world"] = v.countermodel->world;
        j["certificate_ok"] = v.certificate_ok;
        if (v.refutes) j["refutes"] = print(*v.refutes);
        write_dot(dot_path, *v.countermodel);
      }
      if (v.outcome == Outcome::Budget) j["reason"] = v.budget_reason;
      if (pretty) {
        out << to_string(logic) << " " << print(a) << ": " << to_string(v.outcome) << "\n";
        if (v.countermodel) {
          if (v.refutes) out << "countermodel refutes " << print(*v.refutes) << "\n";
          out << "countermodel at world " << v.countermodel->world << " (certificate "
              << (v.certificate_ok ? "ok" : "FAILED") << ")\n"
              << to_json(v.countermodel->model).dump(2) << "\n";
        }
        if (v.outcome == Outcome::Budget) out << v.budget_reason << "\n";
      } else {
        emit(out, j);
      }
      return v.valid() ? 0 : v.invalid() ? 1 : 3;
    }

    if (mc_cmd->parsed()) {
      Model m = model_file(file);
      Formula a = formula_arg(formula_text);
      if (world >= m.worlds()) throw InputError("world " + std::to_string(world) + " is not in the model");
      bool value = eval(m, world, a);
      if (pretty)
        out << print(a) << " is " << (value ? "true" : "false") << " at world " << world << "\n";
      else
        emit(out, json{{"formula", print(a)}, {"world", world}, {"value", value}});
      return value ? 0 : 1;
    }

    if (fc_cmd->parsed()) {
      Model m = model_file(file);
      auto rep = check_frame(m.frame);
      auto cd = clusters(m.frame);
      json j = report_json(rep);
      j["clusters"] = cd.clusters;
      if (pretty) {
        for (const auto& [k, v] : j.items())
          if (v.is_boolean()) out << k << ": " << (v.get<bool>() ? "yes" : "no") << "\n";
        out << "clusters: " << cd.clusters.size() << "\n";
      } else {
        emit(out, j);
      }
      return rep.is_pf_frame ? 0 : 1;
    }

    if (cnf_cmd->parsed()) {
      Formula a = formula_arg(formula_text);
      auto clauses = boxp_cnf_clauses(a);
      Formula c = to_boxp_cnf(a);
      if (pretty) {
        out << print(c) << "\n";
      } else {
        emit(out, json{{"formula", print(a)},
                       {"cnf", print(c)},
                       {"clauses", clauses.size()},
                       {"modal_degree", modal_degree(c)}});
      }
      return 0;
    }

    if (oracle_cmd->parsed()) {
      LogicId logic = logic_arg(logic_name);
      Formula a = formula_arg(formula_text);
      OracleBound b = bound_arg(bound_text);
      OracleVerdict ov;
      try {
        ov = brute_validity(logic, a, b, jobs);
      } catch (const GuardExceeded& e) {
        throw InputError(e.what());
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      json j{{"logic", to_string(logic)},
             {"formula", print(a)},
             {"bound", {b.max_clusters, b.max_worlds_per_cluster, b.max_worlds_total, b.max_valuations}},
             {"frames_checked", ov.frames_checked},
             {"result", ov.found() ? "countermodel" : "none"}};
      if (ov.found()) {
        j["countermodel"] = to_json(ov.countermodel->model);
        j["world"] = ov.countermodel->world;
        write_dot(dot_path, *ov.countermodel);
      }
      if (pretty) {
        out << to_string(logic) << " " << print(a) << ": "
            << (ov.found() ? "countermodel found" : "no countermodel within bound") << " ("
            << ov.frames_checked << " frames)\n";
        if (ov.found()) out << j["countermodel"].dump(2) << "\n";
      } else {
        emit(out, j);
      }
      return ov.found() ? 1 : 0;
    }

    if (dagger_cmd->parsed()) {
      Formula a = formula_arg(formula_text);
      FreshMap fresh = make_fresh_map(a, variables(a));
      Formula d = dagger(a, fresh);
      json map = json::object();
      for (const auto& [body, id] : fresh) map[id] = print(box_p(body));
      if (pretty) {
        out << print(d) << "\n";
        for (const auto& [id, boxed] : map.items()) out << "  " << id << " = " << boxed.get<std::string>() << "\n";
      } else {
        emit(out, json{{"formula", print(a)}, {"dagger", print(d)}, {"fresh", map}});
      }
      return 0;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace pfl
