#include "pfl/solver.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "s42_engine.hpp"

namespace pfl {

namespace {

using detail::S42Engine;
using Clock = std::chrono::steady_clock;
using Bitmask = std::uint64_t;

// Assignment search over the [p]-bodies P of a goal. A cluster labelled v
// has [p]C_i true exactly for the bits of v; its S4.2 part sees each q_i as
// the rigid constant bit i of v and must satisfy C_j for every bit j of its
// parent's label. A false [p]C_i is witnessed by a child whose label
// contains v plus i and which has a world refuting C_i; labels strictly grow
// along rel_p, which keeps the assembled frame acyclic.
class PfSearch {
 public:
  PfSearch(const Formula& goal, bool gl_mode, const Budget& budget)
      : gl_mode_(gl_mode), budget_(budget), deadline_(Clock::now() + budget.max_time) {
    auto bodies = boxp_bodies(goal);
    bodies_.assign(bodies.begin(), bodies.end());
    if (bodies_.size() > 62) throw BudgetExceeded("too many [p]-subformulas");
    fresh_ = make_fresh_map(goal, variables(goal));
    for (const auto& c : bodies_) {
      dagger_.push_back(dagger(c, fresh_));
      q_names_.push_back(fresh_.at(c));
    }
    goal_dagger_ = dagger(goal, fresh_);
  }

  std::optional<PointedModel> run() {
    const std::size_t k = bodies_.size();
    const std::size_t root_goal = k;
    for (Bitmask v = 0; v < (Bitmask{1} << k); ++v)
      if (cluster_sat(v, 0, root_goal) && children_ok(v)) return assemble(v);
    return std::nullopt;
  }

 private:
  struct Query {
    std::vector<Formula> globals;
    std::vector<Formula> goals;
    std::vector<std::size_t> goal_ids;
    std::map<std::string, bool> rigid;
  };

  Query query(Bitmask v, Bitmask parent) const {
    Query q;
    for (std::size_t i = 0; i < bodies_.size(); ++i) {
      q.rigid[q_names_[i]] = (v >> i) & 1;
      if ((parent >> i) & 1) q.globals.push_back(dagger_[i]);
      if (((v & ~parent) >> i) & 1) {
        q.goals.push_back(gl_mode_ ? neg(dagger_[i]) : neg(box_f(dagger_[i])));
        q.goal_ids.push_back(i);
      }
    }
    if (parent == 0) {
      q.goals.push_back(goal_dagger_);
      q.goal_ids.push_back(bodies_.size());
    }
    return q;
  }

  S42Engine engine(const Query& q) const {
    return S42Engine(q.globals, q.goals, q.rigid, budget_.max_atoms, deadline_);
  }

  void charge() {
    if (cluster_memo_.size() + children_memo_.size() > budget_.max_memo)
      throw BudgetExceeded("memo limit of " + std::to_string(budget_.max_memo) + " entries reached");
    if (Clock::now() > deadline_) throw BudgetExceeded("time limit reached");
  }

  // Whether the cluster (v, parent) can realize goal id `goal`.
  bool cluster_sat(Bitmask v, Bitmask parent, std::size_t goal) {
    auto key = std::make_pair(v, parent);
    auto it = cluster_memo_.find(key);
    if (it == cluster_memo_.end()) {
      charge();
      Query q = query(v, parent);
      S42Engine e = engine(q);
      std::vector<bool> sat(bodies_.size() + 1, false);
      for (std::size_t g = 0; g < q.goals.size(); ++g) sat[q.goal_ids[g]] = e.satisfiable(g);
      it = cluster_memo_.emplace(key, std::move(sat)).first;
    }
    return it->second[goal];
  }

  // Whether every false [p]C_i of v has a realizable witness child.
  bool children_ok(Bitmask v) {
    if (auto it = children_memo_.find(v); it != children_memo_.end()) return it->second.has_value();
    charge();
    const std::size_t k = bodies_.size();
    const Bitmask full = (Bitmask{1} << k) - 1;
    std::vector<Bitmask> choice(k, 0);
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      if ((v >> i) & 1) continue;
      const Bitmask base = v | (Bitmask{1} << i);
      const Bitmask free = full & ~base;
      bool found = false;
      for (Bitmask s = 0;; s = (s - free) & free) {
        Bitmask child = base | s;
        if (cluster_sat(child, v, i) && children_ok(child)) {
          choice[i] = child;
          found = true;
          break;
        }
        if (s == free) break;
      }
      ok = found;
    }
    children_memo_[v] = ok ? std::optional(choice) : std::nullopt;
    return ok;
  }

  PointedModel assemble(Bitmask root_label) {
    struct Node {
      PointedModel cluster;
      std::vector<std::size_t> children;
    };
    std::vector<Node> nodes;
    std::map<std::tuple<Bitmask, Bitmask, std::size_t>, std::size_t> ids;

    std::function<std::size_t(Bitmask, Bitmask, std::size_t)> build =
        [&](Bitmask v, Bitmask parent, std::size_t goal) -> std::size_t {
      auto key = std::make_tuple(v, parent, goal);
      if (auto it = ids.find(key); it != ids.end()) return it->second;
      Query q = query(v, parent);
      S42Engine e = engine(q);
      auto pos = std::find(q.goal_ids.begin(), q.goal_ids.end(), goal) - q.goal_ids.begin();
      auto pm = e.model(static_cast<std::size_t>(pos));
      if (!pm) throw std::logic_error("cluster lost its model during assembly");
      const std::size_t id = nodes.size();
      ids.emplace(key, id);
      nodes.push_back(Node{std::move(*pm), {}});
      const auto& choice = *children_memo_.at(v);
      for (std::size_t i = 0; i < bodies_.size(); ++i) {
        if ((v >> i) & 1) continue;
        std::size_t child = build(choice[i], v, i);
        nodes[id].children.push_back(child);
      }
      return id;
    };
    build(root_label, 0, bodies_.size());

    std::vector<std::size_t> offset(nodes.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      offset[i] = total;
      total += nodes[i].cluster.model.worlds();
    }
    // Shared nodes may precede their parents, so close descendants by DFS.
    std::vector<std::vector<bool>> below(nodes.size(), std::vector<bool>(nodes.size(), false));
    std::vector<bool> done(nodes.size(), false);
    std::function<void(std::size_t)> close = [&](std::size_t i) {
      if (done[i]) return;
      done[i] = true;
      for (auto c : nodes[i].children) {
        close(c);
        below[i][c] = true;
        for (std::size_t d = 0; d < nodes.size(); ++d)
          if (below[c][d]) below[i][d] = true;
      }
    };
    for (std::size_t i = 0; i < nodes.size(); ++i) close(i);

    std::set<std::string> hidden(q_names_.begin(), q_names_.end());
    Model m{Frame(total)};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Model& c = nodes[i].cluster.model;
      for (std::size_t x = 0; x < c.worlds(); ++x) {
        for (const auto& name : c.valuation[x])
          if (!hidden.contains(name)) m.valuation[offset[i] + x].insert(name);
        for (std::size_t y = 0; y < c.worlds(); ++y)
          if (c.frame.rel_f(x, y)) m.frame.rel_f.set(offset[i] + x, offset[i] + y);
      }
      for (std::size_t d = 0; d < nodes.size(); ++d) {
        if (!below[i][d]) continue;
        for (std::size_t x = 0; x < c.worlds(); ++x)
          for (std::size_t y = 0; y < nodes[d].cluster.model.worlds(); ++y)
            m.frame.rel_p.set(offset[i] + x, offset[d] + y);
      }
    }
    return PointedModel{std::move(m), offset[0] + nodes[0].cluster.world};
  }

  bool gl_mode_;
  Budget budget_;
  Clock::time_point deadline_;
  std::vector<Formula> bodies_;
  std::vector<Formula> dagger_;
  std::vector<std::string> q_names_;
  FreshMap fresh_;
  Formula goal_dagger_;
  std::map<std::pair<Bitmask, Bitmask>, std::vector<bool>> cluster_memo_;
  std::map<Bitmask, std::optional<std::vector<Bitmask>>> children_memo_;
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool rooted_at(const Relation& r, std::size_t w) {
  for (std::size_t x = 0; x < r.size(); ++x)
    if (x != w && !r(w, x)) return false;
  return true;
}

}  // namespace

std::string to_string(LogicId l) {
  switch (l) {
    case LogicId::GL: return "GL";
    case LogicId::S42: return "S4.2";
    case LogicId::S: return "S";
    case LogicId::PF: return "PF";
    case LogicId::PFOmega: return "PFw";
    case LogicId::GLTriv: return "GLTriv";
  }
  return "?";
}

std::optional<LogicId> parse_logic(std::string_view name) {
  static const std::map<std::string, LogicId> table = {
      {"gl", LogicId::GL},  {"s4.2", LogicId::S42},    {"s42", LogicId::S42},
      {"s", LogicId::S},    {"pf", LogicId::PF},       {"pfw", LogicId::PFOmega},
      {"pfomega", LogicId::PFOmega}, {"gltriv", LogicId::GLTriv},
  };
  auto it = table.find(lower(name));
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Valid: return "valid";
    case Outcome::Invalid: return "invalid";
    case Outcome::Budget: return "budget";
  }
  return "?";
}

std::optional<PointedModel> s42_sat(const Formula& goal, const FormulaSet& globals,
                                    const std::map<std::string, bool>& rigid, const Budget& budget) {
  if (!in_lf(goal)) throw std::invalid_argument("S4.2 goal contains [p]: " + print(goal));
  for (const auto& g : globals)
    if (!in_lf(g)) throw std::invalid_argument("S4.2 global contains [p]: " + print(g));
  S42Engine e(std::vector<Formula>(globals.begin(), globals.end()), {goal}, rigid, budget.max_atoms,
              Clock::now() + budget.max_time);
  return e.model(0);
}

std::optional<PointedModel> pf_sat(const Formula& goal, const Budget& budget) {
  return PfSearch(goal, false, budget).run();
}

std::optional<PointedModel> gl_sat(const Formula& goal, const Budget& budget) {
  if (!in_lp(goal)) throw std::invalid_argument("GL goal contains [f]: " + print(goal));
  return PfSearch(goal, true, budget).run();
}

Formula reduce_pfomega(const Formula& a) { return implies(big_conj(phi_set(a)), a); }

Formula reduce_s(const Formula& a) { return implies(big_conj(psi_set(a)), a); }

Formula erase_boxf(const Formula& a) {
  switch (a.op()) {
    case Op::Var:
    case Op::Top:
    case Op::Bot: return a;
    case Op::BoxF: return erase_boxf(a.child());
    case Op::Not:
    case Op::BoxP: return Formula::make(a.op(), erase_boxf(a.child()));
    case Op::And:
    case Op::Or:
    case Op::Imp: return Formula::make(a.op(), erase_boxf(a.lhs()), erase_boxf(a.rhs()));
  }
  return a;
}

bool certificate_ok(LogicId logic, const PointedModel& pm, const Formula& refuted) {
  const Model& m = pm.model;
  if (pm.world >= m.worlds() || m.valuation.size() != m.worlds()) return false;
  if (eval(m, pm.world, refuted)) return false;
  auto rep = check_frame(m.frame);
  switch (logic) {
    case LogicId::PF:
    case LogicId::PFOmega: {
      if (!rep.is_rooted_nice) return false;
      auto roots = root_elements(m.frame);
      return std::find(roots.begin(), roots.end(), pm.world) != roots.end();
    }
    case LogicId::S42:
      return rep.f_reflexive && rep.f_transitive && rep.f_directed && rooted_at(m.frame.rel_f, pm.world);
    case LogicId::GLTriv:
      for (std::size_t x = 0; x < m.worlds(); ++x)
        for (std::size_t y = 0; y < m.worlds(); ++y)
          if (m.frame.rel_f(x, y) != (x == y)) return false;
      [[fallthrough]];
    case LogicId::GL:
    case LogicId::S:
      return rep.p_transitive && rep.p_conversely_wellfounded && rooted_at(m.frame.rel_p, pm.world);
  }
  return false;
}

Verdict decide(LogicId logic, const Formula& a, const Budget& budget) {
  if ((logic == LogicId::GL || logic == LogicId::S) && !in_lp(a))
    throw std::invalid_argument(to_string(logic) + " formulas may not contain [f]");
  if (logic == LogicId::S42 && !in_lf(a)) throw std::invalid_argument("S4.2 formulas may not contain [p]");

  Verdict v;
  v.logic = logic;
  v.formula = a;

  if (logic == LogicId::PFOmega || logic == LogicId::S || logic == LogicId::GLTriv) {
    Formula reduced = logic == LogicId::PFOmega ? reduce_pfomega(a)
                      : logic == LogicId::S     ? reduce_s(a)
                                                : erase_boxf(a);
    Verdict inner = decide(logic == LogicId::PFOmega ? LogicId::PF : LogicId::GL, reduced, budget);
    v.outcome = inner.outcome;
    v.budget_reason = inner.budget_reason;
    v.countermodel = std::move(inner.countermodel);
    if (v.countermodel) {
      if (logic == LogicId::GLTriv) {
        v.certificate_ok = certificate_ok(logic, *v.countermodel, a);
      } else {
        v.refutes = reduced;
        v.certificate_ok = certificate_ok(logic, *v.countermodel, reduced);
      }
    }
    return v;
  }

  try {
    std::optional<PointedModel> cm;
    switch (logic) {
      case LogicId::PF: cm = pf_sat(neg(a), budget); break;
      case LogicId::GL: cm = gl_sat(neg(a), budget); break;
      case LogicId::S42: cm = s42_sat(neg(a), {}, {}, budget); break;
      default: break;
    }
    if (cm) {
      v.outcome = Outcome::Invalid;
      v.certificate_ok = certificate_ok(logic, *cm, a);
      v.countermodel = std::move(cm);
    } else {
      v.outcome = Outcome::Valid;
    }
  } catch (const BudgetExceeded& e) {
    v.outcome = Outcome::Budget;
    v.budget_reason = e.what();
  }
  return v;
}

}  // namespace pfl
