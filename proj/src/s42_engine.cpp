#include "s42_engine.hpp"

#include <algorithm>
#include <bit>

#include "pfl/solver.hpp"

namespace pfl::detail {

namespace {

constexpr std::uint64_t kLanePattern[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

// Substitutes rigid constants and folds the resulting constants away.
Formula fold(const Formula& a, const std::map<std::string, bool>& rigid) {
  switch (a.op()) {
    case Op::Var: {
      auto it = rigid.find(a.name());
      if (it == rigid.end()) return a;
      return it->second ? top() : bot();
    }
    case Op::Top:
    case Op::Bot: return a;
    case Op::Not: {
      Formula c = fold(a.child(), rigid);
      if (c.is(Op::Top)) return bot();
      if (c.is(Op::Bot)) return top();
      return neg(c);
    }
    case Op::And: {
      Formula l = fold(a.lhs(), rigid), r = fold(a.rhs(), rigid);
      if (l.is(Op::Bot) || r.is(Op::Bot)) return bot();
      if (l.is(Op::Top)) return r;
      if (r.is(Op::Top)) return l;
      return conj(l, r);
    }
    case Op::Or: {
      Formula l = fold(a.lhs(), rigid), r = fold(a.rhs(), rigid);
      if (l.is(Op::Top) || r.is(Op::Top)) return top();
      if (l.is(Op::Bot)) return r;
      if (r.is(Op::Bot)) return l;
      return disj(l, r);
    }
    case Op::Imp: {
      Formula l = fold(a.lhs(), rigid), r = fold(a.rhs(), rigid);
      if (l.is(Op::Bot) || r.is(Op::Top)) return top();
      if (l.is(Op::Top)) return r;
      if (r.is(Op::Bot)) return l.is(Op::Not) ? l.child() : neg(l);
      return implies(l, r);
    }
    case Op::BoxF: {
      // rel_f is reflexive, so [f]F is F
      Formula c = fold(a.child(), rigid);
      if (c.is(Op::Top) || c.is(Op::Bot)) return c;
      return box_f(c);
    }
    case Op::BoxP: break;
  }
  throw std::invalid_argument("S4.2 input contains [p]: " + print(a));
}

void collect_atoms(const Formula& a, FormulaSet& boxes, std::set<std::string>& vars) {
  if (a.is(Op::Var)) vars.insert(a.name());
  if (a.is(Op::BoxF)) boxes.insert(a);
  if (a.is_unary()) collect_atoms(a.child(), boxes, vars);
  if (a.is_binary()) {
    collect_atoms(a.lhs(), boxes, vars);
    collect_atoms(a.rhs(), boxes, vars);
  }
}

}  // namespace

S42Engine::S42Engine(const std::vector<Formula>& globals, const std::vector<Formula>& goals,
                     const std::map<std::string, bool>& rigid, std::size_t max_atoms,
                     Clock::time_point deadline)
    : deadline_(deadline) {
  for (const auto& [name, value] : rigid)
    if (value) rigid_true_.push_back(name);

  std::vector<Formula> fglobals, fgoals;
  FormulaSet boxes;
  std::set<std::string> vars;
  for (const auto& g : globals) {
    fglobals.push_back(fold(g, rigid));
    collect_atoms(fglobals.back(), boxes, vars);
  }
  for (const auto& g : goals) {
    fgoals.push_back(fold(g, rigid));
    collect_atoms(fgoals.back(), boxes, vars);
  }
  vars_.assign(vars.begin(), vars.end());
  nv_ = vars_.size();
  b_ = boxes.size();
  for (const auto& box : boxes) {
    atom_index_.emplace(box, bodies_.size());
    bodies_.push_back(box.child());
  }
  const std::size_t n_atoms = nv_ + b_;
  if (n_atoms > max_atoms || b_ > 30)
    throw BudgetExceeded("cluster query needs " + std::to_string(n_atoms) + " atoms (cap " +
                         std::to_string(max_atoms) + ")");

  const std::uint64_t types = std::uint64_t{1} << n_atoms;
  words_ = types >= 64 ? types / 64 : 1;
  lane_mask_ = types >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << types) - 1;

  valid_.assign(words_, lane_mask_);
  for (const auto& g : fglobals) {
    const Bits& t = table(g);
    for (std::size_t i = 0; i < words_; ++i) valid_[i] &= t[i];
  }
  for (std::size_t j = 0; j < b_; ++j) {
    body_tables_.push_back(table(bodies_[j]));
    const Bits& box = table(box_f(bodies_[j]));
    for (std::size_t i = 0; i < words_; ++i) valid_[i] &= ~box[i] | body_tables_[j][i];
  }

  const std::size_t masks = std::size_t{1} << b_;
  const std::size_t block = std::size_t{1} << nv_;
  valid_any_.assign(masks, 0);
  refutes_.assign(masks, 0);
  // Visits each (word, mask block) pair of x that has a set bit.
  auto for_blocks = [&](const Bits& x, auto&& fn) {
    for (std::size_t i = 0; i < words_; ++i) {
      if (!x[i]) continue;
      if (nv_ >= 6) {
        fn(static_cast<std::uint32_t>((i * 64) >> nv_));
      } else {
        const std::uint64_t bm = block >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << block) - 1;
        for (std::size_t k = 0; k * block < 64 && i * 64 + k * block < types; ++k)
          if ((x[i] >> (k * block)) & bm) fn(static_cast<std::uint32_t>((i * 64 + k * block) >> nv_));
      }
    }
  };
  for_blocks(valid_, [&](std::uint32_t m) { valid_any_[m] = 1; });
  Bits x(words_);
  for (std::size_t j = 0; j < b_; ++j) {
    for (std::size_t i = 0; i < words_; ++i) x[i] = valid_[i] & ~body_tables_[j][i];
    for_blocks(x, [&](std::uint32_t m) { refutes_[m] |= 1u << j; });
  }

  // Final-cluster search: a mask beta can close a model when every atom it
  // leaves false is refuted inside beta itself; then masks below beta are
  // realizable when each missing atom is refuted at or above them.
  final_of_.assign(masks, -1);
  std::size_t open = std::count(valid_any_.begin(), valid_any_.end(), 1);
  const std::uint32_t full = static_cast<std::uint32_t>(masks - 1);
  std::vector<std::uint32_t> reach(masks, 0);
  for (std::uint32_t beta = 0; beta < masks && open > 0; ++beta) {
    if (!valid_any_[beta] || (~beta & full & ~refutes_[beta])) continue;
    if ((beta & 255) == 0 && Clock::now() > deadline_) throw BudgetExceeded("time limit reached");
    for (std::uint32_t sub = beta;; sub = (sub - 1) & beta) {
      std::uint32_t cover = 0;
      for (std::uint32_t rest = beta & ~sub; rest; rest &= rest - 1)
        cover |= reach[sub | (rest & -rest)];
      bool ok = valid_any_[sub] && !(~sub & full & ~(cover | refutes_[sub]));
      reach[sub] = cover | (ok ? refutes_[sub] : 0);
      if (ok && final_of_[sub] < 0) {
        final_of_[sub] = beta;
        --open;
      }
      if (sub == 0) break;
    }
  }

  Bits good(words_, 0);
  for (std::size_t i = 0; i < words_; ++i) {
    if (!valid_[i]) continue;
    if (nv_ >= 6) {
      if (final_of_[(i * 64) >> nv_] >= 0) good[i] = valid_[i];
    } else {
      for (std::size_t lane = 0; lane < 64 && i * 64 + lane < types; ++lane)
        if (final_of_[(i * 64 + lane) >> nv_] >= 0) good[i] |= valid_[i] & (std::uint64_t{1} << lane);
    }
  }
  for (const auto& g : fgoals) {
    const Bits& t = table(g);
    std::optional<std::uint64_t> root;
    for (std::size_t i = 0; i < words_ && !root; ++i)
      if (std::uint64_t w = good[i] & t[i]) root = i * 64 + std::countr_zero(w);
    goal_root_.push_back(root);
    goal_sat_.push_back(root.has_value());
  }
}

const S42Engine::Bits& S42Engine::table(const Formula& a) {
  if (auto it = tables_.find(a); it != tables_.end()) return it->second;
  Bits out(words_);
  auto atom = [&](std::size_t pos) {
    for (std::size_t i = 0; i < words_; ++i)
      out[i] = pos < 6 ? kLanePattern[pos] : (((i >> (pos - 6)) & 1) ? ~std::uint64_t{0} : 0);
  };
  switch (a.op()) {
    case Op::Var: {
      auto it = std::lower_bound(vars_.begin(), vars_.end(), a.name());
      atom(static_cast<std::size_t>(it - vars_.begin()));
      break;
    }
    case Op::Top: out.assign(words_, ~std::uint64_t{0}); break;
    case Op::Bot: break;
    case Op::Not: {
      const Bits& c = table(a.child());
      for (std::size_t i = 0; i < words_; ++i) out[i] = ~c[i];
      break;
    }
    case Op::And:
    case Op::Or:
    case Op::Imp: {
      const Bits& l = table(a.lhs());
      const Bits& r = table(a.rhs());
      for (std::size_t i = 0; i < words_; ++i)
        out[i] = a.is(Op::And) ? (l[i] & r[i]) : a.is(Op::Or) ? (l[i] | r[i]) : (~l[i] | r[i]);
      break;
    }
    case Op::BoxF: atom(nv_ + atom_index_.at(a)); break;
    case Op::BoxP: throw std::invalid_argument("S4.2 input contains [p]");
  }
  for (auto& w : out) w &= lane_mask_;
  return tables_.emplace(a, std::move(out)).first->second;
}

std::vector<char> S42Engine::realizable_under(std::uint32_t beta) const {
  const std::size_t masks = std::size_t{1} << b_;
  const std::uint32_t full = static_cast<std::uint32_t>(masks - 1);
  std::vector<std::uint32_t> reach(masks, 0);
  std::vector<char> ok(masks, 0);
  for (std::uint32_t sub = beta;; sub = (sub - 1) & beta) {
    std::uint32_t cover = 0;
    for (std::uint32_t rest = beta & ~sub; rest; rest &= rest - 1) cover |= reach[sub | (rest & -rest)];
    ok[sub] = valid_any_[sub] && !(~sub & full & ~(cover | refutes_[sub]));
    reach[sub] = cover | (ok[sub] ? refutes_[sub] : 0);
    if (sub == 0) break;
  }
  return ok;
}

std::optional<std::uint64_t> S42Engine::lowest_type(std::uint32_t mask,
                                                    std::optional<std::size_t> refuting) const {
  const std::uint64_t lo = std::uint64_t{mask} << nv_;
  const std::uint64_t hi = std::uint64_t{mask + 1} << nv_;
  for (std::uint64_t t = lo; t < hi; ++t)
    if (test(valid_, t) && (!refuting || !test(body_tables_[*refuting], t))) return t;
  return std::nullopt;
}

std::optional<PointedModel> S42Engine::model(std::size_t goal) const {
  const auto& root = goal_root_.at(goal);
  if (!root) return std::nullopt;
  const std::uint32_t beta = static_cast<std::uint32_t>(final_of_[mask_of(*root)]);
  const auto ok = realizable_under(beta);

  std::vector<std::uint64_t> worlds;
  auto add = [&](std::uint64_t t) {
    if (std::find(worlds.begin(), worlds.end(), t) == worlds.end()) worlds.push_back(t);
  };
  add(*root);
  if (mask_of(*root) != beta) add(*lowest_type(beta, std::nullopt));

  for (std::size_t i = 0; i < worlds.size(); ++i) {
    const std::uint32_t m = mask_of(worlds[i]);
    for (std::size_t j = 0; j < b_; ++j) {
      if ((m >> j) & 1) continue;
      bool met = std::any_of(worlds.begin(), worlds.end(), [&](std::uint64_t u) {
        return (mask_of(u) & m) == m && !test(body_tables_[j], u);
      });
      if (met) continue;
      const std::uint32_t free = beta & ~m;
      std::optional<std::uint32_t> pick;
      for (std::uint32_t s = 0;; s = (s - free) & free) {
        std::uint32_t cand = m | s;
        if (ok[cand] && ((refutes_[cand] >> j) & 1)) {
          pick = cand;
          break;
        }
        if (s == free) break;
      }
      if (!pick) throw std::logic_error("S4.2 model construction lost a witness");
      add(*lowest_type(*pick, j));
    }
  }

  const std::size_t n = worlds.size();
  Model model{Frame(n)};
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y)
      if ((mask_of(worlds[x]) & ~mask_of(worlds[y])) == 0) model.frame.rel_f.set(x, y);
    for (std::size_t k = 0; k < nv_; ++k)
      if ((worlds[x] >> k) & 1) model.valuation[x].insert(vars_[k]);
    model.valuation[x].insert(rigid_true_.begin(), rigid_true_.end());
  }
  return PointedModel{std::move(model), 0};
}

}  // namespace pfl::detail
