#include <algorithm>
#include <functional>

#include "pfl/formula.hpp"

namespace pfl {

namespace {

bool occurs(const Formula& a, Op op) {
  if (a.op() == op) return true;
  if (a.is_unary()) return occurs(a.child(), op);
  if (a.is_binary()) return occurs(a.lhs(), op) || occurs(a.rhs(), op);
  return false;
}

void collect_vars(const Formula& a, std::set<std::string>& out) {
  if (a.is(Op::Var)) {
    out.insert(a.name());
  } else if (a.is_unary()) {
    collect_vars(a.child(), out);
  } else if (a.is_binary()) {
    collect_vars(a.lhs(), out);
    collect_vars(a.rhs(), out);
  }
}

void collect_subformulas(const Formula& a, FormulaSet& out) {
  if (!out.insert(a).second) return;
  if (a.is_unary()) {
    collect_subformulas(a.child(), out);
  } else if (a.is_binary()) {
    collect_subformulas(a.lhs(), out);
    collect_subformulas(a.rhs(), out);
  }
}

}  // namespace

bool in_lp(const Formula& a) { return !occurs(a, Op::BoxF); }
bool in_lf(const Formula& a) { return !occurs(a, Op::BoxP); }

Language language_of(const Formula& a) {
  if (in_lp(a)) return Language::LP;
  if (in_lf(a)) return Language::LF;
  return Language::LPF;
}

std::string to_string(Language l) {
  switch (l) {
    case Language::LP: return "LP";
    case Language::LF: return "LF";
    case Language::LPF: return "LPF";
  }
  return "?";
}

std::set<std::string> variables(const Formula& a) {
  std::set<std::string> out;
  collect_vars(a, out);
  return out;
}

std::set<std::string> variables(const std::vector<Formula>& fs) {
  std::set<std::string> out;
  for (const auto& f : fs) collect_vars(f, out);
  return out;
}

FormulaSet subformulas(const Formula& a) {
  FormulaSet out;
  collect_subformulas(a, out);
  return out;
}

Formula pseudo_negate(const Formula& b) { return b.is(Op::Not) ? b.child() : neg(b); }

FormulaSet closure(const Formula& a) {
  FormulaSet sub = subformulas(a);
  FormulaSet out = sub;
  for (const auto& b : sub) {
    out.insert(pseudo_negate(b));
    if (b.is(Op::BoxP)) {
      out.insert(box_f(b.child()));
      out.insert(neg(box_f(b.child())));
    }
  }
  return out;
}

FormulaSet boxp_bodies(const Formula& a) {
  FormulaSet out;
  for (const auto& b : subformulas(a))
    if (b.is(Op::BoxP)) out.insert(b.child());
  return out;
}

FormulaSet phi_set(const Formula& a) {
  FormulaSet out;
  for (const auto& body : boxp_bodies(a)) out.insert(implies(box_p(body), box_f(body)));
  return out;
}

FormulaSet psi_set(const Formula& a) {
  if (!in_lp(a)) throw std::invalid_argument("psi_set requires a formula without [f]: " + print(a));
  FormulaSet out;
  for (const auto& body : boxp_bodies(a)) out.insert(implies(box_p(body), body));
  return out;
}

std::size_t modal_degree(const Formula& a) {
  switch (a.op()) {
    case Op::Var:
    case Op::Top:
    case Op::Bot: return 0;
    case Op::Not:
    case Op::BoxF: return modal_degree(a.child());
    case Op::BoxP: return modal_degree(a.child()) + 1;
    case Op::And:
    case Op::Or:
    case Op::Imp: return std::max(modal_degree(a.lhs()), modal_degree(a.rhs()));
  }
  return 0;
}

Formula dagger(const Formula& a, const FreshMap& fresh) {
  auto vars = variables(a);
  for (const auto& [body, id] : fresh)
    if (vars.contains(id))
      throw std::invalid_argument("fresh identifier '" + id + "' already occurs in " + print(a));

  std::function<Formula(const Formula&)> go = [&](const Formula& f) -> Formula {
    switch (f.op()) {
      case Op::Var:
      case Op::Top:
      case Op::Bot: return f;
      case Op::BoxP: {
        auto it = fresh.find(f.child());
        if (it == fresh.end())
          throw std::invalid_argument("no fresh identifier for [p]-body " + print(f.child()));
        return var(it->second);
      }
      case Op::Not:
      case Op::BoxF: return Formula::make(f.op(), go(f.child()));
      case Op::And:
      case Op::Or:
      case Op::Imp: return Formula::make(f.op(), go(f.lhs()), go(f.rhs()));
    }
    return f;
  };
  return go(a);
}

FreshMap make_fresh_map(const Formula& a, const std::set<std::string>& avoid) {
  FreshMap out;
  std::size_t i = 0;
  for (const auto& body : boxp_bodies(a)) {
    std::string id = "q" + std::to_string(i++);
    while (avoid.contains(id)) id += '_';
    out.emplace(body, id);
  }
  return out;
}

}  // namespace pfl
