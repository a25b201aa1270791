#include "pfl/normalform.hpp"

#include <algorithm>

namespace pfl {

namespace {

// Internal clause: a missing lf part is the disjunction unit.
struct Clause {
  std::vector<Formula> boxes;
  std::optional<Formula> diamond;
  std::optional<Formula> lf;
};

using Clauses = std::vector<Clause>;

Clause merge(const Clause& a, const Clause& b) {
  Clause out = a;
  for (const auto& d : b.boxes)
    if (std::find(out.boxes.begin(), out.boxes.end(), d) == out.boxes.end()) out.boxes.push_back(d);
  if (b.diamond) out.diamond = out.diamond && *out.diamond != *b.diamond ? disj(*out.diamond, *b.diamond) : *b.diamond;
  if (b.lf) out.lf = out.lf && *out.lf != *b.lf ? disj(*out.lf, *b.lf) : *b.lf;
  return out;
}

Clauses product(const Clauses& a, const Clauses& b) {
  Clauses out;
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(merge(x, y));
  return out;
}

// Each literal of a clause, negated, as a unit clause.
Clauses negated_literals(const Clause& c) {
  Clauses out;
  for (const auto& d : c.boxes) out.push_back(Clause{{}, pseudo_negate(d), std::nullopt});
  if (c.diamond) out.push_back(Clause{{pseudo_negate(*c.diamond)}, std::nullopt, std::nullopt});
  if (c.lf) out.push_back(Clause{{}, std::nullopt, pseudo_negate(*c.lf)});
  return out;
}

Clauses cnf(const Formula& a) {
  if (in_lf(a)) return {Clause{{}, std::nullopt, a}};
  switch (a.op()) {
    case Op::BoxP: return {Clause{{a.child()}, std::nullopt, std::nullopt}};
    case Op::And: {
      Clauses out = cnf(a.lhs());
      for (auto& c : cnf(a.rhs())) out.push_back(std::move(c));
      return out;
    }
    case Op::Or: return product(cnf(a.lhs()), cnf(a.rhs()));
    case Op::Imp: return cnf(disj(neg(a.lhs()), a.rhs()));
    case Op::Not: {
      // not (C_1 & ... & C_n) is the disjunction over choices of one negated
      // literal per clause; the seed is the empty clause, i.e. F.
      Clauses out{Clause{}};
      for (const auto& c : cnf(a.child())) out = product(out, negated_literals(c));
      return out;
    }
    case Op::BoxF: {
      // [f] distributes over & and, by reflexivity and the interaction
      // axioms, passes through [p]- and <p>-disjuncts onto the lf part.
      Clauses out = cnf(a.child());
      for (auto& c : out)
        if (c.lf) c.lf = box_f(*c.lf);
      return out;
    }
    default: break;
  }
  return {Clause{{}, std::nullopt, a}};
}

Formula left_assoc(Op op, const std::vector<Formula>& items) {
  Formula acc = items.front();
  for (std::size_t i = 1; i < items.size(); ++i) acc = Formula::make(op, acc, items[i]);
  return acc;
}

void flatten(const Formula& a, Op op, std::vector<Formula>& out) {
  if (a.is(op)) {
    flatten(a.lhs(), op, out);
    flatten(a.rhs(), op, out);
  } else {
    out.push_back(a);
  }
}

}  // namespace

Formula PCnfClause::to_formula() const {
  std::vector<Formula> parts;
  for (const auto& d : boxp_disjuncts) parts.push_back(box_p(d));
  if (diamondp_disjunct) parts.push_back(neg(box_p(neg(*diamondp_disjunct))));
  if (!lf_part.is(Op::Bot) || parts.empty()) parts.push_back(lf_part);
  return left_assoc(Op::Or, parts);
}

std::vector<PCnfClause> boxp_cnf_clauses(const Formula& a) {
  std::vector<PCnfClause> out;
  std::vector<Formula> seen;
  for (const auto& c : cnf(a)) {
    PCnfClause pc{c.boxes, c.diamond, c.lf.value_or(bot())};
    Formula f = pc.to_formula();
    if (std::find(seen.begin(), seen.end(), f) != seen.end()) continue;
    seen.push_back(f);
    out.push_back(std::move(pc));
  }
  return out;
}

Formula to_boxp_cnf(const Formula& a) {
  std::vector<Formula> parts;
  for (const auto& c : boxp_cnf_clauses(a)) parts.push_back(c.to_formula());
  return left_assoc(Op::And, parts);
}

bool is_boxp_cnf(const Formula& a) {
  std::vector<Formula> conjuncts;
  flatten(a, Op::And, conjuncts);
  for (const auto& c : conjuncts) {
    std::vector<Formula> disjuncts;
    flatten(c, Op::Or, disjuncts);
    int diamonds = 0;
    for (const auto& d : disjuncts) {
      if (d.is(Op::BoxP) || in_lf(d)) continue;
      if (d.is(Op::Not) && d.child().is(Op::BoxP) && d.child().child().is(Op::Not)) {
        ++diamonds;
        continue;
      }
      return false;
    }
    if (diamonds > 1) return false;
  }
  return true;
}

}  // namespace pfl
