#pragma once

#include <optional>
#include <vector>

#include "pfl/formula.hpp"

namespace pfl {

/// [p]D_0 | ... | [p]D_{k-1} | <p>E | F with F free of [p].
struct PCnfClause {
  std::vector<Formula> boxp_disjuncts;
  std::optional<Formula> diamondp_disjunct;
  /// Bot when the clause has no [p]-free part.
  Formula lf_part = bot();

  /// Disjuncts left-associated in the order boxes, diamond, F; Bot F is
  /// omitted unless it is the only disjunct.
  Formula to_formula() const;
};

/// Clauses of a PF-equivalent [p]-CNF with the same modal degree. The
/// propositional layer uses plain distribution, so the output can be
/// exponentially larger than the input.
std::vector<PCnfClause> boxp_cnf_clauses(const Formula& a);

/// Left-associated conjunction of boxp_cnf_clauses(a).
Formula to_boxp_cnf(const Formula& a);

/// A conjunction of disjunctions whose disjuncts are [p]D, at most one
/// ~[p]~E, and [p]-free formulas.
bool is_boxp_cnf(const Formula& a);

}  // namespace pfl
