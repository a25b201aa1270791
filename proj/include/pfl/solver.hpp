#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "pfl/formula.hpp"
#include "pfl/kripke.hpp"

namespace pfl {

enum class LogicId { GL, S42, S, PF, PFOmega, GLTriv };

/// Canonical display name: GL, S4.2, S, PF, PFw, GLTriv.
std::string to_string(LogicId l);
/// Case-insensitive: gl, s4.2|s42, s, pf, pfw|pfomega, gltriv.
std::optional<LogicId> parse_logic(std::string_view name);

/// Resource limits for one decision call.
struct Budget {
  /// Cap on memoized search states (assignments and cluster queries).
  std::size_t max_memo = 1'000'000;
  /// Cap on free variables plus [f]-atoms seen by one cluster query.
  std::size_t max_atoms = 24;
  std::chrono::milliseconds max_time{300'000};
};

/// Raised when a search exceeds its Budget; never a verdict.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rooted S4.2 model in which goal holds at the root, every global holds
/// everywhere, and each rigid variable is constant at its mapped value.
/// Inputs must be free of [p]; throws std::invalid_argument otherwise.
std::optional<PointedModel> s42_sat(const Formula& goal, const FormulaSet& globals = {},
                                    const std::map<std::string, bool>& rigid = {},
                                    const Budget& budget = {});

/// Nice PF-model with a world satisfying goal, the rel_f-root of the
/// rel_p-root cluster. Throws BudgetExceeded.
std::optional<PointedModel> pf_sat(const Formula& goal, const Budget& budget = {});

/// As pf_sat for [f]-free goals: every cluster is one rel_f-reflexive world.
std::optional<PointedModel> gl_sat(const Formula& goal, const Budget& budget = {});

/// big_conj(phi_set(a)) -> a, with T as the antecedent when the set is empty.
Formula reduce_pfomega(const Formula& a);
/// big_conj(psi_set(a)) -> a; a must be free of [f].
Formula reduce_s(const Formula& a);
/// Deletes every [f].
Formula erase_boxf(const Formula& a);

enum class Outcome { Valid, Invalid, Budget };
std::string to_string(Outcome o);

struct Verdict {
  LogicId logic = LogicId::PF;
  Formula formula;
  Outcome outcome = Outcome::Budget;
  /// Present for Invalid.
  std::optional<PointedModel> countermodel;
  /// For PFw and S: the reduced formula the countermodel refutes.
  std::optional<Formula> refutes;
  bool certificate_ok = false;
  std::string budget_reason;

  bool valid() const { return outcome == Outcome::Valid; }
  bool invalid() const { return outcome == Outcome::Invalid; }
};

/// Throws std::invalid_argument when a is outside the logic's language
/// (GL and S need no [f], S4.2 needs no [p]).
Verdict decide(LogicId logic, const Formula& a, const Budget& budget = {});

/// Re-checks a countermodel for the logic's frame class and falsity of
/// `refuted` at the designated world.
bool certificate_ok(LogicId logic, const PointedModel& pm, const Formula& refuted);

}  // namespace pfl
