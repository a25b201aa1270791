#pragma once

// Type elimination for rooted S4.2 models over the [f]-language.
//
// A type assigns truth values to the free variables and to the [f]-atoms
// [f]B_0..[f]B_{b-1}; types are integers with the variables in the low bits
// and the box mask above them. Worlds of a returned model are types, and
// rel_f is inclusion of box masks, so the final cluster is the unique
// maximal mask.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pfl/formula.hpp"
#include "pfl/kripke.hpp"

namespace pfl::detail {

class S42Engine {
 public:
  using Clock = std::chrono::steady_clock;

  /// Throws BudgetExceeded when variables plus atoms exceed max_atoms or the
  /// deadline passes; std::invalid_argument on a [p] occurrence.
  S42Engine(const std::vector<Formula>& globals, const std::vector<Formula>& goals,
            const std::map<std::string, bool>& rigid, std::size_t max_atoms,
            Clock::time_point deadline);

  std::size_t goal_count() const { return goal_sat_.size(); }
  bool satisfiable(std::size_t goal) const { return goal_sat_.at(goal); }

  /// Model of goal at world 0; absent when unsatisfiable.
  std::optional<PointedModel> model(std::size_t goal) const;

 private:
  using Bits = std::vector<std::uint64_t>;

  const Bits& table(const Formula& a);
  bool test(const Bits& b, std::uint64_t t) const { return (b[t >> 6] >> (t & 63)) & 1; }
  std::uint32_t mask_of(std::uint64_t t) const { return static_cast<std::uint32_t>(t >> nv_); }
  // Realizable masks below final mask beta; index is the mask.
  std::vector<char> realizable_under(std::uint32_t beta) const;
  std::optional<std::uint64_t> lowest_type(std::uint32_t mask, std::optional<std::size_t> refuting) const;

  std::vector<std::string> vars_;
  std::vector<std::string> rigid_true_;
  std::vector<Formula> bodies_;
  std::unordered_map<Formula, std::size_t, FormulaHash> atom_index_;
  std::size_t nv_ = 0;
  std::size_t b_ = 0;
  std::size_t words_ = 1;
  std::uint64_t lane_mask_ = ~std::uint64_t{0};
  std::unordered_map<Formula, Bits, FormulaHash> tables_;
  std::vector<Bits> body_tables_;
  Bits valid_;
  std::vector<char> valid_any_;
  std::vector<std::uint32_t> refutes_;
  std::vector<std::int64_t> final_of_;
  std::vector<std::optional<std::uint64_t>> goal_root_;
  std::vector<bool> goal_sat_;
  Clock::time_point deadline_;
};

}  // namespace pfl::detail
