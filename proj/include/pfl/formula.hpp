#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfl {

/// Constructor tags, listed in canonical rank order.
enum class Op : std::uint8_t { Var, Top, Bot, Not, And, Or, Imp, BoxP, BoxF };

/// Immutable formula of the bimodal language with boxes [p] and [f].
///
/// Nodes are shared and never mutated after construction, so copies are
/// cheap and values can be handed between threads freely. Equality and
/// ordering are structural: the canonical order compares constructor rank
/// first, then variable names, then children left to right.
class Formula {
 public:
  Formula();  // Top

  Op op() const;
  /// Variable name; empty for every other constructor.
  const std::string& name() const;
  /// Sole child of Not/BoxP/BoxF, left child of binary connectives.
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Formula& child() const { return lhs(); }

  std::size_t size() const;
  std::size_t hash() const;

  bool is(Op o) const { return op() == o; }
  bool is_binary() const;
  bool is_unary() const;

  static Formula make_var(std::string name);
  static Formula make(Op op);
  static Formula make(Op op, Formula child);
  static Formula make(Op op, Formula lhs, Formula rhs);

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Canonically ordered set of formulas.
using FormulaSet = std::set<Formula>;

Formula var(std::string name);
Formula top();
Formula bot();
Formula neg(Formula a);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula box_p(Formula a);
Formula box_f(Formula a);
Formula dia_p(Formula a);
Formula dia_f(Formula a);

/// Right-associated conjunction over the canonical order; Top when empty.
Formula big_conj(const FormulaSet& set);
/// Right-associated disjunction in the given order; Bot when empty.
Formula big_disj(const std::vector<Formula>& items);

// ---------------------------------------------------------------------------
// Concrete syntax

/// Syntax error carrying the byte offset and what the parser would accept.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, std::string found);

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Grammar (lowest precedence first):
///   formula := imp ("<->" imp)?
///   imp     := or ("->" imp)?
///   or      := and ("|" and)*
///   and     := unary ("&" unary)*
///   unary   := ("~" | "[p]" | "[f]" | "<p>" | "<f>") unary | atom
///   atom    := "T" | "F" | ident | "(" formula ")"
/// Diamonds and "<->" are expanded while parsing.
Formula parse(std::string_view text);

/// Fully parenthesized rendering; re-introduces <p>/<f> for ~[p]~ and ~[f]~.
std::string print(const Formula& a);

// ---------------------------------------------------------------------------
// Syntactic operations

enum class Language { LP, LF, LPF };

/// LP when no [f] occurs (this includes purely propositional formulas),
/// otherwise LF when no [p] occurs, otherwise LPF.
Language language_of(const Formula& a);
bool in_lp(const Formula& a);
bool in_lf(const Formula& a);
std::string to_string(Language l);

/// Variable names occurring in a.
std::set<std::string> variables(const Formula& a);
/// Variable names occurring in any member.
std::set<std::string> variables(const std::vector<Formula>& fs);

/// a together with all of its strict subformulas.
FormulaSet subformulas(const Formula& a);

/// C when b = ~C, ~b otherwise.
Formula pseudo_negate(const Formula& b);

/// Sub(a), closed once under pseudo-negation, plus [f]B and ~[f]B for every
/// [p]B in Sub(a).
FormulaSet closure(const Formula& a);

/// Bodies B of the [p]B subformulas of a, canonically ordered.
FormulaSet boxp_bodies(const Formula& a);

/// { [p]B -> [f]B | [p]B in Sub(a) }
FormulaSet phi_set(const Formula& a);

/// { [p]B -> B | [p]B in Sub(a) }; a must be in LP.
FormulaSet psi_set(const Formula& a);

/// Nesting depth of [p]; [f] and the connectives do not count.
std::size_t modal_degree(const Formula& a);

/// Map from a [p]-body C to the identifier standing for [p]C.
using FreshMap = std::map<Formula, std::string>;

/// Replaces every maximal [p]C by the variable fresh[C]; commutes with the
/// connectives and [f]. Throws std::invalid_argument when a needed entry is
/// missing or a fresh identifier already occurs in a.
Formula dagger(const Formula& a, const FreshMap& fresh);

/// Assigns identifiers q0, q1, ... (suffixed with '_' as needed to avoid
/// the variables of `avoid`) to the [p]-bodies of `a` in canonical order.
FreshMap make_fresh_map(const Formula& a, const std::set<std::string>& avoid);

}  // namespace pfl
