#include "pfl/formula.hpp"

#include <functional>
#include <utility>

namespace pfl {

struct Formula::Node {
  Op op;
  std::string name;
  std::vector<Formula> kids;
  std::size_t size;
  std::size_t hash;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const Formula& top_singleton() {
  static const Formula t = Formula::make(Op::Top);
  return t;
}

}  // namespace

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula::Formula() : Formula(top_singleton()) {}

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }

const Formula& Formula::lhs() const {
  if (node_->kids.empty()) throw std::logic_error("formula has no children");
  return node_->kids[0];
}

const Formula& Formula::rhs() const {
  if (node_->kids.size() < 2) throw std::logic_error("formula is not binary");
  return node_->kids[1];
}

std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::hash() const { return node_->hash; }

bool Formula::is_binary() const {
  return op() == Op::And || op() == Op::Or || op() == Op::Imp;
}

bool Formula::is_unary() const {
  return op() == Op::Not || op() == Op::BoxP || op() == Op::BoxF;
}

Formula Formula::make_var(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  auto h = mix(std::hash<std::string>{}(name), static_cast<std::size_t>(Op::Var));
  return Formula(std::make_shared<const Node>(Node{Op::Var, std::move(name), {}, 1, h}));
}

Formula Formula::make(Op op) {
  if (op != Op::Top && op != Op::Bot) throw std::invalid_argument("constructor needs children");
  return Formula(std::make_shared<const Node>(Node{op, {}, {}, 1, mix(17, static_cast<std::size_t>(op))}));
}

Formula Formula::make(Op op, Formula child) {
  if (op != Op::Not && op != Op::BoxP && op != Op::BoxF)
    throw std::invalid_argument("constructor is not unary");
  std::size_t size = child.size() + 1;
  std::size_t h = mix(mix(31, static_cast<std::size_t>(op)), child.hash());
  return Formula(std::make_shared<const Node>(Node{op, {}, {std::move(child)}, size, h}));
}

Formula Formula::make(Op op, Formula lhs, Formula rhs) {
  if (op != Op::And && op != Op::Or && op != Op::Imp)
    throw std::invalid_argument("constructor is not binary");
  std::size_t size = lhs.size() + rhs.size() + 1;
  std::size_t h = mix(mix(mix(47, static_cast<std::size_t>(op)), lhs.hash()), rhs.hash());
  return Formula(std::make_shared<const Node>(Node{op, {}, {std::move(lhs), std::move(rhs)}, size, h}));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.op() != b.op()) return false;
  if (a.name() != b.name()) return false;
  const auto& ka = a.node_->kids;
  const auto& kb = b.node_->kids;
  for (std::size_t i = 0; i < ka.size(); ++i)
    if (!(ka[i] == kb[i])) return false;
  return true;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  if (auto c = a.name().compare(b.name()); c != 0)
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  const auto& ka = a.node_->kids;
  const auto& kb = b.node_->kids;
  for (std::size_t i = 0; i < ka.size(); ++i)
    if (auto c = ka[i] <=> kb[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Formula var(std::string name) { return Formula::make_var(std::move(name)); }
Formula top() { return top_singleton(); }
Formula bot() {
  static const Formula b = Formula::make(Op::Bot);
  return b;
}
Formula neg(Formula a) { return Formula::make(Op::Not, std::move(a)); }
Formula conj(Formula a, Formula b) { return Formula::make(Op::And, std::move(a), std::move(b)); }
Formula disj(Formula a, Formula b) { return Formula::make(Op::Or, std::move(a), std::move(b)); }
Formula implies(Formula a, Formula b) { return Formula::make(Op::Imp, std::move(a), std::move(b)); }
Formula iff(Formula a, Formula b) { return conj(implies(a, b), implies(b, a)); }
Formula box_p(Formula a) { return Formula::make(Op::BoxP, std::move(a)); }
Formula box_f(Formula a) { return Formula::make(Op::BoxF, std::move(a)); }
Formula dia_p(Formula a) { return neg(box_p(neg(std::move(a)))); }
Formula dia_f(Formula a) { return neg(box_f(neg(std::move(a)))); }

Formula big_conj(const FormulaSet& set) {
  if (set.empty()) return top();
  auto it = set.rbegin();
  Formula acc = *it;
  for (++it; it != set.rend(); ++it) acc = conj(*it, acc);
  return acc;
}

Formula big_disj(const std::vector<Formula>& items) {
  if (items.empty()) return bot();
  Formula acc = items.back();
  for (auto it = items.rbegin() + 1; it != items.rend(); ++it) acc = disj(*it, acc);
  return acc;
}

}  // namespace pfl
