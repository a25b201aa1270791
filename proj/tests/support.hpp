#pragma once

// Test-side generators and a reference evaluator that shares no code with
// the library's model checker.

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pfl/formula.hpp"
#include "pfl/kripke.hpp"

namespace testsupport {

using pfl::Formula;
using pfl::Frame;
using pfl::Language;
using pfl::Model;
using pfl::Op;

class FormulaGen {
 public:
  explicit FormulaGen(std::uint64_t seed, std::vector<std::string> vars = {"p", "q", "r"})
      : rng_(seed), vars_(std::move(vars)) {}

  /// Random formula with exactly `size` nodes, restricted to a language.
  Formula sized(std::size_t size, Language lang) {
    if (size <= 1) return leaf();
    std::vector<Op> unary{Op::Not};
    if (lang != Language::LF) unary.push_back(Op::BoxP);
    if (lang != Language::LP) unary.push_back(Op::BoxF);
    if (size == 2 || pick(3) == 0) {
      Op op = unary[pick(unary.size())];
      return Formula::make(op, sized(size - 1, lang));
    }
    static const Op binary[] = {Op::And, Op::Or, Op::Imp};
    std::size_t left = 1 + pick(size - 2);
    Formula l = sized(left, lang);
    Formula r = sized(size - 1 - left, lang);
    return Formula::make(binary[pick(3)], l, r);
  }

  /// Size drawn uniformly from [1, max_size].
  Formula operator()(std::size_t max_size, Language lang) { return sized(1 + pick(max_size), lang); }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::mt19937_64& rng() { return rng_; }

 private:
  Formula leaf() {
    std::size_t k = pick(vars_.size() + 1);
    if (k < vars_.size()) return pfl::var(vars_[k]);
    return pick(2) ? pfl::top() : pfl::bot();
  }

  std::mt19937_64 rng_;
  std::vector<std::string> vars_;
};

/// Direct recursive truth definition, no memoization.
inline bool naive_eval(const Model& m, std::size_t w, const Formula& a) {
  switch (a.op()) {
    case Op::Var: return m.valuation.at(w).count(a.name()) > 0;
    case Op::Top: return true;
    case Op::Bot: return false;
    case Op::Not: return !naive_eval(m, w, a.child());
    case Op::And: return naive_eval(m, w, a.lhs()) && naive_eval(m, w, a.rhs());
    case Op::Or: return naive_eval(m, w, a.lhs()) || naive_eval(m, w, a.rhs());
    case Op::Imp: return !naive_eval(m, w, a.lhs()) || naive_eval(m, w, a.rhs());
    case Op::BoxP:
    case Op::BoxF: {
      const auto& rel = a.is(Op::BoxP) ? m.frame.rel_p : m.frame.rel_f;
      for (std::size_t v = 0; v < m.worlds(); ++v)
        if (rel(w, v) && !naive_eval(m, v, a.child())) return false;
      return true;
    }
  }
  return false;
}

/// Frame with each pair of each relation present with probability density.
inline Frame random_frame(std::mt19937_64& rng, std::size_t n, double density) {
  std::bernoulli_distribution coin(density);
  Frame f(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (coin(rng)) f.rel_p.set(i, j);
      if (coin(rng)) f.rel_f.set(i, j);
    }
  return f;
}

inline Model random_model(std::mt19937_64& rng, const Frame& f, const std::vector<std::string>& vars) {
  Model m(f);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t w = 0; w < f.worlds(); ++w)
    for (const auto& v : vars)
      if (coin(rng)) m.valuation[w].insert(v);
  return m;
}

/// Independent transitivity/acyclicity/rootedness checks used to re-verify
/// countermodels without the library's classifier.
inline bool naive_transitive(const pfl::Relation& r) {
  for (std::size_t x = 0; x < r.size(); ++x)
    for (std::size_t y = 0; y < r.size(); ++y)
      for (std::size_t z = 0; z < r.size(); ++z)
        if (r(x, y) && r(y, z) && !r(x, z)) return false;
  return true;
}

inline bool naive_irreflexive(const pfl::Relation& r) {
  for (std::size_t x = 0; x < r.size(); ++x)
    if (r(x, x)) return false;
  return true;
}

inline bool naive_reflexive(const pfl::Relation& r) {
  for (std::size_t x = 0; x < r.size(); ++x)
    if (!r(x, x)) return false;
  return true;
}

inline bool naive_directed(const pfl::Relation& r) {
  const std::size_t n = r.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        if (!r(x, y) || !r(x, z)) continue;
        bool ok = false;
        for (std::size_t w = 0; w < n; ++w) ok = ok || (r(y, w) && r(z, w));
        if (!ok) return false;
      }
  return true;
}

/// Eight PF-frame conditions quantified directly.
inline bool naive_pf_frame(const Frame& f) {
  const auto& p = f.rel_p;
  const auto& r = f.rel_f;
  const std::size_t n = f.worlds();
  if (!naive_transitive(p) || !naive_irreflexive(p) || !naive_reflexive(r) || !naive_transitive(r) ||
      !naive_directed(r))
    return false;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        if (r(x, y) && p(y, z) && !p(x, z)) return false;
        if (r(x, y) && p(x, z) && !p(y, z)) return false;
        if (p(x, y) && r(y, z) && !p(x, z)) return false;
      }
  return true;
}

/// x [p] z and y [f] z imply x [p] y.
inline bool naive_nice(const Frame& f) {
  const std::size_t n = f.worlds();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (f.rel_p(x, z) && f.rel_f(y, z) && !f.rel_p(x, y)) return false;
  return true;
}

/// Random PF-frame by closing random relations under the frame conditions;
/// empty optional when the closure breaks acyclicity or directedness.
inline std::optional<Frame> random_pf_frame(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dens(0.05, 0.5);
  Frame f = random_frame(rng, n, dens(rng));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (perm[i] >= perm[j]) f.rel_p.set(i, j, false);
  for (std::size_t i = 0; i < n; ++i) f.rel_f.set(i, i);
  bool changed = true;
  while (changed) {
    changed = false;
    auto add = [&](pfl::Relation& r, std::size_t a, std::size_t b) {
      if (!r(a, b)) {
        r.set(a, b);
        changed = true;
      }
    };
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z) {
          if (f.rel_f(x, y) && f.rel_f(y, z)) add(f.rel_f, x, z);
          if (f.rel_p(x, y) && f.rel_p(y, z)) add(f.rel_p, x, z);
          if (f.rel_f(x, y) && f.rel_p(y, z)) add(f.rel_p, x, z);
          if (f.rel_f(x, y) && f.rel_p(x, z)) add(f.rel_p, y, z);
          if (f.rel_p(x, y) && f.rel_f(y, z)) add(f.rel_p, x, z);
        }
    if (!naive_irreflexive(f.rel_p)) return std::nullopt;
  }
  if (!naive_directed(f.rel_f)) return std::nullopt;
  return f;
}

}  // namespace testsupport
