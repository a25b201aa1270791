#include "pfl/kripke.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

namespace pfl {

void Relation::set(std::size_t i, std::size_t j, bool on) {
  if (i >= n_ || j >= n_) throw std::out_of_range("relation pair outside the frame");
  bits_[i * n_ + j] = on ? 1 : 0;
}

std::vector<std::pair<std::size_t, std::size_t>> Relation::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if ((*this)(i, j)) out.emplace_back(i, j);
  return out;
}

std::vector<std::size_t> Relation::successors(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j)
    if ((*this)(i, j)) out.push_back(j);
  return out;
}

namespace {

using Ext = std::vector<bool>;
using ExtMemo = std::unordered_map<Formula, Ext, FormulaHash>;

const Ext& ext_of(const Model& m, const Formula& a, ExtMemo& memo) {
  if (auto it = memo.find(a); it != memo.end()) return it->second;
  const std::size_t n = m.worlds();
  Ext out(n, false);
  switch (a.op()) {
    case Op::Var:
      for (std::size_t w = 0; w < n; ++w) out[w] = m.valuation[w].contains(a.name());
      break;
    case Op::Top: out.assign(n, true); break;
    case Op::Bot: break;
    case Op::Not: {
      const Ext& c = ext_of(m, a.child(), memo);
      for (std::size_t w = 0; w < n; ++w) out[w] = !c[w];
      break;
    }
    case Op::And:
    case Op::Or:
    case Op::Imp: {
      Ext l = ext_of(m, a.lhs(), memo);
      const Ext& r = ext_of(m, a.rhs(), memo);
      for (std::size_t w = 0; w < n; ++w)
        out[w] = a.is(Op::And) ? (l[w] && r[w]) : a.is(Op::Or) ? (l[w] || r[w]) : (!l[w] || r[w]);
      break;
    }
    case Op::BoxP:
    case Op::BoxF: {
      const Ext& c = ext_of(m, a.child(), memo);
      const Relation& rel = a.is(Op::BoxP) ? m.frame.rel_p : m.frame.rel_f;
      for (std::size_t w = 0; w < n; ++w) {
        bool all = true;
        for (std::size_t v = 0; v < n && all; ++v)
          if (rel(w, v) && !c[v]) all = false;
        out[w] = all;
      }
      break;
    }
  }
  return memo.emplace(a, std::move(out)).first->second;
}

Relation transitive_closure(const Relation& r) {
  Relation c = r;
  const std::size_t n = r.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (c(i, k))
        for (std::size_t j = 0; j < n; ++j)
          if (c(k, j)) c.set(i, j);
  return c;
}

std::size_t find(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Cluster members whose rel_f-successors include the whole cluster.
std::vector<std::size_t> cluster_roots(const Frame& f, const std::vector<std::size_t>& members) {
  std::vector<std::size_t> out;
  for (auto r : members)
    if (std::all_of(members.begin(), members.end(), [&](auto y) { return f.rel_f(r, y); }))
      out.push_back(r);
  return out;
}

std::optional<std::size_t> root_cluster(const Frame& f, const ClusterDecomposition& cd) {
  for (std::size_t c = 0; c < cd.clusters.size(); ++c) {
    bool below_all = true;
    for (auto x : cd.clusters[c])
      for (std::size_t z = 0; z < f.worlds() && below_all; ++z)
        if (cd.cluster_of[z] != c && !f.rel_p(x, z)) below_all = false;
    if (below_all) return c;
  }
  return std::nullopt;
}

// The rel_f-preorder on `members` collapses to a power-set lattice.
bool is_boolean_cluster(const Frame& f, const std::vector<std::size_t>& members) {
  std::vector<std::size_t> reps;
  for (auto x : members) {
    bool fresh = true;
    for (auto r : reps)
      if (f.rel_f(x, r) && f.rel_f(r, x)) fresh = false;
    if (fresh) reps.push_back(x);
  }
  const std::size_t m = reps.size();
  auto le = [&](std::size_t a, std::size_t b) { return f.rel_f(reps[a], reps[b]); };

  std::optional<std::size_t> bottom;
  for (std::size_t a = 0; a < m; ++a) {
    bool below = true;
    for (std::size_t b = 0; b < m; ++b) below = below && le(a, b);
    if (below) bottom = a;
  }
  if (!bottom) return false;

  std::vector<std::size_t> atoms;
  for (std::size_t a = 0; a < m; ++a) {
    if (a == *bottom) continue;
    bool covers = true;
    for (std::size_t b = 0; b < m; ++b)
      if (b != a && b != *bottom && le(b, a)) covers = false;
    if (covers) atoms.push_back(a);
  }
  const std::size_t k = atoms.size();
  if (k >= 20 || m != (std::size_t{1} << k)) return false;

  std::vector<std::uint32_t> below(m, 0);
  std::vector<bool> seen(m, false);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t i = 0; i < k; ++i)
      if (le(atoms[i], a)) below[a] |= 1u << i;
    if (seen[below[a]]) return false;
    seen[below[a]] = true;
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (le(a, b) != ((below[a] & ~below[b]) == 0)) return false;
  return true;
}

// Post-order program over the distinct subformulas, for bit-parallel sweeps.
struct Program {
  struct Step {
    Op op;
    int var = -1;
    std::size_t lhs = 0, rhs = 0;
  };
  std::vector<Step> steps;

  std::size_t add(const Formula& a, const std::vector<std::string>& vars,
                  std::unordered_map<Formula, std::size_t, FormulaHash>& index) {
    if (auto it = index.find(a); it != index.end()) return it->second;
    Step s{a.op()};
    if (a.is(Op::Var)) {
      auto it = std::find(vars.begin(), vars.end(), a.name());
      s.var = it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
    } else if (a.is_unary()) {
      s.lhs = add(a.child(), vars, index);
    } else if (a.is_binary()) {
      s.lhs = add(a.lhs(), vars, index);
      s.rhs = add(a.rhs(), vars, index);
    }
    steps.push_back(s);
    return index[a] = steps.size() - 1;
  }
};

constexpr std::uint64_t kLanePattern[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

}  // namespace

std::vector<bool> extension(const Model& m, const Formula& a) {
  if (m.valuation.size() != m.worlds()) throw std::invalid_argument("valuation size mismatch");
  ExtMemo memo;
  return ext_of(m, a, memo);
}

bool eval(const Model& m, std::size_t w, const Formula& a) {
  if (w >= m.worlds()) throw std::out_of_range("unknown world " + std::to_string(w));
  return extension(m, a)[w];
}

bool valid_in_model(const Model& m, const Formula& a) {
  auto e = extension(m, a);
  return std::all_of(e.begin(), e.end(), [](bool b) { return b; });
}

FrameReport check_frame(const Frame& f) {
  const std::size_t n = f.worlds();
  const Relation& p = f.rel_p;
  const Relation& r = f.rel_f;
  FrameReport rep;
  rep.p_transitive = rep.f_transitive = rep.f_reflexive = rep.f_directed = true;
  rep.fc1 = rep.fc2 = rep.fc3 = rep.nice = true;

  for (std::size_t x = 0; x < n; ++x) {
    if (!r(x, x)) rep.f_reflexive = false;
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        if (p(x, y) && p(y, z) && !p(x, z)) rep.p_transitive = false;
        if (r(x, y) && r(y, z) && !r(x, z)) rep.f_transitive = false;
        if (r(x, y) && p(y, z) && !p(x, z)) rep.fc1 = false;
        if (r(x, y) && p(x, z) && !p(y, z)) rep.fc2 = false;
        if (p(x, y) && r(y, z) && !p(x, z)) rep.fc3 = false;
        // nice: x < z and y <= z imply x < y; here (x, z, y) ranges over all triples
        if (p(x, z) && r(y, z) && !p(x, y)) rep.nice = false;
        if (rep.f_directed && r(x, y) && r(x, z)) {
          bool joined = false;
          for (std::size_t w = 0; w < n && !joined; ++w) joined = r(y, w) && r(z, w);
          if (!joined) rep.f_directed = false;
        }
      }
  }
  Relation pc = transitive_closure(p);
  rep.p_conversely_wellfounded = true;
  for (std::size_t x = 0; x < n; ++x)
    if (pc(x, x)) rep.p_conversely_wellfounded = false;

  rep.is_pf_frame = rep.p_transitive && rep.p_conversely_wellfounded && rep.f_reflexive &&
                    rep.f_transitive && rep.f_directed && rep.fc1 && rep.fc2 && rep.fc3;

  if (rep.is_pf_frame && rep.nice && n > 0) {
    auto cd = clusters(f);
    bool all_rooted = std::all_of(cd.clusters.begin(), cd.clusters.end(),
                                  [&](const auto& c) { return !cluster_roots(f, c).empty(); });
    rep.is_rooted_nice = all_rooted && root_cluster(f, cd).has_value();
  }
  if (n > 0) {
    auto cd = clusters(f);
    rep.is_pba_clusters = std::all_of(cd.clusters.begin(), cd.clusters.end(),
                                      [&](const auto& c) { return is_boolean_cluster(f, c); });
  }
  return rep;
}

ClusterDecomposition clusters(const Frame& f) {
  const std::size_t n = f.worlds();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (auto [i, j] : f.rel_f.pairs()) {
    auto a = find(parent, i), b = find(parent, j);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  ClusterDecomposition cd;
  cd.cluster_of.assign(n, 0);
  std::vector<std::size_t> id_of_root(n, n);
  for (std::size_t w = 0; w < n; ++w) {
    auto root = find(parent, w);
    if (id_of_root[root] == n) {
      id_of_root[root] = cd.clusters.size();
      cd.clusters.emplace_back();
    }
    cd.cluster_of[w] = id_of_root[root];
    cd.clusters[cd.cluster_of[w]].push_back(w);
  }
  bool nice = true;
  for (std::size_t x = 0; x < n && nice; ++x)
    for (std::size_t y = 0; y < n && nice; ++y)
      for (std::size_t z = 0; z < n && nice; ++z)
        if (f.rel_p(x, z) && f.rel_f(y, z) && !f.rel_p(x, y)) nice = false;
  if (nice) {
    std::set<std::pair<std::size_t, std::size_t>> q;
    for (auto [i, j] : f.rel_p.pairs()) q.emplace(cd.cluster_of[i], cd.cluster_of[j]);
    cd.quotient_p = std::move(q);
  }
  return cd;
}

bool is_rooted_nice_pba(const Frame& f) {
  auto rep = check_frame(f);
  return rep.is_rooted_nice && rep.is_pba_clusters;
}

std::vector<std::size_t> root_elements(const Frame& f) {
  if (f.worlds() == 0) return {};
  auto cd = clusters(f);
  auto rc = root_cluster(f, cd);
  if (!rc) return {};
  return cluster_roots(f, cd.clusters[*rc]);
}

std::optional<Refutation> find_refutation(const Frame& f, const Formula& a,
                                          const std::vector<std::string>& vars,
                                          const std::vector<std::size_t>& at, std::size_t max_bits) {
  const std::size_t n = f.worlds();
  const std::size_t bits = vars.size() * n;
  if (bits > max_bits || bits >= 63)
    throw GuardExceeded("valuation space 2^" + std::to_string(bits) + " exceeds guard 2^" +
                        std::to_string(max_bits));
  for (auto w : at)
    if (w >= n) throw std::out_of_range("unknown world " + std::to_string(w));
  if (at.empty()) return std::nullopt;

  Program prog;
  std::unordered_map<Formula, std::size_t, FormulaHash> index;
  const std::size_t top_step = prog.add(a, vars, index);
  const auto succ_p = [&] {
    std::vector<std::vector<std::size_t>> s(n);
    for (std::size_t w = 0; w < n; ++w) s[w] = f.rel_p.successors(w);
    return s;
  }();
  const auto succ_f = [&] {
    std::vector<std::vector<std::size_t>> s(n);
    for (std::size_t w = 0; w < n; ++w) s[w] = f.rel_f.successors(w);
    return s;
  }();

  const std::uint64_t total = std::uint64_t{1} << bits;
  const std::uint64_t lanes_mask = total >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << total) - 1;
  std::vector<std::vector<std::uint64_t>> val(prog.steps.size(), std::vector<std::uint64_t>(n));

  for (std::uint64_t base = 0; base < total; base += 64) {
    for (std::size_t s = 0; s < prog.steps.size(); ++s) {
      const auto& st = prog.steps[s];
      auto& out = val[s];
      for (std::size_t w = 0; w < n; ++w) {
        std::uint64_t x = 0;
        switch (st.op) {
          case Op::Var:
            if (st.var >= 0) {
              std::size_t pos = static_cast<std::size_t>(st.var) * n + w;
              x = pos < 6 ? kLanePattern[pos] : (((base >> pos) & 1) ? ~std::uint64_t{0} : 0);
            }
            break;
          case Op::Top: x = ~std::uint64_t{0}; break;
          case Op::Bot: x = 0; break;
          case Op::Not: x = ~val[st.lhs][w]; break;
          case Op::And: x = val[st.lhs][w] & val[st.rhs][w]; break;
          case Op::Or: x = val[st.lhs][w] | val[st.rhs][w]; break;
          case Op::Imp: x = ~val[st.lhs][w] | val[st.rhs][w]; break;
          case Op::BoxP:
          case Op::BoxF: {
            x = ~std::uint64_t{0};
            for (auto v : (st.op == Op::BoxP ? succ_p : succ_f)[w]) x &= val[st.lhs][v];
            break;
          }
        }
        out[w] = x;
      }
    }
    std::uint64_t bad = 0;
    for (auto w : at) bad |= ~val[top_step][w];
    bad &= lanes_mask;
    if (bad) {
      std::uint64_t lane = static_cast<std::uint64_t>(std::countr_zero(bad));
      for (auto w : at)
        if ((~val[top_step][w] >> lane) & 1) return Refutation{base + lane, w};
    }
  }
  return std::nullopt;
}

Model model_from_valuation(const Frame& f, const std::vector<std::string>& vars, std::uint64_t valuation) {
  Model m(f);
  const std::size_t n = f.worlds();
  for (std::size_t k = 0; k < vars.size(); ++k)
    for (std::size_t w = 0; w < n; ++w)
      if ((valuation >> (k * n + w)) & 1) m.valuation[w].insert(vars[k]);
  return m;
}

bool frame_validates(const Frame& f, const Formula& a, std::size_t max_bits) {
  auto vs = variables(a);
  std::vector<std::string> vars(vs.begin(), vs.end());
  std::vector<std::size_t> all(f.worlds());
  std::iota(all.begin(), all.end(), 0);
  return !find_refutation(f, a, vars, all, max_bits).has_value();
}

}  // namespace pfl
