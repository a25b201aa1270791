#include "pfl/oracle.hpp"

#include <atomic>
#include <bit>
#include <limits>
#include <thread>

namespace pfl {

namespace {

bool transitive(const Relation& r) {
  const std::size_t n = r.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (r(x, y))
        for (std::size_t z = 0; z < n; ++z)
          if (r(y, z) && !r(x, z)) return false;
  return true;
}

bool directed(const Relation& r) {
  const std::size_t n = r.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        if (!r(x, y) || !r(x, z)) continue;
        bool joined = false;
        for (std::size_t w = 0; w < n && !joined; ++w) joined = r(y, w) && r(z, w);
        if (!joined) return false;
      }
  return true;
}

// Reflexive, transitive, directed preorders on s points with 0 below all.
std::vector<Relation> cluster_shapes(std::size_t s) {
  std::vector<std::pair<std::size_t, std::size_t>> free;
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      if (i != j && i != 0) free.emplace_back(i, j);
  std::vector<Relation> out;
  for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << free.size()); ++pat) {
    Relation r(s);
    for (std::size_t i = 0; i < s; ++i) r.set(i, i);
    for (std::size_t j = 1; j < s; ++j) r.set(0, j);
    for (std::size_t k = 0; k < free.size(); ++k)
      if ((pat >> k) & 1) r.set(free[k].first, free[k].second);
    if (transitive(r) && directed(r)) out.push_back(std::move(r));
  }
  return out;
}

// Strict orders on k points, increasing in index, with 0 below all others.
std::vector<Relation> rooted_orders(std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> free;
  for (std::size_t i = 1; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) free.emplace_back(i, j);
  std::vector<Relation> out;
  for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << free.size()); ++pat) {
    Relation r(k);
    for (std::size_t j = 1; j < k; ++j) r.set(0, j);
    for (std::size_t e = 0; e < free.size(); ++e)
      if ((pat >> e) & 1) r.set(free[e].first, free[e].second);
    if (transitive(r)) out.push_back(std::move(r));
  }
  return out;
}

Frame assemble(const Relation& order, const std::vector<const Relation*>& shapes) {
  std::vector<std::size_t> offset;
  std::size_t n = 0;
  for (const auto* s : shapes) {
    offset.push_back(n);
    n += s->size();
  }
  Frame f(n);
  for (std::size_t c = 0; c < shapes.size(); ++c) {
    const Relation& s = *shapes[c];
    for (auto [x, y] : s.pairs()) f.rel_f.set(offset[c] + x, offset[c] + y);
    for (std::size_t d = 0; d < shapes.size(); ++d)
      if (order(c, d))
        for (std::size_t x = 0; x < s.size(); ++x)
          for (std::size_t y = 0; y < shapes[d]->size(); ++y) f.rel_p.set(offset[c] + x, offset[d] + y);
  }
  return f;
}

std::size_t max_bits(std::uint64_t cap) {
  return cap == 0 ? 0 : static_cast<std::size_t>(std::bit_width(cap) - 1);
}

}  // namespace

void enumerate_nice_frames(const OracleBound& b, const std::function<bool(const Frame&)>& visit) {
  std::vector<std::vector<Relation>> shapes(b.max_worlds_per_cluster + 1);
  for (std::size_t s = 1; s <= b.max_worlds_per_cluster; ++s) shapes[s] = cluster_shapes(s);

  for (std::size_t k = 1; k <= b.max_clusters && k <= b.max_worlds_total; ++k) {
    for (const auto& order : rooted_orders(k)) {
      std::vector<std::size_t> sizes(k, 1);
      while (true) {
        std::size_t total = 0;
        for (auto s : sizes) total += s;
        if (total <= b.max_worlds_total) {
          std::vector<std::size_t> pick(k, 0);
          while (true) {
            std::vector<const Relation*> chosen;
            for (std::size_t c = 0; c < k; ++c) chosen.push_back(&shapes[sizes[c]][pick[c]]);
            Frame f = assemble(order, chosen);
            if (!check_frame(f).is_rooted_nice) throw std::logic_error("enumerated frame is not rooted nice");
            if (!visit(f)) return;
            std::size_t c = 0;
            while (c < k && ++pick[c] == shapes[sizes[c]].size()) pick[c++] = 0;
            if (c == k) break;
          }
        }
        std::size_t c = 0;
        while (c < k && ++sizes[c] > b.max_worlds_per_cluster) sizes[c++] = 1;
        if (c == k) break;
      }
    }
  }
}

std::vector<Frame> nice_frames(const OracleBound& b) {
  std::vector<Frame> out;
  enumerate_nice_frames(b, [&](const Frame& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

std::vector<Frame> oracle_frames(LogicId logic, const OracleBound& b) {
  switch (logic) {
    case LogicId::PF:
    case LogicId::PFOmega: return nice_frames(b);
    case LogicId::S42: {
      std::vector<Frame> out;
      for (std::size_t s = 1; s <= b.max_worlds_per_cluster; ++s)
        for (auto& shape : cluster_shapes(s)) {
          Frame f(s);
          f.rel_f = std::move(shape);
          out.push_back(std::move(f));
        }
      return out;
    }
    case LogicId::GL:
    case LogicId::S:
    case LogicId::GLTriv: {
      std::vector<Frame> out;
      for (std::size_t n = 1; n <= b.max_worlds_total; ++n)
        for (auto& order : rooted_orders(n)) {
          Frame f(n);
          f.rel_p = std::move(order);
          for (std::size_t w = 0; w < n; ++w) f.rel_f.set(w, w);
          out.push_back(std::move(f));
        }
      return out;
    }
  }
  return {};
}

OracleVerdict brute_validity(LogicId logic, const Formula& a, const OracleBound& b, unsigned jobs) {
  // GLTriv frames have rel_f = identity, where [f]B and B agree.
  Formula target = logic == LogicId::PFOmega ? reduce_pfomega(a) : logic == LogicId::S ? reduce_s(a) : a;
  LogicId family = logic == LogicId::PFOmega ? LogicId::PF : logic;

  const auto frames = oracle_frames(family, b);
  auto vs = variables(target);
  const std::vector<std::string> vars(vs.begin(), vs.end());
  const std::size_t bits = max_bits(b.max_valuations);
  for (const auto& f : frames)
    if (vars.size() * f.worlds() > bits)
      throw GuardExceeded("bound needs 2^" + std::to_string(vars.size() * f.worlds()) +
                          " valuations per frame; cap is " + std::to_string(b.max_valuations));

  std::vector<std::vector<std::size_t>> roots(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) roots[i] = root_elements(frames[i]);

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::atomic<std::size_t> best{kNone};
  std::vector<std::optional<Refutation>> hits(frames.size());
  auto worker = [&](std::size_t start, std::size_t stride) {
    for (std::size_t i = start; i < frames.size(); i += stride) {
      if (i > best.load()) return;
      auto r = find_refutation(frames[i], target, vars, roots[i], bits);
      if (r) {
        hits[i] = r;
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {}
        return;
      }
    }
  };
  const unsigned threads = std::max(1u, jobs);
  if (threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto& th : pool) th.join();
  }

  OracleVerdict out;
  out.bound = b;
  const std::size_t hit = best.load();
  out.frames_checked = hit == kNone ? frames.size() : hit + 1;
  if (hit != kNone) {
    PointedModel pm{model_from_valuation(frames[hit], vars, hits[hit]->valuation), hits[hit]->world};
    if (eval(pm.model, pm.world, target)) throw std::logic_error("oracle countermodel failed re-check");
    auto rep = check_frame(pm.model.frame);
    bool frame_ok = family == LogicId::PF    ? rep.is_rooted_nice
                    : family == LogicId::S42 ? rep.f_reflexive && rep.f_transitive && rep.f_directed
                                             : rep.p_transitive && rep.p_conversely_wellfounded;
    if (!frame_ok) throw std::logic_error("oracle countermodel frame failed re-check");
    out.countermodel = std::move(pm);
  }
  return out;
}

}  // namespace pfl
