#include <doctest.h>

#include "pfl/kripke.hpp"
#include "pfl/model_io.hpp"
#include "pfl/oracle.hpp"
#include "support.hpp"

using namespace pfl;

namespace {

Frame make_frame(std::size_t n, std::vector<std::pair<int, int>> p, std::vector<std::pair<int, int>> f) {
  Frame fr(n);
  for (auto [a, b] : p) fr.rel_p.set(a, b);
  for (auto [a, b] : f) fr.rel_f.set(a, b);
  return fr;
}

// Brute-force quantification over all triples, written independently of
// check_frame.
bool brute_fc3(const Frame& f) {
  for (std::size_t x = 0; x < f.worlds(); ++x)
    for (std::size_t y = 0; y < f.worlds(); ++y)
      for (std::size_t z = 0; z < f.worlds(); ++z)
        if (f.rel_p(x, y) && f.rel_f(y, z) && !f.rel_p(x, z)) return false;
  return true;
}

}  // namespace

TEST_CASE("eval examples") {
  Model one{Frame(1)};
  CHECK(eval(one, 0, parse("[p]F")));

  Model refl{make_frame(1, {}, {{0, 0}})};
  refl.valuation[0] = {"p"};
  CHECK(eval(refl, 0, parse("[f]p")));

  Model chain{make_frame(2, {{0, 1}}, {})};
  CHECK_FALSE(eval(chain, 0, parse("[p]p")));

  CHECK_THROWS_AS(eval(one, 1, top()), std::out_of_range);
}

TEST_CASE("valid_in_model examples") {
  Model any{make_frame(2, {{0, 1}}, {{0, 0}})};
  CHECK(valid_in_model(any, top()));
  Model single{Frame(1)};
  CHECK(valid_in_model(single, parse("[p]F")));
  Model chain{make_frame(2, {{0, 1}}, {})};
  chain.valuation[0] = {"p"};
  CHECK_FALSE(valid_in_model(chain, var("p")));
}

TEST_CASE("eval agrees with the reference evaluator") {
  std::mt19937_64 rng(5);
  testsupport::FormulaGen gen(6);
  std::uniform_int_distribution<std::size_t> size(1, 5);
  std::uniform_real_distribution<double> dens(0.0, 0.8);
  for (int i = 0; i < 400; ++i) {
    Frame f = testsupport::random_frame(rng, size(rng), dens(rng));
    Model m = testsupport::random_model(rng, f, {"p", "q", "r"});
    Formula a = gen(14, Language::LPF);
    for (std::size_t w = 0; w < m.worlds(); ++w) CHECK(eval(m, w, a) == testsupport::naive_eval(m, w, a));
  }
}

TEST_CASE("check_frame examples") {
  auto r1 = check_frame(make_frame(1, {}, {{0, 0}}));
  CHECK(r1.p_transitive);
  CHECK(r1.p_conversely_wellfounded);
  CHECK(r1.f_reflexive);
  CHECK(r1.f_transitive);
  CHECK(r1.f_directed);
  CHECK(r1.fc1);
  CHECK(r1.fc2);
  CHECK(r1.fc3);
  CHECK(r1.nice);
  CHECK(r1.is_pf_frame);
  CHECK(r1.is_rooted_nice);
  CHECK(r1.is_pba_clusters);

  // 0 <= 1 < 0 would need 0 < 0; 1 < 0 <= 1 would need 1 < 1
  Frame f2 = make_frame(2, {{1, 0}}, {{0, 0}, {1, 1}, {0, 1}});
  auto r2 = check_frame(f2);
  CHECK_FALSE(r2.fc1);
  CHECK(r2.fc3 == brute_fc3(f2));
  CHECK_FALSE(r2.fc3);
  CHECK_FALSE(r2.is_pf_frame);

  auto r3 = check_frame(make_frame(2, {{0, 1}, {1, 0}}, {}));
  CHECK_FALSE(r3.p_conversely_wellfounded);
}

TEST_CASE("pf frame flag is the conjunction of the first eight") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 500; ++i) {
    auto f = i % 2 ? testsupport::random_pf_frame(rng, 1 + i % 5)
                   : std::optional(testsupport::random_frame(rng, 1 + i % 4, 0.4));
    if (!f) continue;
    auto r = check_frame(*f);
    CHECK(r.is_pf_frame == (r.p_transitive && r.p_conversely_wellfounded && r.f_reflexive && r.f_transitive &&
                            r.f_directed && r.fc1 && r.fc2 && r.fc3));
    CHECK(r.is_pf_frame == testsupport::naive_pf_frame(*f));
    CHECK(r.nice == testsupport::naive_nice(*f));
  }
}

TEST_CASE("frame_validates examples") {
  CHECK(frame_validates(make_frame(1, {}, {{0, 0}}), parse("[f]q -> q")));
  CHECK(frame_validates(make_frame(2, {{0, 1}}, {}), parse("[p]([p]q -> q) -> [p]q")));
  Frame bad_fc1 = make_frame(2, {{1, 0}}, {{0, 0}, {1, 1}, {0, 1}});
  REQUIRE_FALSE(check_frame(bad_fc1).fc1);
  CHECK_FALSE(frame_validates(bad_fc1, parse("[p]q -> [f][p]q")));
  CHECK_THROWS_AS(frame_validates(Frame(5), parse("p & q & r & s & t")), GuardExceeded);
}

TEST_CASE("frame_validates matches explicit valuation enumeration") {
  // 2-world chain, one variable: 4 valuations, 2 worlds each
  Frame f = make_frame(2, {{0, 1}}, {});
  Formula loeb = parse("[p]([p]q -> q) -> [p]q");
  bool all = true;
  for (int bits = 0; bits < 4; ++bits) {
    Model m(f);
    for (int w = 0; w < 2; ++w)
      if ((bits >> w) & 1) m.valuation[w].insert("q");
    for (int w = 0; w < 2; ++w) all = all && testsupport::naive_eval(m, w, loeb);
  }
  CHECK(all == frame_validates(f, loeb));
}

TEST_CASE("frame correspondence for the interaction axioms") {
  std::mt19937_64 rng(13);
  const Formula ax1 = parse("[p]q -> [f][p]q");
  const Formula ax2 = parse("<p>q -> [f]<p>q");
  const Formula ax3 = parse("[p]q -> [p][f]q");
  std::uniform_real_distribution<double> dens(0.1, 0.7);
  for (int i = 0; i < 300; ++i) {
    Frame f = testsupport::random_frame(rng, 1 + i % 5, dens(rng));
    auto r = check_frame(f);
    CHECK(r.fc1 == frame_validates(f, ax1));
    CHECK(r.fc2 == frame_validates(f, ax2));
    CHECK(r.fc3 == frame_validates(f, ax3));
  }
}

TEST_CASE("cluster examples") {
  auto c1 = clusters(make_frame(2, {}, {{0, 1}}));
  CHECK(c1.clusters.size() == 1);
  CHECK(c1.clusters[0] == std::vector<std::size_t>{0, 1});

  auto c2 = clusters(make_frame(2, {}, {{0, 0}, {1, 1}}));
  CHECK(c2.clusters.size() == 2);

  Frame nice = make_frame(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}, {{0, 0}, {1, 1}, {0, 1}, {2, 2}, {3, 3}, {2, 3}});
  REQUIRE(check_frame(nice).nice);
  auto c3 = clusters(nice);
  REQUIRE(c3.quotient_p.has_value());
  CHECK(*c3.quotient_p == std::set<std::pair<std::size_t, std::size_t>>{{0, 1}});

  Frame not_nice = make_frame(3, {{0, 2}}, {{0, 0}, {1, 1}, {2, 2}, {1, 2}});
  REQUIRE_FALSE(check_frame(not_nice).nice);
  CHECK_FALSE(clusters(not_nice).quotient_p.has_value());
}

TEST_CASE("cluster propositions on random PF-frames") {
  std::mt19937_64 rng(14);
  int seen = 0;
  for (int i = 0; i < 3000 && seen < 300; ++i) {
    auto f = testsupport::random_pf_frame(rng, 1 + i % 6);
    if (!f) continue;
    ++seen;
    auto cd = clusters(*f);
    const bool nice = check_frame(*f).nice;
    const std::size_t n = f->worlds();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (cd.cluster_of[x] != cd.cluster_of[y]) continue;
        CHECK_FALSE(f->rel_p(x, y));
        for (std::size_t z = 0; z < n; ++z) {
          if (f->rel_p(x, z)) CHECK(f->rel_p(y, z));
          if (!nice) continue;
          for (std::size_t w = 0; w < n; ++w)
            if (cd.cluster_of[z] == cd.cluster_of[w] && f->rel_p(x, z)) CHECK(f->rel_p(y, w));
        }
      }
  }
  CHECK(seen >= 100);
}

TEST_CASE("rooted nice PBA recognition") {
  CHECK(is_rooted_nice_pba(make_frame(1, {}, {{0, 0}})));

  // quotient is a 3-chain
  Frame chain = make_frame(3, {}, {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 2}, {0, 2}});
  CHECK_FALSE(is_rooted_nice_pba(chain));

  // quotient is the four-element diamond 0 < 1, 2 < 3
  Frame diamond = make_frame(4, {}, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}});
  CHECK(is_rooted_nice_pba(diamond));

  // a cluster of two mutually accessible worlds collapses to one point
  Frame pair = make_frame(2, {}, {{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  CHECK(is_rooted_nice_pba(pair));

  // two clusters without a common root cluster
  Frame two = make_frame(2, {}, {{0, 0}, {1, 1}});
  CHECK_FALSE(is_rooted_nice_pba(two));
}

TEST_CASE("power-set recognition agrees with the lattice axioms") {
  // Independent characterization: a finite lattice that is distributive and
  // complemented is Boolean.
  auto boolean_by_axioms = [](const Frame& f) {
    std::vector<std::size_t> reps;
    for (std::size_t x = 0; x < f.worlds(); ++x) {
      bool fresh = true;
      for (auto r : reps) fresh = fresh && !(f.rel_f(x, r) && f.rel_f(r, x));
      if (fresh) reps.push_back(x);
    }
    const std::size_t m = reps.size();
    auto le = [&](std::size_t a, std::size_t b) { return f.rel_f(reps[a], reps[b]); };
    auto bound = [&](std::size_t a, std::size_t b, bool upper) -> std::optional<std::size_t> {
      std::optional<std::size_t> best;
      for (std::size_t c = 0; c < m; ++c) {
        bool is_bound = upper ? le(a, c) && le(b, c) : le(c, a) && le(c, b);
        if (!is_bound) continue;
        if (!best || (upper ? le(c, *best) : le(*best, c))) best = c;
      }
      if (!best) return std::nullopt;
      for (std::size_t c = 0; c < m; ++c) {
        bool is_bound = upper ? le(a, c) && le(b, c) : le(c, a) && le(c, b);
        if (is_bound && !(upper ? le(*best, c) : le(c, *best))) return std::nullopt;
      }
      return best;
    };
    std::vector<std::vector<std::size_t>> join(m, std::vector<std::size_t>(m)), meet = join;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        auto j = bound(a, b, true), mt = bound(a, b, false);
        if (!j || !mt) return false;
        join[a][b] = *j;
        meet[a][b] = *mt;
      }
    std::size_t bottom = 0, top = 0;
    for (std::size_t a = 0; a < m; ++a) {
      bottom = meet[bottom][a];
      top = join[top][a];
    }
    for (std::size_t a = 0; a < m; ++a) {
      bool has_complement = false;
      for (std::size_t b = 0; b < m; ++b) has_complement |= meet[a][b] == bottom && join[a][b] == top;
      if (!has_complement) return false;
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t c = 0; c < m; ++c)
          if (meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]]) return false;
    }
    return true;
  };
  std::size_t boolean = 0, total = 0;
  for (const auto& f : nice_frames(OracleBound{1, 4, 4})) {
    ++total;
    bool expected = boolean_by_axioms(f);
    CHECK(is_rooted_nice_pba(f) == expected);
    boolean += expected;
  }
  CHECK(boolean > 0);
  CHECK(boolean < total);
}

TEST_CASE("root elements") {
  Frame f = make_frame(3, {{0, 2}, {1, 2}}, {{0, 0}, {1, 1}, {2, 2}, {0, 1}});
  CHECK(root_elements(f) == std::vector<std::size_t>{0});
  CHECK(root_elements(make_frame(2, {}, {{0, 0}, {1, 1}})).empty());
}

TEST_CASE("model JSON round trip and DOT") {
  Model m{make_frame(3, {{0, 1}, {0, 2}}, {{0, 0}, {1, 1}, {2, 2}, {1, 2}})};
  m.valuation[1] = {"p", "q"};
  auto j = to_json(m);
  CHECK(j["worlds"] == 3);
  CHECK(j["valuation"]["1"] == nlohmann::json::array({"p", "q"}));
  Model back = model_from_json(j);
  CHECK(back.frame.rel_p == m.frame.rel_p);
  CHECK(back.frame.rel_f == m.frame.rel_f);
  CHECK(back.valuation == m.valuation);

  std::string dot = to_dot(m, 0);
  CHECK(dot.find("w0 -> w1;") != std::string::npos);
  CHECK(dot.find("w1 -> w2 [style=dashed];") != std::string::npos);
  CHECK(dot.find("1: p,q") != std::string::npos);

  CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"worlds":1,"rel_p":[[0,3]]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"rel_p":[]})")), std::invalid_argument);
  CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"worlds":1,"valuation":{"x":["p"]}})")),
                  std::invalid_argument);
}
