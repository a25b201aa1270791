#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pfl/formula.hpp"

namespace pfl {

/// Dense binary relation on worlds 0..n-1.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n) : n_(n), bits_(n * n, 0) {}

  std::size_t size() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool on = true);

  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
  std::vector<std::size_t> successors(std::size_t i) const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Finite two-relation frame: rel_p interprets [p], rel_f interprets [f].
/// No structural condition is assumed; see check_frame.
struct Frame {
  Frame() = default;
  explicit Frame(std::size_t n) : rel_p(n), rel_f(n) {}

  std::size_t worlds() const { return rel_p.size(); }

  Relation rel_p;
  Relation rel_f;

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct Model {
  Model() = default;
  explicit Model(Frame f) : frame(std::move(f)), valuation(frame.worlds()) {}

  std::size_t worlds() const { return frame.worlds(); }

  Frame frame;
  /// valuation[w] = variables true at w; always sized to the frame.
  std::vector<std::set<std::string>> valuation;

  friend bool operator==(const Model&, const Model&) = default;
};

/// A model together with a designated world.
struct PointedModel {
  Model model;
  std::size_t world = 0;
};

/// Truth of a at w. Throws std::out_of_range for an unknown world.
bool eval(const Model& m, std::size_t w, const Formula& a);
/// Truth set of a, indexed by world.
std::vector<bool> extension(const Model& m, const Formula& a);
bool valid_in_model(const Model& m, const Formula& a);

struct FrameReport {
  bool p_transitive = false;
  bool p_conversely_wellfounded = false;
  bool f_reflexive = false;
  bool f_transitive = false;
  bool f_directed = false;
  bool fc1 = false;  // x <= y < z  =>  x < z
  bool fc2 = false;  // x <= y, x < z  =>  y < z
  bool fc3 = false;  // x < y <= z  =>  x < z
  bool nice = false; // x < z, y <= z  =>  x < y
  bool is_pf_frame = false;
  bool is_rooted_nice = false;
  bool is_pba_clusters = false;
};

FrameReport check_frame(const Frame& f);

/// Cluster of a world is its class under the equivalence generated by rel_f.
struct ClusterDecomposition {
  std::vector<std::size_t> cluster_of;
  /// Clusters numbered by their least world; members ascending.
  std::vector<std::vector<std::size_t>> clusters;
  /// Present only when the frame is nice.
  std::optional<std::set<std::pair<std::size_t, std::size_t>>> quotient_p;
};

ClusterDecomposition clusters(const Frame& f);

/// Nice PF-frame with a root cluster, a rel_f-root in every cluster, and
/// every cluster collapsing to a power-set lattice.
bool is_rooted_nice_pba(const Frame& f);

/// rel_f-roots of the rel_p-root cluster; empty when the frame is not rooted.
std::vector<std::size_t> root_elements(const Frame& f);

/// Thrown when a valuation sweep exceeds its guard.
class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Valuation index encoding: variable k (in `vars` order) is true at world w
/// iff bit k*n + w of the index is set.
struct Refutation {
  std::uint64_t valuation;
  std::size_t world;
};

/// First valuation (by index) under which a fails at one of `at`, checking
/// the worlds of `at` in order. Requires vars.size() * worlds <= max_bits.
std::optional<Refutation> find_refutation(const Frame& f, const Formula& a,
                                          const std::vector<std::string>& vars,
                                          const std::vector<std::size_t>& at,
                                          std::size_t max_bits = 24);

Model model_from_valuation(const Frame& f, const std::vector<std::string>& vars,
                           std::uint64_t valuation);

/// True iff a holds at every world under every valuation of its variables.
/// Throws GuardExceeded when vars * worlds > max_bits.
bool frame_validates(const Frame& f, const Formula& a, std::size_t max_bits = 24);

}  // namespace pfl
