#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pfl/formula.hpp"
#include "pfl/kripke.hpp"
#include "pfl/solver.hpp"

namespace pfl {

struct OracleBound {
  std::size_t max_clusters = 3;
  std::size_t max_worlds_per_cluster = 3;
  std::size_t max_worlds_total = 6;
  /// Cap on 2^(variables * worlds) for a single frame.
  std::uint64_t max_valuations = std::uint64_t{1} << 20;
};

struct OracleVerdict {
  /// Set when a countermodel was found; re-checked before being returned.
  std::optional<PointedModel> countermodel;
  OracleBound bound;
  std::size_t frames_checked = 0;

  bool found() const { return countermodel.has_value(); }
};

/// Rooted nice PF-frames: a rooted strict order on cluster ids, each cluster
/// a rooted directed preorder, rel_p all pairs between related clusters.
/// Cluster 0 is the rel_p-root and world 0 its rel_f-root. Generation order
/// is canonical but isomorphic copies are not removed. Stops when visit
/// returns false.
void enumerate_nice_frames(const OracleBound& b, const std::function<bool(const Frame&)>& visit);
std::vector<Frame> nice_frames(const OracleBound& b);

/// The frame family searched for a logic: nice frames for PF, single-world
/// rel_f-reflexive clusters over rooted orders of up to max_worlds_total
/// worlds for GL, and one cluster of up to max_worlds_per_cluster worlds
/// for S4.2.
std::vector<Frame> oracle_frames(LogicId logic, const OracleBound& b);

/// Searches every frame of the family under every valuation for a
/// countermodel falsifying a at a designated root world. PFw, S and GLTriv
/// are checked through their reductions. Throws GuardExceeded when a frame's
/// valuation space exceeds max_valuations. With jobs > 1 frames are split
/// across threads; the reported countermodel is still the first in
/// enumeration order.
OracleVerdict brute_validity(LogicId logic, const Formula& a, const OracleBound& b = {},
                             unsigned jobs = 1);

}  // namespace pfl
