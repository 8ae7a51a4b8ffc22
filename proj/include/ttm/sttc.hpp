#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ttm/fuzzy.hpp"

namespace ttm {

/// Qualitative constraint network over `size()` nodes. Each ordered node
/// pair carries a set of admissible Allen relations; (j, i) always holds
/// the inverse of (i, j) and (i, i) is {equals}.
class ConstraintNetwork {
 public:
  explicit ConstraintNetwork(std::size_t n);

  std::size_t size() const { return n_; }
  RelationSet at(std::size_t i, std::size_t j) const { return rel_[i * n_ + j]; }

  /// Sets (i, j) and the inverse on (j, i).
  void set(std::size_t i, std::size_t j, RelationSet s);

  friend bool operator==(const ConstraintNetwork&, const ConstraintNetwork&) = default;

 private:
  std::size_t n_;
  std::vector<RelationSet> rel_;
};

/// Allen's path-consistency propagation. Returns the reduced network, or
/// nullopt if some relation set becomes empty (inconsistent network).
std::optional<ConstraintNetwork> path_consistency(ConstraintNetwork network);

/// Convenience form over action-pair keyed constraints; pairs not listed are
/// unconstrained. Returned pairs use the canonical (first < second) order.
std::optional<std::map<ActionPair, RelationSet>> path_consistency(
    const std::map<ActionPair, RelationSet>& constraints);

struct SolverConfig {
  double theta = 0.5;         ///< minimum membership for an assignment
  bool allow_fallback = false;///< try lower-ranked relations on conflict
};

struct Sttc {
  AllenRelation relation = AllenRelation::Equals;
  double membership = 0.0;

  friend bool operator==(const Sttc&, const Sttc&) = default;
};

/// Contradiction-free set of symbolic constraints. Keys are canonical pairs
/// (first < second); self pairs live in `symmetric`.
struct SttcSet {
  std::map<ActionPair, Sttc> constraints;
  std::map<Action, double> symmetric;  ///< bimanual-symmetric actions

  std::optional<AllenRelation> relation(const Action& a, const Action& b) const;

  friend bool operator==(const SttcSet&, const SttcSet&) = default;
};

/// Canonical orientation of a pair; `flipped` is true if it was reversed.
ActionPair canonical(const ActionPair& p, bool* flipped = nullptr);

/// Greedy contradiction-free assignment. Candidates are processed by
/// descending membership (ties by pair key); each tentative assignment is
/// kept only if the network stays path-consistent. A pair whose two best
/// relations tie is left unassigned.
SttcSet infer_sttcs(const std::map<ActionPair, FuzzyAllenProfile>& profiles, const SolverConfig& config);

/// True if the assigned relations form a path-consistent network.
bool is_consistent(const SttcSet& set);

}  // namespace ttm
