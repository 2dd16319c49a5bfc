#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cegprop/ceg.hpp"
#include "cegprop/types.hpp"

namespace cegprop {

// An observed event expressible as per-position edge subsets: a root-to-sink
// path is in the event iff every edge it uses is retained. Canonically the
// observation is the union edge set; the per-position subsets are its
// intersections with each position's outgoing edges.
class CompatibleObservation {
 public:
  // Observation from the union edge set: positions keep exactly the listed
  // edges that leave them (possibly none).
  static CompatibleObservation from_union(const TransporterCeg& ceg,
                                          const std::vector<EdgeId>& edges);

  // Observation from explicit per-position subsets. Positions absent from
  // the map default to their full edge set (no information there). Listing
  // an edge under a position it does not leave is a ValidationError.
  static CompatibleObservation from_edge_sets(
      const TransporterCeg& ceg,
      const std::map<PositionId, std::vector<EdgeId>>& sets);

  // The no-information observation: every edge retained.
  static CompatibleObservation vacuous(const TransporterCeg& ceg);

  bool contains(EdgeId e) const { return member_[e] != 0; }
  const std::vector<EdgeId>& union_edges() const { return union_; }
  std::size_t graph_edge_count() const { return member_.size(); }
  bool is_vacuous() const { return union_.size() == member_.size(); }

  // Retained outgoing edges of w, in edge-id order.
  std::vector<EdgeId> edges_at(const TransporterCeg& ceg, PositionId w) const;

 private:
  std::vector<char> member_;   // indexed by EdgeId
  std::vector<EdgeId> union_;  // ascending
};

// All root-to-sink paths whose edges all lie in the observation,
// in depth-first edge-id order.
std::vector<Atom> paths_of(const TransporterCeg& ceg,
                           const CompatibleObservation& obs);

struct CompatibilityCheck {
  // Set iff the path set is representable by per-position edge subsets.
  std::optional<CompatibleObservation> observation;
  // On failure: a path induced by the used-edge sets but absent from the
  // input, witnessing the mismatch.
  std::optional<Atom> witness;
  bool compatible() const { return observation.has_value(); }
};

// Decides whether a set of root-to-sink paths is expressible as an
// observation: takes the edges used by the paths, and accepts iff the
// induced path set equals the input. Throws InvalidPathError if an input
// sequence is not a root-to-sink path of the graph.
CompatibilityCheck check_compatibility(const TransporterCeg& ceg,
                                       const std::vector<Atom>& paths);

}  // namespace cegprop
