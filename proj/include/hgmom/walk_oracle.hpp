#pragma once

#include "hgmom/model.hpp"
#include "hgmom/rational.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hgmom {

struct WalkStep {
  int from = 0;  // visited-vertex label (root is 1)
  int edge = 0;  // hyperedge id in first-use order, starting at 0
  int to = 0;
};

struct EdgeRecord {
  std::vector<int> visited;  // visited-vertex labels lying in this edge, ascending
  int anonymous = 0;         // never-visited slots, summed over overlap groups
  int traversals = 0;        // number of steps carried by this edge
};

/// Canonical representative of a closed-walk equivalence class.  Visited
/// vertices are labelled in first-visit order; hyperedges in first-use
/// order; never-visited vertices are interchangeable and appear only as
/// counts per overlap group.
struct WalkClass {
  int q = 2;
  std::vector<WalkStep> steps;
  int visited_count = 1;  // the root counts even for the empty walk
  std::vector<EdgeRecord> edges;
  // Overlap group -> size: the key is the ascending list of edge ids whose
  // edges all contain that group's unvisited vertices (and no other edge
  // does).  Only groups of positive size are stored.
  std::map<std::vector<int>, int> overlap;

  int length() const { return static_cast<int>(steps.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int total_vertices() const;
  int root_departures() const;
  // Canonical text form; equal strings <=> identical class.
  std::string canonical_key() const;
};

/// Builds a class from raw step and incidence data, recomputing derived
/// fields and checking the walk invariants (closedness, label minimality,
/// endpoints inside their edges, per-edge slot budget).  Throws
/// std::invalid_argument on violations.
WalkClass make_walk_class(int q, const std::vector<WalkStep>& steps,
                          const std::vector<std::vector<int>>& edge_visited,
                          const std::map<std::vector<int>, int>& overlap);

/// Hypertree test: the skeleton attains the maximal vertex count
/// (q-1) * |edges| + 1.  Connectivity is automatic for walk skeletons.
bool is_essential(const WalkClass& w);

/// Yields one canonical representative per equivalence class of closed
/// walks of the given length.  With essential_only, only hypertree-skeleton
/// classes are produced (every unvisited slot its own fresh vertex).
/// Otherwise all classes are produced, including extra visited-vertex
/// incidences and shared unvisited vertices across edges.
void enumerate_walk_classes(int length, int q, bool essential_only,
                            const std::function<void(const WalkClass&)>& yield);

/// Limiting contribution: product over edges of p * X_{traversals} / a!
/// where a counts the edge's unvisited slots; zero for non-essential classes.
Rat limiting_class_weight(const WalkClass& w, const ModelParams& params,
                          const WeightMomentSeq& weights);

/// Exact finite-size contribution at matrix size N, including the falling
/// factorial over all class vertices and the per-group 1/size! corrections.
Rat finite_class_weight(const WalkClass& w, int N, const ModelParams& params,
                        const WeightMomentSeq& weights);

/// Limiting k-th moment by direct summation over essential classes.
Rat oracle_moment(int k, const ModelParams& params,
                  const WeightMomentSeq& weights);

/// Essential-walk weight sums grouped by (length, root departures) for all
/// lengths <= l_max; ground truth for MomentEngine::rooted_weight.  Pairs
/// with zero total weight may be absent.
std::map<std::pair<int, int>, Rat> oracle_rooted_weights(
    int l_max, const ModelParams& params, const WeightMomentSeq& weights);

/// Brute-force single-hyperedge walk count; ground truth for
/// WithinEdgeWalkTable::count.
long long brute_edge_walk_count(int vertex_count, int end_vertex,
                                const std::vector<int>& departures);

/// Exact E Tr(A^k) / N at finite N by summation over all classes.
/// Throws std::length_error when k exceeds enumeration_cap.
Rat finite_size_moment(int N, int k, const ModelParams& params,
                       const WeightMomentSeq& weights, int enumeration_cap = 6);

}  // namespace hgmom
