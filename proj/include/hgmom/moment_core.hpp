#pragma once

#include "hgmom/model.hpp"
#include "hgmom/rational.hpp"

#include <map>
#include <tuple>
#include <utility>
#include <vector>

namespace hgmom {

/// Counts walks confined to a single hyperedge.  A walk of this kind starts
/// at vertex 1, ends at `end_vertex`, visits exactly the vertices
/// {1..vertex_count} with new vertices appearing in label order, and makes
/// departures[i] steps out of vertex i+1.  Values do not depend on the
/// hyperedge size q, so the table is shared between models.
///
/// Computed by removing the walk's last step: either the truncated walk
/// still covers all vertices (same vertex_count, one departure fewer), or
/// the removed step was the first arrival at the top-labelled vertex, in
/// which case the count descends to vertex_count-1 (this branch requires
/// departures.back() == 0, since nothing ever leaves that vertex).
class WithinEdgeWalkTable {
 public:
  long long count(int vertex_count, int end_vertex,
                  const std::vector<int>& departures);

 private:
  std::map<std::tuple<int, int, std::vector<int>>, long long> memo_;
};

/// Exact limiting moments of the empirical spectral distribution, driven by
/// two memoized recurrences over rooted-walk weight sums.
///
/// rooted_weight(l, r) is the total limiting weight of essential closed
/// walks of length l whose root emits exactly r steps.  The authoritative
/// evaluation splits a walk at its first hyperedge: the walk decomposes into
/// a single-edge core (counted by WithinEdgeWalkTable), independent rooted
/// subwalks hanging off the core's visited vertices, and interleaving codes
/// counted by binomials.
///
/// Memoization is lazy and unsynchronized: evaluate on one thread per
/// engine.  Engines for different parameter sets are independent.
class MomentEngine {
 public:
  MomentEngine(ModelParams params, WeightMomentSeq weights);

  const ModelParams& params() const { return params_; }
  const WeightMomentSeq& weights() const { return weights_; }

  // S(l, r) via the first-hyperedge splitting recurrence.
  Rat rooted_weight(int length, int root_departures);

  // The same quantity evaluated through the collapsed single-formula
  // recurrence.  The printed form of that recurrence leaves its step-count
  // ranges ambiguous; this implementation reads the nested sums as running
  // over exact compositions (the subwalk step counts always add up to the
  // steps not spent in the first hyperedge).  Kept as an independent
  // self-recursive table purely for cross-checking against rooted_weight.
  Rat rooted_weight_collapsed(int length, int root_departures);

  // m_0..m_kmax with m_k = sum over r <= floor(k/2) of rooted_weight(k, r).
  std::vector<Rat> moments(int k_max);

  WithinEdgeWalkTable& edge_walks() { return edge_walks_; }

 private:
  ModelParams params_;
  WeightMomentSeq weights_;
  WithinEdgeWalkTable edge_walks_;
  std::map<std::pair<int, int>, Rat> rooted_memo_;
  std::map<std::pair<int, int>, Rat> collapsed_memo_;
};

/// (k, m_{2k}^{1/(2k)}) for every even moment present in `moments`;
/// boundedness of root/(2k) is the numeric growth diagnostic used to sanity
/// check moment determinacy.  Throws std::domain_error on a negative even
/// moment.
std::vector<std::pair<int, double>> carleman_root_sequence(
    const std::vector<Rat>& moments);

}  // namespace hgmom
