#include "hgmom/walk_oracle.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace hgmom {

int WalkClass::total_vertices() const {
  int total = visited_count;
  for (const auto& [ids, size] : overlap) total += size;
  return total;
}

int WalkClass::root_departures() const {
  int r = 0;
  for (const auto& s : steps)
    if (s.from == 1) ++r;
  return r;
}

std::string WalkClass::canonical_key() const {
  std::ostringstream out;
  out << q << '|';
  for (const auto& s : steps) out << s.from << ',' << s.edge << ',' << s.to << ';';
  out << '|';
  for (const auto& e : edges) {
    for (int v : e.visited) out << v << ',';
    out << '/' << e.anonymous << ';';
  }
  out << '|';
  for (const auto& [ids, size] : overlap) {
    for (int id : ids) out << id << ',';
    out << '=' << size << ';';
  }
  return out.str();
}

bool is_essential(const WalkClass& w) {
  return w.total_vertices() == (w.q - 1) * w.edge_count() + 1;
}

WalkClass make_walk_class(int q, const std::vector<WalkStep>& steps,
                          const std::vector<std::vector<int>>& edge_visited,
                          const std::map<std::vector<int>, int>& overlap) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  WalkClass w;
  w.q = q;
  w.steps = steps;

  int visited = 1;
  int edges_seen = 0;
  int at = 1;
  for (const auto& s : steps) {
    if (s.from != at) throw std::invalid_argument("steps do not chain");
    if (s.to == s.from) throw std::invalid_argument("step endpoints coincide");
    if (s.to < 1 || s.to > visited + 1)
      throw std::invalid_argument("vertex labels are not first-visit minimal");
    if (s.to == visited + 1) ++visited;
    if (s.edge < 0 || s.edge > edges_seen)
      throw std::invalid_argument("edge ids are not first-use minimal");
    if (s.edge == edges_seen) ++edges_seen;
    at = s.to;
  }
  if (at != 1) throw std::invalid_argument("walk is not closed");
  if (static_cast<int>(edge_visited.size()) != edges_seen)
    throw std::invalid_argument("edge registry size does not match steps");

  w.visited_count = visited;
  w.edges.resize(edge_visited.size());
  for (std::size_t i = 0; i < edge_visited.size(); ++i) {
    auto members = edge_visited[i];
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end())
      throw std::invalid_argument("duplicate vertex in edge registry");
    if (!members.empty() && (members.front() < 1 || members.back() > visited))
      throw std::invalid_argument("edge registry contains unknown vertex label");
    w.edges[i].visited = std::move(members);
  }
  for (const auto& s : steps) {
    auto& e = w.edges[static_cast<std::size_t>(s.edge)];
    ++e.traversals;
    for (int endpoint : {s.from, s.to})
      if (!std::binary_search(e.visited.begin(), e.visited.end(), endpoint))
        throw std::invalid_argument("step endpoint missing from its edge");
  }

  std::vector<int> anon(edge_visited.size(), 0);
  for (const auto& [ids, size] : overlap) {
    if (size < 0) throw std::invalid_argument("negative overlap size");
    if (size == 0) continue;
    if (ids.empty() || !std::is_sorted(ids.begin(), ids.end()) ||
        std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw std::invalid_argument("overlap key must be a sorted nonempty edge set");
    for (int id : ids) {
      if (id < 0 || id >= edges_seen)
        throw std::invalid_argument("overlap key references unknown edge");
      anon[static_cast<std::size_t>(id)] += size;
    }
    w.overlap[ids] = size;
  }
  for (std::size_t i = 0; i < w.edges.size(); ++i) {
    w.edges[i].anonymous = anon[i];
    if (static_cast<int>(w.edges[i].visited.size()) + anon[i] != q)
      throw std::invalid_argument("edge slot budget violated");
  }
  return w;
}

namespace {

bool sorted_contains(const std::vector<int>& v, int x) {
  return std::binary_search(v.begin(), v.end(), x);
}

void sorted_insert(std::vector<int>& v, int x) {
  v.insert(std::upper_bound(v.begin(), v.end(), x), x);
}

void sorted_erase(std::vector<int>& v, int x) {
  v.erase(std::lower_bound(v.begin(), v.end(), x));
}

// Depth-first generation of canonical walk classes.  The state is the step
// list so far, the visited-vertex count (labels are forced: a new vertex is
// always the next label), and per-edge member sets (ids are forced: a new
// edge is always the next id).  Each step either reuses an edge — moving to
// one of its members, to a visited vertex that then joins it, or to a fresh
// vertex — or opens a new edge.  In essential mode only moves that keep
// every edge contributing q-1 fresh vertices are generated, so every
// completed walk has a hypertree skeleton; a per-vertex distance to the
// root prunes branches that cannot close in time.  In full mode, once the
// steps are fixed, unused edge slots are filled in two further stages:
// extra visited members per edge, then shared-unvisited-vertex group sizes.
class Enumerator {
 public:
  Enumerator(int length, int q, bool essential_only,
             const std::function<void(const WalkClass&)>& yield)
      : length_(length), q_(q), essential_only_(essential_only), yield_(yield) {
    if (length < 0) throw std::invalid_argument("negative walk length");
    if (q < 2) throw std::invalid_argument("q must be at least 2");
  }

  void run() {
    dist_.assign(1, 0);
    dfs();
  }

 private:
  struct EdgeState {
    std::vector<int> members;  // sorted visited labels so far
    int traversals = 0;
  };

  void dfs() {
    const int remaining = length_ - static_cast<int>(steps_.size());
    if (remaining == 0) {
      if (current_ == 1) emit();
      return;
    }
    if (essential_only_ && dist_[static_cast<std::size_t>(current_ - 1)] > remaining)
      return;

    for (int eid = 0; eid < static_cast<int>(edges_.size()); ++eid) {
      const bool has_current = sorted_contains(edges_[static_cast<std::size_t>(eid)].members, current_);
      if (essential_only_ && !has_current) continue;
      const int base_size = static_cast<int>(edges_[static_cast<std::size_t>(eid)].members.size()) +
                            (has_current ? 0 : 1);
      if (base_size > q_) continue;

      // Targets already inside the edge.  Iterate by value: the member list
      // mutates during recursion.
      const std::vector<int> members_now = edges_[static_cast<std::size_t>(eid)].members;
      for (int t : members_now) {
        if (t == current_) continue;
        if (remaining == 1 && t != 1) continue;
        take_step(eid, t, false);
      }
      if (!essential_only_ && base_size + 1 <= q_) {
        for (int t = 1; t <= visited_; ++t) {
          if (t == current_ || sorted_contains(members_now, t)) continue;
          if (remaining == 1 && t != 1) continue;
          take_step(eid, t, false);
        }
      }
      if (base_size + 1 <= q_ && remaining >= 2)
        take_step(eid, visited_ + 1, true);
    }

    // A brand-new edge.
    if (!essential_only_) {
      for (int t = 1; t <= visited_; ++t) {
        if (t == current_) continue;
        if (remaining == 1 && t != 1) continue;
        if (q_ == 2 && pair_edge_exists(current_, t)) continue;
        take_step(static_cast<int>(edges_.size()), t, false);
      }
    }
    if (remaining >= 2)
      take_step(static_cast<int>(edges_.size()), visited_ + 1, true);
  }

  bool pair_edge_exists(int a, int b) const {
    for (const auto& e : edges_)
      if (sorted_contains(e.members, a) && sorted_contains(e.members, b))
        return true;
    return false;
  }

  void take_step(int eid, int target, bool fresh_target) {
    const bool new_edge = eid == static_cast<int>(edges_.size());
    if (new_edge) edges_.push_back(EdgeState{{current_}, 0});

    bool added_current = false;
    bool added_target = false;
    {
      auto& e = edges_[static_cast<std::size_t>(eid)];
      added_current = !sorted_contains(e.members, current_);
      if (added_current) sorted_insert(e.members, current_);
      if (fresh_target) {
        int nearest = length_;
        for (int m : e.members)
          nearest = std::min(nearest, dist_[static_cast<std::size_t>(m - 1)]);
        ++visited_;
        dist_.push_back(nearest + 1);
      }
      added_target = !sorted_contains(e.members, target);
      if (added_target) sorted_insert(e.members, target);
      ++e.traversals;
    }

    const int origin = current_;
    steps_.push_back(WalkStep{origin, eid, target});
    current_ = target;

    dfs();

    current_ = origin;
    steps_.pop_back();
    // Reacquire: recursion may have grown and reallocated the edge vector.
    auto& e = edges_[static_cast<std::size_t>(eid)];
    --e.traversals;
    if (added_target) sorted_erase(e.members, target);
    if (fresh_target) {
      --visited_;
      dist_.pop_back();
    }
    if (added_current) sorted_erase(e.members, current_);
    if (new_edge) edges_.pop_back();
  }

  void emit() {
    if (essential_only_) {
      WalkClass w = base_class();
      for (std::size_t i = 0; i < edges_.size(); ++i) {
        const int anon = q_ - static_cast<int>(edges_[i].members.size());
        w.edges[i].anonymous = anon;
        if (anon > 0) w.overlap[{static_cast<int>(i)}] = anon;
      }
      assert(is_essential(w));
      yield_(w);
      return;
    }
    extras_.assign(edges_.size(), {});
    choose_extras(0);
  }

  WalkClass base_class() const {
    WalkClass w;
    w.q = q_;
    w.steps = steps_;
    w.visited_count = visited_;
    w.edges.resize(edges_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      w.edges[i].visited = edges_[i].members;
      w.edges[i].traversals = edges_[i].traversals;
    }
    return w;
  }

  // Full mode: each edge may additionally contain visited vertices that no
  // step of that edge touches.
  void choose_extras(std::size_t eid) {
    if (eid == edges_.size()) {
      assign_overlaps();
      return;
    }
    const auto& members = edges_[eid].members;
    const int slack = q_ - static_cast<int>(members.size());
    std::vector<int> candidates;
    for (int t = 1; t <= visited_; ++t)
      if (!sorted_contains(members, t)) candidates.push_back(t);

    const int n = static_cast<int>(candidates.size());
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) > slack) continue;
      auto& chosen = extras_[eid];
      chosen.clear();
      for (int b = 0; b < n; ++b)
        if (mask & (1u << b)) chosen.push_back(candidates[static_cast<std::size_t>(b)]);
      choose_extras(eid + 1);
    }
  }

  // Distribute the leftover slots of every edge among unvisited vertices,
  // grouped by the exact set of edges sharing each vertex.
  void assign_overlaps() {
    const std::size_t edge_count = edges_.size();
    final_members_.assign(edge_count, {});
    capacity_.assign(edge_count, 0);
    for (std::size_t i = 0; i < edge_count; ++i) {
      final_members_[i] = edges_[i].members;
      for (int t : extras_[i]) sorted_insert(final_members_[i], t);
      capacity_[i] = q_ - static_cast<int>(final_members_[i].size());
    }

    groups_.clear();
    for (unsigned mask = 1; mask < (1u << edge_count); ++mask) {
      std::vector<int> ids;
      for (std::size_t b = 0; b < edge_count; ++b)
        if (mask & (1u << b)) ids.push_back(static_cast<int>(b));
      groups_.push_back(std::move(ids));
    }
    std::sort(groups_.begin(), groups_.end());
    group_sizes_.assign(groups_.size(), 0);
    fill_groups(0);
  }

  void fill_groups(std::size_t gi) {
    if (gi == groups_.size()) {
      for (int c : capacity_)
        if (c != 0) return;
      finalize_full_class();
      return;
    }
    const auto& ids = groups_[gi];
    int max_size = q_;
    for (int id : ids)
      max_size = std::min(max_size, capacity_[static_cast<std::size_t>(id)]);
    for (int s = 0; s <= max_size; ++s) {
      group_sizes_[gi] = s;
      for (int id : ids) capacity_[static_cast<std::size_t>(id)] -= s;
      fill_groups(gi + 1);
      for (int id : ids) capacity_[static_cast<std::size_t>(id)] += s;
    }
    group_sizes_[gi] = 0;
  }

  void finalize_full_class() {
    // Two edge ids realize distinct vertex subsets only if their member
    // structures differ somewhere.
    for (std::size_t a = 0; a < edges_.size(); ++a) {
      for (std::size_t b = a + 1; b < edges_.size(); ++b) {
        if (final_members_[a] != final_members_[b]) continue;
        bool separated = false;
        for (std::size_t gi = 0; gi < groups_.size() && !separated; ++gi) {
          if (group_sizes_[gi] == 0) continue;
          const bool in_a = std::binary_search(groups_[gi].begin(), groups_[gi].end(),
                                               static_cast<int>(a));
          const bool in_b = std::binary_search(groups_[gi].begin(), groups_[gi].end(),
                                               static_cast<int>(b));
          if (in_a != in_b) separated = true;
        }
        if (!separated) return;
      }
    }

    WalkClass w = base_class();
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      w.edges[i].visited = final_members_[i];
      w.edges[i].anonymous = q_ - static_cast<int>(final_members_[i].size());
    }
    for (std::size_t gi = 0; gi < groups_.size(); ++gi)
      if (group_sizes_[gi] > 0) w.overlap[groups_[gi]] = group_sizes_[gi];
    yield_(w);
  }

  int length_;
  int q_;
  bool essential_only_;
  const std::function<void(const WalkClass&)>& yield_;

  std::vector<WalkStep> steps_;
  std::vector<EdgeState> edges_;
  int visited_ = 1;
  int current_ = 1;
  std::vector<int> dist_;

  std::vector<std::vector<int>> extras_;
  std::vector<std::vector<int>> final_members_;
  std::vector<int> capacity_;
  std::vector<std::vector<int>> groups_;
  std::vector<int> group_sizes_;
};

}  // namespace

void enumerate_walk_classes(int length, int q, bool essential_only,
                            const std::function<void(const WalkClass&)>& yield) {
  Enumerator(length, q, essential_only, yield).run();
}

Rat limiting_class_weight(const WalkClass& w, const ModelParams& params,
                          const WeightMomentSeq& weights) {
  if (!is_essential(w)) return 0;
  Rat value = 1;
  for (const auto& e : w.edges)
    value *= params.p * weights.value(e.traversals) * inv_factorial(e.anonymous);
  return value;
}

Rat finite_class_weight(const WalkClass& w, int N, const ModelParams& params,
                        const WeightMomentSeq& weights) {
  const int vertices = w.total_vertices();
  if (vertices > N) return 0;
  Rat value = rat_pow(params.p, w.edge_count());
  for (const auto& e : w.edges) value *= weights.value(e.traversals);
  value *= Rat(falling_factorial(Int(N), vertices));
  value /= rat_pow(Rat(N), (w.q - 1) * w.edge_count() + 1);
  for (const auto& [ids, size] : w.overlap) value /= Rat(factorial(size));
  return value;
}

Rat oracle_moment(int k, const ModelParams& params,
                  const WeightMomentSeq& weights) {
  params.validate();
  Rat total = 0;
  enumerate_walk_classes(k, params.q, true, [&](const WalkClass& w) {
    total += limiting_class_weight(w, params, weights);
  });
  return total;
}

std::map<std::pair<int, int>, Rat> oracle_rooted_weights(
    int l_max, const ModelParams& params, const WeightMomentSeq& weights) {
  params.validate();
  std::map<std::pair<int, int>, Rat> table;
  for (int l = 0; l <= l_max; ++l) {
    enumerate_walk_classes(l, params.q, true, [&](const WalkClass& w) {
      table[{l, w.root_departures()}] += limiting_class_weight(w, params, weights);
    });
  }
  return table;
}

long long brute_edge_walk_count(int vertex_count, int end_vertex,
                                const std::vector<int>& departures) {
  if (vertex_count < 1)
    throw std::invalid_argument("vertex_count must be at least 1");
  if (static_cast<int>(departures.size()) != vertex_count)
    throw std::invalid_argument("departure vector length does not match vertex count");
  if (end_vertex < 1 || end_vertex > vertex_count)
    throw std::invalid_argument("end vertex out of range");
  int total_steps = 0;
  for (int d : departures) {
    if (d < 0) throw std::invalid_argument("negative departure count");
    total_steps += d;
  }

  long long result = 0;
  std::vector<int> left = departures;
  int used = 1;
  int done = 0;
  std::function<void(int)> rec = [&](int cur) {
    if (done == total_steps) {
      if (cur == end_vertex && used == vertex_count) ++result;
      return;
    }
    if (left[static_cast<std::size_t>(cur - 1)] == 0) return;
    --left[static_cast<std::size_t>(cur - 1)];
    ++done;
    const int top = std::min(used + 1, vertex_count);
    for (int t = 1; t <= top; ++t) {
      if (t == cur) continue;
      const bool fresh = t == used + 1;
      if (fresh) ++used;
      rec(t);
      if (fresh) --used;
    }
    ++left[static_cast<std::size_t>(cur - 1)];
    --done;
  };
  rec(1);
  return result;
}

Rat finite_size_moment(int N, int k, const ModelParams& params,
                       const WeightMomentSeq& weights, int enumeration_cap) {
  params.validate();
  if (N < params.q)
    throw std::invalid_argument("matrix size must be at least the hyperedge size");
  if (k > enumeration_cap)
    throw std::length_error("walk length exceeds the enumeration cap");
  Rat total = 0;
  enumerate_walk_classes(k, params.q, false, [&](const WalkClass& w) {
    total += finite_class_weight(w, N, params, weights);
  });
  return total;
}

}  // namespace hgmom
