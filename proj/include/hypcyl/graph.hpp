#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hypcyl/budget.hpp"
#include "hypcyl/errors.hpp"

namespace hypcyl {

// Opaque vertex token. Ordering is only used for deterministic tie-breaking.
struct VertexId {
  std::uint32_t value = 0;
  auto operator<=>(const VertexId&) const = default;
};

// A walk through adjacent vertices. Length counts edges, so a single vertex
// is the trivial path of length 0. Paths start and end on vertices.
struct PathSeq {
  std::vector<VertexId> verts;

  int length() const { return static_cast<int>(verts.size()) - 1; }
  VertexId front() const { return verts.front(); }
  VertexId back() const { return verts.back(); }

  bool operator==(const PathSeq& o) const { return verts == o.verts; }
  bool operator<(const PathSeq& o) const { return verts < o.verts; }

  PathSeq sub(int i, int j) const;  // inclusive vertex range [i..j]
  PathSeq reversed() const;
};

// Finite simple graph, immutable after construction. The all-pairs distance
// table is computed up front so every metric query is a pure table read.
class SimpleGraph {
public:
  SimpleGraph(std::vector<std::string> names,
              std::vector<std::pair<std::string, std::string>> edges);

  int vertex_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  bool connected() const { return connected_; }

  const std::string& name(VertexId v) const;
  bool has_vertex(const std::string& name) const;
  VertexId vertex(const std::string& name) const;  // InputError if unknown
  std::vector<VertexId> vertices() const;

  const std::vector<VertexId>& neighbors(VertexId v) const;
  bool adjacent(VertexId a, VertexId b) const;
  const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }

  // Exact graph metric. Requires a connected graph.
  int distance(VertexId a, VertexId b) const;
  int diameter() const;

  // Every geodesic from a to b in deterministic (lexicographic) order.
  // Exceeding `cap` is a reported budget error, never silent truncation.
  std::vector<PathSeq> all_geodesics(VertexId a, VertexId b, long long cap) const;

  bool is_valid_path(const PathSeq& p) const;
  void require_path(const PathSeq& p) const;  // InputError with detail
  void require_vertex(VertexId v) const;

private:
  std::vector<std::string> names_;
  std::vector<std::vector<VertexId>> adj_;  // sorted
  std::vector<std::pair<VertexId, VertexId>> edges_;  // sorted, a < b
  std::vector<std::vector<int>> dist_;  // -1 when unreachable
  bool connected_ = false;
};

// Adjacency-preserving bijection with its inverse.
class GraphAutomorphism {
public:
  static GraphAutomorphism identity(int n);
  // Validates that `forward` is a bijection preserving adjacency both ways.
  static GraphAutomorphism from_images(const SimpleGraph& g,
                                       std::vector<VertexId> forward);

  int size() const { return static_cast<int>(fwd_.size()); }
  VertexId apply(VertexId v) const { return fwd_[v.value]; }
  VertexId apply_inverse(VertexId v) const { return inv_[v.value]; }
  GraphAutomorphism inverse() const;
  // (a.compose(b)).apply(v) == a.apply(b.apply(v))
  GraphAutomorphism compose(const GraphAutomorphism& other) const;
  bool is_identity() const;
  bool operator==(const GraphAutomorphism& o) const { return fwd_ == o.fwd_; }
  bool operator<(const GraphAutomorphism& o) const { return fwd_ < o.fwd_; }

private:
  GraphAutomorphism() = default;
  std::vector<VertexId> fwd_;
  std::vector<VertexId> inv_;
};

// Line-oriented graph format: `v <name>`, `e <name> <name>`, `#` comments.
// Round-trip exact: parse(serialize(g)) == g.
SimpleGraph parse_graph(std::istream& in, const std::string& source = "<graph>");
SimpleGraph parse_graph_file(const std::string& path);
std::string serialize_graph(const SimpleGraph& g);

// Automorphism format: one `map <name> <name>` line per vertex.
GraphAutomorphism parse_automorphism(const SimpleGraph& g, std::istream& in,
                                     const std::string& source = "<map>");
std::string serialize_automorphism(const SimpleGraph& g, const GraphAutomorphism& a);

// Least delta such that every geodesic triangle, over all geodesic choices,
// is delta-slim (each side inside the delta-neighborhood of the other two).
int slim_delta(const SimpleGraph& g, BudgetMeter& meter);

// All automorphisms by backtracking; throws BudgetError past `cap`.
std::vector<GraphAutomorphism> all_automorphisms(const SimpleGraph& g, long long cap);

// Small deterministic builders used by tests, fixtures and docs.
SimpleGraph path_graph(int n);
SimpleGraph cycle_graph(int n);
SimpleGraph grid_graph(int rows, int cols);
SimpleGraph spider_graph(const std::vector<int>& leg_lengths);
SimpleGraph random_tree(int n, std::uint64_t seed);

}  // namespace hypcyl
