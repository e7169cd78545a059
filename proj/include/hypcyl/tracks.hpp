#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hypcyl/slicing.hpp"

namespace hypcyl {

// ---------------------------------------------------------------------------
// Presentations and actions

struct Letter {
  int gen = 0;
  int sign = 1;  // +1 or -1
  bool operator==(const Letter&) const = default;
};
using Word = std::vector<Letter>;

Word inverse_word(const Word& w);
std::string word_to_text(const std::vector<std::string>& gen_names, const Word& w);

// Presentation with relators of length exactly 3.
struct TriangularPresentation {
  std::vector<std::string> generators;
  std::vector<std::array<Letter, 3>> relators;

  int rank() const { return static_cast<int>(generators.size()); }
  int triangle_count() const { return static_cast<int>(relators.size()); }
};

// `gen a b c` then `rel a b c^-1` lines; `^-1` marks an inverse letter.
TriangularPresentation parse_presentation(std::istream& in,
                                          const std::string& source = "<pres>");
TriangularPresentation parse_presentation_file(const std::string& path);
std::string serialize_presentation(const TriangularPresentation& p);

// Generators acting on a model graph; relator words must act as the identity.
struct GroupAction {
  const SimpleGraph* model = nullptr;
  std::vector<GraphAutomorphism> images;  // one per generator
  VertexId basepoint;

  GraphAutomorphism eval(const Word& w) const;
};

// `gen a -> perm: <v> <v> ...` (images in the model's vertex order) plus
// `basepoint <v>`.
GroupAction parse_action(const SimpleGraph& model, const TriangularPresentation& pres,
                         std::istream& in, const std::string& source = "<action>");
GroupAction parse_action_file(const SimpleGraph& model,
                              const TriangularPresentation& pres,
                              const std::string& path);
std::string serialize_action(const TriangularPresentation& pres, const GroupAction& act);
void validate_action(const TriangularPresentation& pres, const GroupAction& act);

// One-vertex 2-complex of the presentation: r edge loops, T(G) triangles.
struct VanKampen2Complex {
  TriangularPresentation pres;

  int edge_count() const { return pres.rank(); }
  int triangle_count() const { return pres.triangle_count(); }
};

VanKampen2Complex build_complex(const TriangularPresentation& pres);

// ---------------------------------------------------------------------------
// Marks and tracks

// Marks on the edge loop of one generator: one per slice of Cyl(p, phi(e) p),
// in slice order from p.
struct MarkedEdge {
  int gen = 0;
  CylinderSet cyl;
  SlicePartition slices;

  int marks() const { return static_cast<int>(slices.slices.size()); }
};

std::vector<MarkedEdge> mark_edges(const VanKampen2Complex& cx,
                                   const GroupAction& act,
                                   const PreferredGeodesicFamily& fam,
                                   const ConstantProfile& profile, long long l);

enum class TrackColor { blue, red };

struct TrackVertex {
  enum class Kind { mark, singular } kind = Kind::mark;
  int gen = -1;          // mark: generator of the owning edge
  int slice_index = -1;  // mark: 0-based slice index
  int tri = -1;          // singular: owning triangle
};

// Boundary coordinate of a mark occurrence: triangle side [0,3) and 0-based
// position along the side in traversal order.
struct SideCoord {
  int side = -1;
  int pos = -1;
};

struct TrackEdge {
  // Blue: u on the corner's incoming side, v on its outgoing side.
  // Red: u is the singular point, v the mark.
  int u = -1, v = -1;
  TrackColor color = TrackColor::blue;
  int tri = -1;
  SideCoord u_at, v_at;  // boundary coords (u_at unused for red edges)
};

struct TriangleSide {
  int gen = 0;
  int sign = 1;
  int mark_count = 0;
  VertexId from, to;  // model-graph images of the side's corners
};

struct TriangleTracks {
  std::array<TriangleSide, 3> sides;
  std::array<int, 3> arcs{};               // shared counts at corners 0,1,2
  std::array<std::vector<int>, 3> blue_ids;  // per corner, innermost first
  std::vector<int> hole_marks;             // track vertex ids, cyclic order
  std::vector<SideCoord> hole_coords;
  std::vector<int> red_ids;                // parallel to hole_marks
  int singular = -1;                       // track vertex id, or -1
};

struct TrackGraph {
  std::vector<TrackVertex> vertices;
  std::vector<TrackEdge> edges;
  std::vector<TriangleTracks> triangles;
  std::vector<int> mark_base;  // per generator, first mark vertex id

  std::vector<int> component;  // per track vertex
  int component_count = 0;
  std::vector<bool> component_all_blue;
  long long red_edge_count = 0;  // N0
  long long psi_T = 0;           // bound unit used in the checks

  int mark_id(int gen, int slice_index) const { return mark_base[gen] + slice_index; }
};

// Blue edges join marks of coinciding slices (the shared runs of the
// per-triangle decompositions); leftover marks meet a red singular point.
TrackGraph build_tracks(const VanKampen2Complex& cx,
                        const std::vector<MarkedEdge>& marked,
                        const std::vector<TriangleDecomposition>& decomps,
                        const GroupAction& act, const ConstantProfile& profile,
                        long long psi_T);

// ---------------------------------------------------------------------------
// Complement pieces

struct PieceItem {
  enum class Kind { corner, interval, track } kind = Kind::corner;
  // corner
  int corner = -1;
  // interval: edge-frame interval index 0..n on generator `gen`, traversed
  // from edge-position `from_pos` to `to_pos` (positions differ by one)
  int gen = -1, interval = -1, from_pos = -1, to_pos = -1;
  // track edge occurrence, traversed forward (u->v) or not
  int track_edge = -1;
  bool forward = true;
};

struct Piece {
  int tri = -1;
  std::vector<PieceItem> boundary;  // cyclic walk, interior on the left
  enum class Shape { spike, quad, rr_triangle, pentagon, blue_polygon, corner_polygon, other };
  Shape shape = Shape::other;
  bool has_corner = false;
  int interval_count = 0;
};

const char* piece_shape_name(Piece::Shape s);

// Pieces of all triangles glued along edge intervals and through the single
// complex vertex.
struct ComplementDecomposition {
  std::vector<Piece> pieces;
  std::vector<int> piece_component;
  int component_count = 0;
  std::vector<bool> component_has_vertex;
  // interval key: (gen, interval index) -> component
  std::map<std::pair<int, int>, int> interval_component;
};

ComplementDecomposition build_complement(const VanKampen2Complex& cx,
                                         const std::vector<MarkedEdge>& marked,
                                         const TrackGraph& tracks);

// ---------------------------------------------------------------------------
// Red/blue graphs and generator selection

// Generic red/blue multigraph (parallel edges and self-loops allowed).
struct RBGraph {
  int n = 0;
  struct Edge {
    int u, v;
    bool red;
  };
  std::vector<Edge> edges;
};

// Free basis split into blue and red generators: a minimal blue set whose
// removal makes the maximal blue subgraph a forest, then a minimal red set
// completing a maximal subtree.
struct GeneratorBasis {
  std::vector<int> tree_edges;
  std::vector<int> blue_chords;
  std::vector<int> red_chords;
  // per edge index: the free-basis loop as (edge, forward) steps from the
  // component's root, empty for tree edges
  std::map<int, std::vector<std::pair<int, bool>>> loops;
  int root = 0;
};

GeneratorBasis select_generators(const RBGraph& g);

// ---------------------------------------------------------------------------
// Loop words

// Letter bookkeeping for loops homotoped into the 1-skeleton subdivided at
// marks: all sub-edges except the final one of each generator span a tree, so
// only that last sub-edge emits a letter. Edge positions run 0 (base vertex)
// through n (last mark) to n+1 (base vertex again).
class BoundaryWords {
public:
  BoundaryWords(const VanKampen2Complex& cx, const std::vector<MarkedEdge>& marked);

  int marks(int gen) const { return marks_[gen]; }
  // Walk along one edge between positions; emits the generator iff the final
  // sub-edge is crossed.
  Word along_edge(int gen, int from_pos, int to_pos) const;
  // Positive boundary route of a triangle between two mark coordinates.
  Word route(const TriangleTracks& tri, SideCoord from, SideCoord to) const;
  Word track_edge_word(const TrackGraph& t, int edge, bool forward) const;
  // Word of a mark-to-mark walk through track edges; red edges are consumed
  // in pairs through their singular point.
  Word walk_word(const TrackGraph& t, int start_vertex,
                 const std::vector<std::pair<int, bool>>& steps) const;

private:
  Word partial_side(const TriangleSide& s, int u, int v) const;  // u <= v
  const VanKampen2Complex* cx_;
  std::vector<int> marks_;
};

// ---------------------------------------------------------------------------
// Orbit diagnostics

struct OrbitDiagnostic {
  bool finite = false;
  bool budget_exhausted = false;
  long long orbit_size = 0;
  long long orbit_diameter = 0;
  bool confinement_checked = false;
  bool confined = false;

  std::string to_text() const;
};

// Iterates phi(word) on `start`; reports orbit size and, when a confinement
// set is supplied, whether the orbit stays inside it. Reports evidence only,
// never group-theoretic triviality.
OrbitDiagnostic blue_triviality_check(const GroupAction& act, const Word& word,
                                      VertexId start,
                                      const std::vector<VertexId>* confinement,
                                      long long iteration_budget = 100000);

}  // namespace hypcyl
