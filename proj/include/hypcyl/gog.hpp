#pragma once

#include "hypcyl/tracks.hpp"

namespace hypcyl {

// ---------------------------------------------------------------------------
// Boundary graphs dC

// Doubled combinatorial boundary of one complement component: one parallel
// edge per (track edge, adjacent piece in C), joined around marks (portals)
// and across piece corners.
struct BoundaryGraphDC {
  int black_component = -1;

  struct Node {
    enum class Kind { portal, piece_corner } kind = Kind::portal;
    int gen = -1, interval = -1;  // portal: interval key
    int mark_vertex = -1;         // portal: track vertex the arc turns around
    int piece = -1;               // piece_corner: owning piece
    int track_vertex = -1;        // piece_corner: track vertex passed
  };
  struct Edge {
    int a = -1, b = -1;       // node ids
    int track_edge = -1;      // the track edge this arc parallels
    int piece = -1;
    TrackColor color = TrackColor::blue;
    bool along_track = true;  // a->b runs with the track edge's u->v
    // boundary item indices of the delimiting intervals, when the respective
    // endpoint is a portal (-1 for run-internal endpoints)
    int a_item = -1, b_item = -1;
  };

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<int> node_component;
  int component_count = 0;
  long long red_edges = 0;

  // per dC component: the white (track) component its edges parallel
  std::vector<int> white_of_component;
};

BoundaryGraphDC boundary_graph(const TrackGraph& tracks,
                               const ComplementDecomposition& complement,
                               int black_component);

// ---------------------------------------------------------------------------
// Homotopy model of a complement component

// Graph the component deformation-retracts to: nodes for pieces, intervals
// and the complex vertex; one edge per piece gluing arc plus the skeleton
// edges joining vertex-adjacent intervals to the vertex node.
struct MidpointGraph {
  int black_component = -1;

  struct Node {
    enum class Kind { piece, interval, vertex } kind = Kind::vertex;
    int piece = -1;
    int gen = -1, interval = -1;
  };
  struct Edge {
    int a = -1, b = -1;
    // G-word of the edge read from anchor(a) to anchor(b)
    Word word;
  };

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<int> tree_edges;   // BFS spanning tree
  std::vector<int> chords;       // free basis of pi_1(C)
  std::vector<int> parent_node;  // per node, -1 at root
  std::vector<int> parent_edge;
  int root = 0;
  long long b1 = 0;
  // lookups: gluing-arc edge per (piece, arc ordinal); skeleton edge per
  // vertex-adjacent interval
  std::map<std::pair<int, int>, int> arc_edge;
  std::map<std::pair<int, int>, int> skel_edge;

  int node_of_interval(int gen, int interval) const;
  int node_of_piece(int piece) const;
  int vertex_node() const;
};

MidpointGraph midpoint_graph(const VanKampen2Complex& cx,
                             const std::vector<MarkedEdge>& marked,
                             const TrackGraph& tracks,
                             const ComplementDecomposition& complement,
                             int black_component);

// ---------------------------------------------------------------------------
// Graph of groups

// Symbols of the emitted presentation. White generators are red/blue chords
// of track components, black generators are midpoint-graph chords, stable
// letters belong to edges outside the chosen maximal subtree.
struct GogSymbol {
  enum class Kind { white_gen, black_gen, stable } kind = Kind::white_gen;
  int vertex = -1;  // gog vertex id
  int index = -1;   // chord index within the vertex basis
  std::string name;
};

struct GogVertex {
  bool white = true;
  int component = -1;  // track component or black component id
  // generator symbols (indices into GraphOfGroups::symbols)
  std::vector<int> red_gens;
  std::vector<int> blue_gens;  // X only; emptied by pruning
};

// A symbol word over GraphOfGroups::symbols (signed indices).
struct SymbolLetter {
  int symbol = -1;
  int sign = 1;
};
using SymbolWord = std::vector<SymbolLetter>;

struct GogEdgeGen {
  bool red = true;
  SymbolWord into_white;  // image under the projection to the track component
  SymbolWord into_black;  // image under the inclusion into the complement
  Word white_g_word;      // G-word of the projected loop (diagnostics)
};

struct GogEdge {
  int white = -1, black = -1;  // gog vertex ids
  int dc_component = -1;       // component index within the black side's dC
  std::vector<GogEdgeGen> gens;
  bool attach_black_surjective = true;  // mod-2 homology classification
  bool attach_black_index2 = false;
  bool in_tree = false;
  int stable_symbol = -1;  // symbol id when not in the tree
};

struct GraphOfGroups {
  std::vector<GogVertex> vertices;
  std::vector<GogEdge> edges;
  std::vector<GogSymbol> symbols;
  std::vector<std::string> notes;

  int white_count() const;
  int black_count() const;
};

struct PruneLog {
  std::vector<std::string> removed;  // human-readable, deterministic order
  bool one_endedness_flag = false;   // structure contradicted the assertion
};

// Presentation emitted from a graph of groups: relators are the edge words
// f_white(s)^-1 t f_black(s) t^-1 over the symbol alphabet.
struct EmittedPresentation {
  std::vector<std::string> generator_names;
  std::vector<std::vector<long long>> relator_rows_mod2;  // abelianized rows
  std::vector<SymbolWord> relators;
  long long h1_f2_dim = 0;
};

long long presentation_h1_f2(const TriangularPresentation& p);

// ---------------------------------------------------------------------------
// The assembled pipeline

struct GeneratorEntry {
  std::string name;
  enum class Kind { vertex_red, black_gen, stable } kind = Kind::vertex_red;
  Word g_word;           // the generator as a word in the input generators
  long long displacement = 0;
  long long bound = 0;   // D0 or Diam(X') * (D0 + 10*threshold)
  bool within_bound = true;
};

struct GeneratorReport {
  long long D0 = 0;
  long long diam_xprime = 0;
  std::vector<GeneratorEntry> generators;
  EmittedPresentation presentation;
  long long input_h1_f2 = 0;
  long long emitted_h1_f2 = 0;
  long long max_relator_length = 0;
  long long relator_length_bound = 0;  // 2*(2*N0) + 2
  bool degenerate = false;             // empty X'
};

struct TracksBundle {
  VanKampen2Complex complex;
  GoodLSearchResult goodl;
  MeasuredBounds bounds;
  std::vector<MarkedEdge> marked;
  std::vector<TriangleDecomposition> decomps;
  TrackGraph tracks;
  ComplementDecomposition complement;
  std::vector<BoundaryGraphDC> dcs;        // per black component
  std::vector<MidpointGraph> midpoints;    // per black component
  GraphOfGroups X;
  GraphOfGroups Xprime;
  PruneLog prune_log;
  GeneratorReport report;
};

GraphOfGroups build_graph_of_groups(const TrackGraph& tracks,
                                    const ComplementDecomposition& complement,
                                    const std::vector<BoundaryGraphDC>& dcs,
                                    const std::vector<MidpointGraph>& midpoints,
                                    const TriangularPresentation& pres);

GraphOfGroups prune_graph_of_groups(const GraphOfGroups& X, PruneLog& log,
                                    long long input_b1_f2,
                                    const TrackGraph& tracks, long long N0,
                                    long long T);

// Also assigns the maximal subtree and stable letters on Xprime.
GeneratorReport displacement_report(GraphOfGroups& Xprime,
                                    const TrackGraph& tracks,
                                    const ComplementDecomposition& complement,
                                    const std::vector<BoundaryGraphDC>& dcs,
                                    const std::vector<MidpointGraph>& midpoints,
                                    const VanKampen2Complex& cx,
                                    const GroupAction& act,
                                    const PreferredGeodesicFamily& fam,
                                    const ConstantProfile& profile,
                                    const std::vector<MarkedEdge>& marked);

TracksBundle run_tracks_pipeline(const SimpleGraph& g,
                                 const PreferredGeodesicFamily& fam,
                                 const ConstantProfile& profile,
                                 const TriangularPresentation& pres,
                                 const GroupAction& act, std::uint64_t seed);

// Structured report with fixed section headers, machine-diffable.
std::string tracks_report(const SimpleGraph& g, const TracksBundle& bundle,
                          const GroupAction& act);

// Chooses a maximal forest (stable letters for the rest) and emits the
// graph-of-groups presentation over the symbol alphabet.
EmittedPresentation emit_presentation(GraphOfGroups& X);

}  // namespace hypcyl
