#include "hypcyl/gog.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace hypcyl {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

SymbolWord reduce_symbols(const SymbolWord& w) {
  SymbolWord out;
  for (const auto& s : w) {
    if (!out.empty() && out.back().symbol == s.symbol && out.back().sign == -s.sign)
      out.pop_back();
    else
      out.push_back(s);
  }
  return out;
}

Word append_word(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Maximal runs of track items in a piece boundary, walked cyclically starting
// from a non-track item. Each run records the steps and the delimiting
// interval items.
struct TrackRun {
  std::vector<int> items;  // boundary item indices, in walk order
  int before = -1;         // interval item index right before the run
  int after = -1;          // interval item index right after
};

std::vector<TrackRun> track_runs(const Piece& piece) {
  const auto& items = piece.boundary;
  const int n = static_cast<int>(items.size());
  int start = -1;
  for (int i = 0; i < n; ++i)
    if (items[i].kind != PieceItem::Kind::track) { start = i; break; }
  if (start < 0) throw InvariantError("piece boundary is all track items");
  std::vector<TrackRun> runs;
  int i = start;
  int last_nontrack = start;
  for (int step = 0; step < n; ++step) {
    const int cur = (start + 1 + step) % n;
    if (items[cur].kind == PieceItem::Kind::track) {
      if (runs.empty() || runs.back().after != -1) {
        TrackRun run;
        run.before = last_nontrack;
        runs.push_back(run);
      }
      runs.back().items.push_back(cur);
    } else {
      if (!runs.empty() && runs.back().after == -1) runs.back().after = cur;
      last_nontrack = cur;
    }
  }
  if (!runs.empty() && runs.back().after == -1) runs.back().after = start;
  for (const auto& run : runs) {
    if (piece.boundary[run.before].kind != PieceItem::Kind::interval ||
        piece.boundary[run.after].kind != PieceItem::Kind::interval)
      throw InvariantError("track run delimited by a corner");
  }
  (void)i;
  return runs;
}

// Gluing arcs: maximal runs of non-track items, as boundary item indices.
std::vector<std::vector<int>> gluing_arcs(const Piece& piece) {
  const auto& items = piece.boundary;
  const int n = static_cast<int>(items.size());
  int start = -1;
  for (int i = 0; i < n; ++i)
    if (items[i].kind == PieceItem::Kind::track) { start = i; break; }
  std::vector<std::vector<int>> arcs;
  if (start < 0) throw InvariantError("piece boundary has no track item");
  for (int step = 0; step < n; ++step) {
    const int cur = (start + 1 + step) % n;
    if (items[cur].kind == PieceItem::Kind::track) continue;
    const int prev = (cur + n - 1) % n;
    if (items[prev].kind == PieceItem::Kind::track || arcs.empty())
      arcs.push_back({});
    arcs.back().push_back(cur);
  }
  for (const auto& arc : arcs) {
    if (arc.empty() || items[arc.front()].kind != PieceItem::Kind::interval)
      throw InvariantError("gluing arc does not start with an interval");
    if (arc.size() > 3)
      throw InvariantError("gluing arc longer than interval-corner-interval");
  }
  return arcs;
}

// Track vertex at the start of a track item traversal.
int item_from_vertex(const TrackGraph& tracks, const PieceItem& it) {
  const TrackEdge& e = tracks.edges[it.track_edge];
  return it.forward ? e.u : e.v;
}
int item_to_vertex(const TrackGraph& tracks, const PieceItem& it) {
  const TrackEdge& e = tracks.edges[it.track_edge];
  return it.forward ? e.v : e.u;
}

}  // namespace

// ---------------------------------------------------------------------------
// dC

BoundaryGraphDC boundary_graph(const TrackGraph& tracks,
                               const ComplementDecomposition& complement,
                               int black_component) {
  BoundaryGraphDC dc;
  dc.black_component = black_component;

  std::map<std::tuple<int, int, int>, int> portal_id;  // (gen, interval, mark)
  auto portal = [&](const PieceItem& interval_item, int mark_vertex) {
    auto key = std::make_tuple(interval_item.gen, interval_item.interval, mark_vertex);
    auto it = portal_id.find(key);
    if (it == portal_id.end()) {
      BoundaryGraphDC::Node node;
      node.kind = BoundaryGraphDC::Node::Kind::portal;
      node.gen = interval_item.gen;
      node.interval = interval_item.interval;
      node.mark_vertex = mark_vertex;
      it = portal_id.emplace(key, static_cast<int>(dc.nodes.size())).first;
      dc.nodes.push_back(node);
    }
    return it->second;
  };

  for (size_t pi = 0; pi < complement.pieces.size(); ++pi) {
    if (complement.piece_component[pi] != black_component) continue;
    const Piece& piece = complement.pieces[pi];
    for (const auto& run : track_runs(piece)) {
      int prev_node =
          portal(piece.boundary[run.before],
                 item_from_vertex(tracks, piece.boundary[run.items.front()]));
      for (size_t k = 0; k < run.items.size(); ++k) {
        const PieceItem& it = piece.boundary[run.items[k]];
        int next_node;
        if (k + 1 < run.items.size()) {
          BoundaryGraphDC::Node node;
          node.kind = BoundaryGraphDC::Node::Kind::piece_corner;
          node.piece = static_cast<int>(pi);
          node.track_vertex = item_to_vertex(tracks, it);
          next_node = static_cast<int>(dc.nodes.size());
          dc.nodes.push_back(node);
        } else {
          next_node = portal(piece.boundary[run.after], item_to_vertex(tracks, it));
        }
        BoundaryGraphDC::Edge e;
        e.a = prev_node;
        e.b = next_node;
        e.track_edge = it.track_edge;
        e.piece = static_cast<int>(pi);
        e.color = tracks.edges[it.track_edge].color;
        e.along_track = it.forward;
        e.a_item = (k == 0) ? run.before : -1;
        e.b_item = (k + 1 == run.items.size()) ? run.after : -1;
        if (e.color == TrackColor::red) ++dc.red_edges;
        dc.edges.push_back(e);
        prev_node = next_node;
      }
    }
  }

  UnionFind uf(static_cast<int>(dc.nodes.size()));
  for (const auto& e : dc.edges) uf.join(e.a, e.b);
  std::map<int, int> roots;
  dc.node_component.assign(dc.nodes.size(), -1);
  for (size_t v = 0; v < dc.nodes.size(); ++v) {
    int r = uf.find(static_cast<int>(v));
    auto it = roots.find(r);
    if (it == roots.end()) it = roots.emplace(r, static_cast<int>(roots.size())).first;
    dc.node_component[v] = it->second;
  }
  dc.component_count = static_cast<int>(roots.size());
  dc.white_of_component.assign(dc.component_count, -1);
  for (const auto& e : dc.edges) {
    const int comp = dc.node_component[e.a];
    const int white = tracks.component[tracks.edges[e.track_edge].u];
    if (dc.white_of_component[comp] < 0) dc.white_of_component[comp] = white;
    else if (dc.white_of_component[comp] != white)
      throw InvariantError("dC component runs along two different track components");
  }
  return dc;
}

// ---------------------------------------------------------------------------
// Midpoint graph

int MidpointGraph::node_of_interval(int gen, int interval) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].kind == Node::Kind::interval && nodes[i].gen == gen &&
        nodes[i].interval == interval)
      return static_cast<int>(i);
  return -1;
}

int MidpointGraph::node_of_piece(int piece) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].kind == Node::Kind::piece && nodes[i].piece == piece)
      return static_cast<int>(i);
  return -1;
}

int MidpointGraph::vertex_node() const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].kind == Node::Kind::vertex) return static_cast<int>(i);
  return -1;
}

namespace {

// Anchor of an interval: its lower edge position.
int interval_anchor_pos(int interval) { return interval; }

// Word along a piece boundary segment, items (from_idx, to_idx) exclusive of
// the end anchors: starts at the anchor of the interval item at from_idx and
// ends at the anchor of the interval item at to_idx.
Word piece_segment_word(const TrackGraph& tracks, const BoundaryWords& words,
                        const Piece& piece, int from_idx, int to_idx) {
  const auto& items = piece.boundary;
  const int n = static_cast<int>(items.size());
  const PieceItem& a = items[from_idx];
  const PieceItem& b = items[to_idx];
  if (a.kind != PieceItem::Kind::interval || b.kind != PieceItem::Kind::interval)
    throw InvariantError("piece segment endpoints must be intervals");
  Word w;
  if (from_idx == to_idx) return w;
  // leave interval a: from anchor to its walk exit
  w = append_word(w, words.along_edge(a.gen, interval_anchor_pos(a.interval), a.to_pos));
  bool pending = false;
  SideCoord pending_coord;
  int pending_tri = -1;
  for (int cur = (from_idx + 1) % n; cur != to_idx; cur = (cur + 1) % n) {
    const PieceItem& it = items[cur];
    switch (it.kind) {
      case PieceItem::Kind::corner:
        break;
      case PieceItem::Kind::interval:
        w = append_word(w, words.along_edge(it.gen, it.from_pos, it.to_pos));
        break;
      case PieceItem::Kind::track: {
        const TrackEdge& e = tracks.edges[it.track_edge];
        if (e.color == TrackColor::blue) {
          w = append_word(w, words.track_edge_word(tracks, it.track_edge, it.forward));
        } else {
          // red items pair through the singular point
          if (!pending) {
            pending = true;
            pending_coord = e.v_at;
            pending_tri = e.tri;
          } else {
            if (pending_tri != e.tri)
              throw InvariantError("red boundary items pair across triangles");
            w = append_word(w, words.route(tracks.triangles[e.tri], pending_coord, e.v_at));
            pending = false;
          }
        }
        break;
      }
    }
  }
  if (pending) throw InvariantError("piece segment cuts a red pair");
  // enter interval b: from its walk entry to the anchor
  w = append_word(w, words.along_edge(b.gen, b.from_pos, interval_anchor_pos(b.interval)));
  return w;
}

}  // namespace

MidpointGraph midpoint_graph(const VanKampen2Complex& cx,
                             const std::vector<MarkedEdge>& marked,
                             const TrackGraph& tracks,
                             const ComplementDecomposition& complement,
                             int black_component) {
  MidpointGraph mg;
  mg.black_component = black_component;
  BoundaryWords words(cx, marked);

  // Node order: intervals (sorted), pieces (by index), vertex node last.
  std::set<std::pair<int, int>> intervals;
  std::vector<int> piece_ids;
  for (size_t pi = 0; pi < complement.pieces.size(); ++pi) {
    if (complement.piece_component[pi] != black_component) continue;
    piece_ids.push_back(static_cast<int>(pi));
    for (const auto& it : complement.pieces[pi].boundary)
      if (it.kind == PieceItem::Kind::interval) intervals.insert({it.gen, it.interval});
  }
  for (const auto& [gen, iv] : intervals) {
    MidpointGraph::Node n;
    n.kind = MidpointGraph::Node::Kind::interval;
    n.gen = gen;
    n.interval = iv;
    mg.nodes.push_back(n);
  }
  for (int pi : piece_ids) {
    MidpointGraph::Node n;
    n.kind = MidpointGraph::Node::Kind::piece;
    n.piece = pi;
    mg.nodes.push_back(n);
  }
  const bool has_vertex = complement.component_has_vertex[black_component];
  if (has_vertex) {
    MidpointGraph::Node n;
    n.kind = MidpointGraph::Node::Kind::vertex;
    mg.nodes.push_back(n);
  }

  // Skeleton edges: the vertex to each vertex-adjacent interval in C.
  if (has_vertex) {
    const int vnode = mg.vertex_node();
    for (const auto& [gen, iv] : intervals) {
      const int n_marks = marked[gen].marks();
      if (iv != 0 && iv != n_marks) continue;
      MidpointGraph::Edge e;
      e.a = vnode;
      e.b = mg.node_of_interval(gen, iv);
      // anchor(vertex) is the base; anchor(interval n) sits past the last
      // sub-edge, so reaching it crosses the emitting sub-edge backwards
      e.word = (iv == 0) ? Word{} : Word{{gen, -1}};
      mg.skel_edge[{gen, iv}] = static_cast<int>(mg.edges.size());
      mg.edges.push_back(e);
    }
  }

  // One edge per piece gluing arc, attached at the arc's first interval.
  for (int pi : piece_ids) {
    const Piece& piece = complement.pieces[pi];
    auto arcs = gluing_arcs(piece);
    if (arcs.empty()) throw InvariantError("piece with no gluing arc");
    const int anchor_idx = arcs[0][0];
    const int pnode = mg.node_of_piece(pi);
    for (size_t ai = 0; ai < arcs.size(); ++ai) {
      const PieceItem& first = piece.boundary[arcs[ai][0]];
      MidpointGraph::Edge e;
      e.a = pnode;
      e.b = mg.node_of_interval(first.gen, first.interval);
      e.word = piece_segment_word(tracks, words, piece, anchor_idx, arcs[ai][0]);
      mg.arc_edge[{pi, static_cast<int>(ai)}] = static_cast<int>(mg.edges.size());
      mg.edges.push_back(e);
    }
  }

  // Spanning tree (BFS over node ids) and chords.
  const int N = static_cast<int>(mg.nodes.size());
  std::vector<std::vector<std::pair<int, int>>> adj(N);
  for (size_t ei = 0; ei < mg.edges.size(); ++ei) {
    adj[mg.edges[ei].a].push_back({mg.edges[ei].b, static_cast<int>(ei)});
    adj[mg.edges[ei].b].push_back({mg.edges[ei].a, static_cast<int>(ei)});
  }
  mg.parent_node.assign(N, -1);
  mg.parent_edge.assign(N, -1);
  std::vector<bool> seen(N, false);
  std::vector<bool> in_tree(mg.edges.size(), false);
  mg.root = 0;
  std::vector<int> queue{mg.root};
  seen[mg.root] = true;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    const int u = queue[qi];
    for (const auto& [w, ei] : adj[u]) {
      if (seen[w]) continue;
      seen[w] = true;
      mg.parent_node[w] = u;
      mg.parent_edge[w] = ei;
      in_tree[ei] = true;
      queue.push_back(w);
    }
  }
  for (int v = 0; v < N; ++v)
    if (!seen[v])
      throw InvariantError("complement component's homotopy graph is disconnected");
  for (size_t ei = 0; ei < mg.edges.size(); ++ei) {
    if (in_tree[ei]) mg.tree_edges.push_back(static_cast<int>(ei));
    else mg.chords.push_back(static_cast<int>(ei));
  }
  mg.b1 = static_cast<long long>(mg.chords.size());
  return mg;
}

// ---------------------------------------------------------------------------
// Graph of groups

int GraphOfGroups::white_count() const {
  int n = 0;
  for (const auto& v : vertices) n += v.white ? 1 : 0;
  return n;
}

int GraphOfGroups::black_count() const {
  return static_cast<int>(vertices.size()) - white_count();
}

namespace {

// Steps (midpoint edge, forward) from one midpoint node to another, through
// the BFS tree.
std::vector<std::pair<int, bool>> mg_tree_path(const MidpointGraph& mg, int from,
                                               int to) {
  auto up = [&](int v) {
    std::vector<std::pair<int, bool>> steps;  // v -> root
    while (mg.parent_edge[v] >= 0) {
      const auto& e = mg.edges[mg.parent_edge[v]];
      steps.push_back({mg.parent_edge[v], e.a == v});  // traversed v -> parent
      v = mg.parent_node[v];
    }
    return steps;
  };
  auto a = up(from);
  auto b = up(to);
  while (!a.empty() && !b.empty() && a.back() == b.back()) {
    a.pop_back();
    b.pop_back();
  }
  std::reverse(b.begin(), b.end());
  for (auto& [ei, fwd] : b) fwd = !fwd;
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Word mg_steps_word(const MidpointGraph& mg,
                   const std::vector<std::pair<int, bool>>& steps) {
  Word w;
  for (const auto& [ei, fwd] : steps) {
    const Word& part = mg.edges[ei].word;
    if (fwd) w = append_word(w, part);
    else w = append_word(w, inverse_word(part));
  }
  return w;
}

// Gamma path from the interval occurrence `item_idx` of a piece boundary into
// the piece node. Stays inside the closed piece and its gluing arc, so the
// class is the collar path's class.
std::vector<std::pair<int, bool>> gamma_into_piece(const MidpointGraph& mg,
                                                   const ComplementDecomposition& complement,
                                                   int piece, int item_idx) {
  const Piece& p = complement.pieces[piece];
  auto arcs = gluing_arcs(p);
  for (size_t ai = 0; ai < arcs.size(); ++ai) {
    const auto& arc = arcs[ai];
    if (std::find(arc.begin(), arc.end(), item_idx) == arc.end()) continue;
    const int gamma_edge = mg.arc_edge.at({piece, static_cast<int>(ai)});
    std::vector<std::pair<int, bool>> steps;
    if (arc[0] != item_idx) {
      // second interval of an [interval, corner, interval] arc; hop across
      // the vertex with the two skeleton edges
      const PieceItem& here = p.boundary[item_idx];
      const PieceItem& first = p.boundary[arc[0]];
      auto it1 = mg.skel_edge.find({here.gen, here.interval});
      auto it2 = mg.skel_edge.find({first.gen, first.interval});
      if (it1 == mg.skel_edge.end() || it2 == mg.skel_edge.end())
        throw InvariantError("corner-adjacent interval lacks a skeleton edge");
      steps.push_back({it1->second, false});  // interval -> vertex
      steps.push_back({it2->second, true});   // vertex -> first interval
    }
    steps.push_back({gamma_edge, false});  // first interval -> piece
    return steps;
  }
  throw InvariantError("boundary item is not on any gluing arc");
}

}  // namespace

namespace {

// Local red/blue graphs and generator bases of every track component.
struct WhiteBases {
  std::vector<RBGraph> rb;
  std::vector<std::vector<int>> vertex_local;  // local index -> track vertex
  std::vector<std::vector<int>> edge_local;    // local index -> track edge
  std::vector<GeneratorBasis> basis;
};

WhiteBases compute_white_bases(const TrackGraph& tracks) {
  WhiteBases wb;
  wb.rb.resize(tracks.component_count);
  wb.vertex_local.resize(tracks.component_count);
  wb.edge_local.resize(tracks.component_count);
  for (size_t v = 0; v < tracks.vertices.size(); ++v)
    wb.vertex_local[tracks.component[v]].push_back(static_cast<int>(v));
  std::vector<std::map<int, int>> index(tracks.component_count);
  for (int c = 0; c < tracks.component_count; ++c) {
    wb.rb[c].n = static_cast<int>(wb.vertex_local[c].size());
    for (size_t i = 0; i < wb.vertex_local[c].size(); ++i)
      index[c][wb.vertex_local[c][i]] = static_cast<int>(i);
  }
  for (size_t ei = 0; ei < tracks.edges.size(); ++ei) {
    const auto& e = tracks.edges[ei];
    const int c = tracks.component[e.u];
    wb.rb[c].edges.push_back({index[c][e.u], index[c][e.v],
                              e.color == TrackColor::red});
    wb.edge_local[c].push_back(static_cast<int>(ei));
  }
  for (int c = 0; c < tracks.component_count; ++c)
    wb.basis.push_back(select_generators(wb.rb[c]));
  return wb;
}

}  // namespace

GraphOfGroups build_graph_of_groups(const TrackGraph& tracks,
                                    const ComplementDecomposition& complement,
                                    const std::vector<BoundaryGraphDC>& dcs,
                                    const std::vector<MidpointGraph>& midpoints,
                                    const TriangularPresentation& pres) {
  GraphOfGroups X;
  (void)pres;

  WhiteBases wb = compute_white_bases(tracks);
  const auto& white_basis = wb.basis;
  const auto& white_edge_local = wb.edge_local;

  for (int c = 0; c < tracks.component_count; ++c) {
    GogVertex v;
    v.white = true;
    v.component = c;
    for (size_t i = 0; i < white_basis[c].red_chords.size(); ++i) {
      GogSymbol s;
      s.kind = GogSymbol::Kind::white_gen;
      s.vertex = static_cast<int>(X.vertices.size());
      s.index = static_cast<int>(i);
      s.name = "w" + std::to_string(c) + ".r" + std::to_string(i);
      v.red_gens.push_back(static_cast<int>(X.symbols.size()));
      X.symbols.push_back(s);
    }
    for (size_t i = 0; i < white_basis[c].blue_chords.size(); ++i) {
      GogSymbol s;
      s.kind = GogSymbol::Kind::white_gen;
      s.vertex = static_cast<int>(X.vertices.size());
      s.index = static_cast<int>(i);
      s.name = "w" + std::to_string(c) + ".b" + std::to_string(i);
      v.blue_gens.push_back(static_cast<int>(X.symbols.size()));
      X.symbols.push_back(s);
    }
    X.vertices.push_back(v);
  }

  const int white_count = tracks.component_count;
  for (int b = 0; b < complement.component_count; ++b) {
    GogVertex v;
    v.white = false;
    v.component = b;
    for (size_t i = 0; i < midpoints[b].chords.size(); ++i) {
      GogSymbol s;
      s.kind = GogSymbol::Kind::black_gen;
      s.vertex = static_cast<int>(X.vertices.size());
      s.index = static_cast<int>(i);
      s.name = "c" + std::to_string(b) + ".g" + std::to_string(i);
      v.red_gens.push_back(static_cast<int>(X.symbols.size()));
      X.symbols.push_back(s);
    }
    X.vertices.push_back(v);
  }

  // Symbol lookup for the white chord crossed by a track edge.
  auto white_symbol_of_track_edge = [&](int comp, int track_edge) -> int {
    const auto& locals = white_edge_local[comp];
    int local = -1;
    for (size_t i = 0; i < locals.size(); ++i)
      if (locals[i] == track_edge) local = static_cast<int>(i);
    if (local < 0) return -1;
    const auto& basis = white_basis[comp];
    for (size_t i = 0; i < basis.red_chords.size(); ++i)
      if (basis.red_chords[i] == local) return X.vertices[comp].red_gens[i];
    for (size_t i = 0; i < basis.blue_chords.size(); ++i)
      if (basis.blue_chords[i] == local) return X.vertices[comp].blue_gens[i];
    return -1;  // tree edge
  };

  for (int b = 0; b < complement.component_count; ++b) {
    const BoundaryGraphDC& dc = dcs[b];
    const MidpointGraph& mg = midpoints[b];
    for (int d = 0; d < dc.component_count; ++d) {
      GogEdge edge;
      edge.white = dc.white_of_component[d];
      edge.black = white_count + b;
      edge.dc_component = d;

      // local RBGraph of this dC component
      std::vector<int> nodes;
      for (size_t v = 0; v < dc.nodes.size(); ++v)
        if (dc.node_component[v] == d) nodes.push_back(static_cast<int>(v));
      std::map<int, int> nindex;
      for (size_t i = 0; i < nodes.size(); ++i) nindex[nodes[i]] = static_cast<int>(i);
      RBGraph rb;
      rb.n = static_cast<int>(nodes.size());
      std::vector<int> rb_edge_to_dc;
      for (size_t ei = 0; ei < dc.edges.size(); ++ei) {
        const auto& e = dc.edges[ei];
        if (dc.node_component[e.a] != d) continue;
        rb.edges.push_back({nindex[e.a], nindex[e.b], e.color == TrackColor::red});
        rb_edge_to_dc.push_back(static_cast<int>(ei));
      }
      GeneratorBasis basis = select_generators(rb);

      // homology image of the whole edge group in H1(C; F2)
      std::vector<std::vector<int>> image_rows;

      auto loop_of_chord = [&](int rb_chord) {
        return basis.loops.at(rb_chord);
      };

      std::vector<int> all_chords;
      for (int ch : basis.blue_chords) all_chords.push_back(ch);
      for (int ch : basis.red_chords) all_chords.push_back(ch);
      std::sort(all_chords.begin(), all_chords.end());

      for (int ch : all_chords) {
        GogEdgeGen gen;
        gen.red = rb.edges[ch].red;

        SymbolWord into_white;
        SymbolWord into_black;
        std::vector<int> chord_parity(mg.chords.size(), 0);
        for (const auto& [rb_edge, fwd] : loop_of_chord(ch)) {
          const auto& dce = dc.edges[rb_edge_to_dc[rb_edge]];
          // projection to the white component
          {
            const bool along = fwd ? dce.along_track : !dce.along_track;
            const int sym = white_symbol_of_track_edge(edge.white, dce.track_edge);
            if (sym >= 0) into_white.push_back({sym, along ? 1 : -1});
          }
          // inclusion into the black component
          {
            const int item_a = fwd ? dce.a_item : dce.b_item;
            const int item_b = fwd ? dce.b_item : dce.a_item;
            const int node_a = fwd ? dce.a : dce.b;
            const int node_b = fwd ? dce.b : dce.a;
            auto half_path = [&](int node, int item, bool entering) {
              std::vector<std::pair<int, bool>> steps;
              if (dc.nodes[node].kind == BoundaryGraphDC::Node::Kind::portal) {
                steps = gamma_into_piece(mg, complement, dce.piece, item);
              }
              if (!entering) {
                std::reverse(steps.begin(), steps.end());
                for (auto& [ei2, f2] : steps) f2 = !f2;
              }
              return steps;
            };
            auto steps = half_path(node_a, item_a, true);
            auto out = half_path(node_b, item_b, false);
            steps.insert(steps.end(), out.begin(), out.end());
            for (const auto& [ei2, f2] : steps) {
              for (size_t ci = 0; ci < mg.chords.size(); ++ci) {
                if (mg.chords[ci] == ei2) {
                  into_black.push_back(
                      {X.vertices[edge.black].red_gens[ci], f2 ? 1 : -1});
                  chord_parity[ci] ^= 1;
                }
              }
            }
          }
        }
        gen.into_white = reduce_symbols(into_white);
        gen.into_black = reduce_symbols(into_black);
        image_rows.push_back(chord_parity);
        edge.gens.push_back(std::move(gen));
      }

      // rank of the image over F2
      {
        auto rows = image_rows;
        int rank = 0;
        const int cols = static_cast<int>(mg.chords.size());
        for (int col = 0; col < cols; ++col) {
          int pivot = -1;
          for (size_t r = rank; r < rows.size(); ++r)
            if (rows[r][col]) { pivot = static_cast<int>(r); break; }
          if (pivot < 0) continue;
          std::swap(rows[rank], rows[pivot]);
          for (size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<int>(r) == rank || !rows[r][col]) continue;
            for (int c2 = 0; c2 < cols; ++c2) rows[r][c2] ^= rows[rank][c2];
          }
          ++rank;
        }
        edge.attach_black_surjective = (rank == static_cast<int>(mg.chords.size()));
        edge.attach_black_index2 =
            (rank == static_cast<int>(mg.chords.size()) - 1);
      }
      X.edges.push_back(std::move(edge));
    }
  }
  return X;
}

// ---------------------------------------------------------------------------
// Pruning

namespace {

long long vertex_weight(const GogVertex& v) {
  return static_cast<long long>(v.red_gens.size());
}

}  // namespace

GraphOfGroups prune_graph_of_groups(const GraphOfGroups& X, PruneLog& log,
                                    long long input_b1_f2,
                                    const TrackGraph& tracks, long long N0,
                                    long long T) {
  GraphOfGroups P = X;
  std::vector<bool> vertex_alive(P.vertices.size(), true);
  std::vector<bool> edge_alive(P.edges.size(), true);

  // 1. Whites with no red generator have trivial groups once blue loops are
  // discarded; drop them with their edges. A removed edge whose endpoints
  // stay connected otherwise carried a stable letter, which only a group
  // with several ends can afford to lose.
  for (size_t v = 0; v < P.vertices.size(); ++v) {
    if (!P.vertices[v].white || !P.vertices[v].red_gens.empty()) continue;
    vertex_alive[v] = false;
    log.removed.push_back("white vertex W" + std::to_string(P.vertices[v].component) +
                          " (all blue)");
    for (size_t e = 0; e < P.edges.size(); ++e) {
      if (P.edges[e].white != static_cast<int>(v) || !edge_alive[e]) continue;
      edge_alive[e] = false;
      UnionFind probe(static_cast<int>(P.vertices.size()));
      for (size_t e2 = 0; e2 < P.edges.size(); ++e2)
        if (edge_alive[e2]) probe.join(P.edges[e2].white, P.edges[e2].black);
      if (probe.find(P.edges[e].white) == probe.find(P.edges[e].black)) {
        log.one_endedness_flag = true;
        P.notes.push_back("removed edge of a trivial white was non-separating "
                          "(several ends?)");
      }
      log.removed.push_back("edge of all-blue white W" +
                            std::to_string(P.vertices[v].component));
    }
  }

  // Blue generators disappear from the surviving vertices and edge groups.
  for (size_t v = 0; v < P.vertices.size(); ++v) P.vertices[v].blue_gens.clear();
  for (size_t e = 0; e < P.edges.size(); ++e) {
    auto& gens = P.edges[e].gens;
    std::vector<GogEdgeGen> kept;
    for (auto& g : gens)
      if (g.red) kept.push_back(std::move(g));
    gens = std::move(kept);
    // attaching words lose their blue letters
    for (auto& g : gens) {
      SymbolWord w;
      for (const auto& s : g.into_white) {
        const GogSymbol& sym = P.symbols[s.symbol];
        bool blue = false;
        for (int b : X.vertices[sym.vertex].blue_gens)
          if (b == s.symbol) blue = true;
        if (!blue) w.push_back(s);
      }
      g.into_white = reduce_symbols(w);
    }
  }

  // 2. Edges whose group became trivial: a separating such edge with one
  // generator-free side lets the subgraph go; anything else contradicts the
  // one-endedness assertion and is kept with a flag.
  auto alive_components = [&](int skip_edge) {
    std::map<int, int> comp;
    UnionFind uf(static_cast<int>(P.vertices.size()));
    for (size_t e = 0; e < P.edges.size(); ++e) {
      if (!edge_alive[e] || static_cast<int>(e) == skip_edge) continue;
      uf.join(P.edges[e].white, P.edges[e].black);
    }
    for (size_t v = 0; v < P.vertices.size(); ++v)
      if (vertex_alive[v]) comp[static_cast<int>(v)] = uf.find(static_cast<int>(v));
    return comp;
  };

  for (size_t e = 0; e < P.edges.size(); ++e) {
    if (!edge_alive[e] || !P.edges[e].gens.empty()) continue;
    auto with_e = alive_components(-1);
    auto without_e = alive_components(static_cast<int>(e));
    const int w = P.edges[e].white, b = P.edges[e].black;
    if (!vertex_alive[w] || !vertex_alive[b]) { edge_alive[e] = false; continue; }
    if (without_e[w] == without_e[b]) {
      log.one_endedness_flag = true;
      P.notes.push_back("non-separating trivial edge kept (several ends?)");
      continue;
    }
    // weights of the two sides
    long long weight_w = 0, weight_b = 0;
    for (size_t v = 0; v < P.vertices.size(); ++v) {
      if (!vertex_alive[v]) continue;
      if (without_e[static_cast<int>(v)] == without_e[w])
        weight_w += vertex_weight(P.vertices[v]);
      else if (without_e[static_cast<int>(v)] == without_e[b])
        weight_b += vertex_weight(P.vertices[v]);
    }
    (void)with_e;
    int drop_root = -1;
    if (weight_b == 0) drop_root = without_e[b];
    else if (weight_w == 0) drop_root = without_e[w];
    if (drop_root < 0) {
      log.one_endedness_flag = true;
      P.notes.push_back("trivial edge with two non-trivial sides kept");
      continue;
    }
    edge_alive[e] = false;
    for (size_t v = 0; v < P.vertices.size(); ++v) {
      if (!vertex_alive[v] || without_e[static_cast<int>(v)] != drop_root) continue;
      vertex_alive[v] = false;
      log.removed.push_back(std::string("separated trivial ") +
                            (P.vertices[v].white ? "white" : "black") + " vertex");
      for (size_t e2 = 0; e2 < P.edges.size(); ++e2)
        if (edge_alive[e2] && (P.edges[e2].white == static_cast<int>(v) ||
                               P.edges[e2].black == static_cast<int>(v)))
          edge_alive[e2] = false;
    }
  }

  // 3. Isolated generator-free vertices go quietly; others are flagged.
  for (size_t v = 0; v < P.vertices.size(); ++v) {
    if (!vertex_alive[v]) continue;
    bool touched = false;
    for (size_t e = 0; e < P.edges.size(); ++e)
      if (edge_alive[e] && (P.edges[e].white == static_cast<int>(v) ||
                            P.edges[e].black == static_cast<int>(v)))
        touched = true;
    if (touched) continue;
    if (vertex_weight(P.vertices[v]) == 0) {
      vertex_alive[v] = false;
      log.removed.push_back(std::string("isolated trivial ") +
                            (P.vertices[v].white ? "white" : "black") + " vertex");
    } else if (N0 == 0) {
      vertex_alive[v] = false;
      log.removed.push_back("vertex dropped: no red edges anywhere "
                            "(perfect-slice-trivial diagnostic)");
    }
  }

  // Compact.
  GraphOfGroups out;
  out.symbols = P.symbols;
  out.notes = P.notes;
  std::vector<int> vmap(P.vertices.size(), -1);
  for (size_t v = 0; v < P.vertices.size(); ++v) {
    if (!vertex_alive[v]) continue;
    vmap[v] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(P.vertices[v]);
  }
  for (size_t e = 0; e < P.edges.size(); ++e) {
    if (!edge_alive[e]) continue;
    GogEdge edge = P.edges[e];
    edge.white = vmap[edge.white];
    edge.black = vmap[edge.black];
    out.edges.push_back(std::move(edge));
  }
  // symbol -> new vertex ids
  for (auto& s : out.symbols)
    if (s.vertex >= 0 && s.vertex < static_cast<int>(vmap.size()) && vmap[s.vertex] >= 0)
      s.vertex = vmap[s.vertex];

  if (N0 > 0) {
    if (out.white_count() > T)
      throw InvariantError("X' has " + std::to_string(out.white_count()) +
                           " white vertices, above T(G) = " + std::to_string(T));
    if (out.black_count() > 2 * N0)
      throw InvariantError("X' has " + std::to_string(out.black_count()) +
                           " black vertices, above 2*N0 = " + std::to_string(2 * N0));
    for (const auto& v : out.vertices) {
      const long long bound = v.white ? N0 : 2 * N0;
      if (static_cast<long long>(v.red_gens.size()) > bound)
        throw InvariantError("vertex group has " + std::to_string(v.red_gens.size()) +
                             " generators, above " + std::to_string(bound));
    }
    long long non_surjective = 0;
    for (const auto& e : out.edges) {
      if (!e.attach_black_surjective) ++non_surjective;
      for (const auto& g : e.gens) {
        if (static_cast<long long>(g.into_white.size()) > 2 * N0 ||
            static_cast<long long>(g.into_black.size()) > 2 * N0)
          throw InvariantError("attaching word longer than 2*N0 letters");
      }
    }
    if (non_surjective > input_b1_f2)
      throw InvariantError("more non-surjective black attachments (" +
                           std::to_string(non_surjective) + ") than b1(G;F2) = " +
                           std::to_string(input_b1_f2));
  }
  (void)tracks;
  return out;
}

// ---------------------------------------------------------------------------
// Presentations

long long presentation_h1_f2(const TriangularPresentation& p) {
  std::vector<std::vector<int>> rows;
  for (const auto& rel : p.relators) {
    std::vector<int> row(p.rank(), 0);
    for (const auto& letter : rel) row[letter.gen] ^= 1;
    rows.push_back(std::move(row));
  }
  int rank = 0;
  for (int col = 0; col < p.rank(); ++col) {
    int pivot = -1;
    for (size_t r = rank; r < rows.size(); ++r)
      if (rows[r][col]) { pivot = static_cast<int>(r); break; }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(r) == rank || !rows[r][col]) continue;
      for (int c = 0; c < p.rank(); ++c) rows[r][c] ^= rows[rank][c];
    }
    ++rank;
  }
  return p.rank() - rank;
}

EmittedPresentation emit_presentation(GraphOfGroups& X) {
  // Maximal forest over the vertices (BFS in id order); stable letters for
  // the remaining edges.
  const int n = static_cast<int>(X.vertices.size());
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (size_t e = 0; e < X.edges.size(); ++e) {
    adj[X.edges[e].white].push_back({X.edges[e].black, static_cast<int>(e)});
    adj[X.edges[e].black].push_back({X.edges[e].white, static_cast<int>(e)});
  }
  std::vector<bool> seen(n, false);
  for (auto& e : X.edges) {
    e.in_tree = false;
    e.stable_symbol = -1;
  }
  for (int root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    std::vector<int> queue{root};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      for (const auto& [w, ei] : adj[queue[qi]]) {
        if (seen[w]) continue;
        seen[w] = true;
        X.edges[ei].in_tree = true;
        queue.push_back(w);
      }
    }
  }
  int stable_count = 0;
  for (size_t e = 0; e < X.edges.size(); ++e) {
    if (X.edges[e].in_tree) continue;
    GogSymbol s;
    s.kind = GogSymbol::Kind::stable;
    s.vertex = -1;
    s.index = stable_count;
    s.name = "t" + std::to_string(stable_count++);
    X.edges[e].stable_symbol = static_cast<int>(X.symbols.size());
    X.symbols.push_back(s);
  }

  EmittedPresentation pres;
  // Alive symbols: vertex gens of current vertices plus the stable letters.
  std::vector<int> alive;
  std::vector<int> remap(X.symbols.size(), -1);
  for (const auto& v : X.vertices) {
    for (int s : v.red_gens) alive.push_back(s);
    for (int s : v.blue_gens) alive.push_back(s);
  }
  for (const auto& e : X.edges)
    if (e.stable_symbol >= 0) alive.push_back(e.stable_symbol);
  std::sort(alive.begin(), alive.end());
  for (size_t i = 0; i < alive.size(); ++i) {
    remap[alive[i]] = static_cast<int>(i);
    pres.generator_names.push_back(X.symbols[alive[i]].name);
  }

  for (const auto& e : X.edges) {
    for (const auto& g : e.gens) {
      SymbolWord rel;
      for (const auto& s : g.into_white) rel.push_back({s.symbol, -s.sign});
      std::reverse(rel.begin(), rel.end());
      if (e.stable_symbol >= 0) rel.push_back({e.stable_symbol, 1});
      for (const auto& s : g.into_black) rel.push_back(s);
      if (e.stable_symbol >= 0) rel.push_back({e.stable_symbol, -1});
      rel = reduce_symbols(rel);
      SymbolWord mapped;
      for (const auto& s : rel) {
        if (remap[s.symbol] < 0)
          throw InvariantError("relator references a pruned symbol");
        mapped.push_back({remap[s.symbol], s.sign});
      }
      pres.relators.push_back(std::move(mapped));
    }
  }

  const int g = static_cast<int>(pres.generator_names.size());
  for (const auto& rel : pres.relators) {
    std::vector<long long> row(g, 0);
    for (const auto& s : rel) row[s.symbol] = (row[s.symbol] + 1) % 2;
    pres.relator_rows_mod2.push_back(std::move(row));
  }
  // rank over F2
  {
    auto rows = pres.relator_rows_mod2;
    int rank = 0;
    for (int col = 0; col < g; ++col) {
      int pivot = -1;
      for (size_t r = rank; r < rows.size(); ++r)
        if (rows[r][col]) { pivot = static_cast<int>(r); break; }
      if (pivot < 0) continue;
      std::swap(rows[rank], rows[pivot]);
      for (size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<int>(r) == rank || !rows[r][col]) continue;
        for (int c = 0; c < g; ++c) rows[r][c] = (rows[r][c] + rows[rank][c]) % 2;
      }
      ++rank;
    }
    pres.h1_f2_dim = g - rank;
  }
  return pres;
}

// ---------------------------------------------------------------------------
// Displacement report

namespace {

// Deterministic BFS path between two track vertices, as steps (edge, fwd).
std::vector<std::pair<int, bool>> track_path(const TrackGraph& t, int from, int to) {
  if (from == to) return {};
  std::vector<std::vector<std::pair<int, int>>> adj(t.vertices.size());
  for (size_t ei = 0; ei < t.edges.size(); ++ei) {
    adj[t.edges[ei].u].push_back({t.edges[ei].v, static_cast<int>(ei)});
    adj[t.edges[ei].v].push_back({t.edges[ei].u, static_cast<int>(ei)});
  }
  std::vector<int> prev_vertex(t.vertices.size(), -1), prev_edge(t.vertices.size(), -1);
  std::vector<bool> seen(t.vertices.size(), false);
  std::vector<int> queue{from};
  seen[from] = true;
  for (size_t qi = 0; qi < queue.size() && !seen[to]; ++qi) {
    for (const auto& [w, ei] : adj[queue[qi]]) {
      if (seen[w]) continue;
      seen[w] = true;
      prev_vertex[w] = queue[qi];
      prev_edge[w] = ei;
      queue.push_back(w);
    }
  }
  if (!seen[to]) throw InvariantError("track vertices are not connected");
  std::vector<std::pair<int, bool>> steps;
  int cur = to;
  while (cur != from) {
    const auto& e = t.edges[prev_edge[cur]];
    steps.push_back({prev_edge[cur], e.v == cur});
    cur = prev_vertex[cur];
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

// Least member of the slice a mark maps into, as the mark's model image.
VertexId mark_representative(const std::vector<MarkedEdge>& marked, int gen,
                             int slice_index) {
  return marked[gen].slices.slices[slice_index].members.front();
}

struct VertexAnchors {
  std::vector<Word> conjugator;     // per gog vertex, from the global base
  std::vector<VertexId> rep;        // model image of the vertex's basepoint
  std::vector<int> white_bp;        // track vertex of each white basepoint
};

}  // namespace

GeneratorReport displacement_report(GraphOfGroups& Xprime,
                                    const TrackGraph& tracks,
                                    const ComplementDecomposition& complement,
                                    const std::vector<BoundaryGraphDC>& dcs,
                                    const std::vector<MidpointGraph>& midpoints,
                                    const VanKampen2Complex& cx,
                                    const GroupAction& act,
                                    const PreferredGeodesicFamily& fam,
                                    const ConstantProfile& profile,
                                    const std::vector<MarkedEdge>& marked) {
  (void)fam;
  (void)complement;
  GeneratorReport report;
  report.input_h1_f2 = presentation_h1_f2(cx.pres);
  report.D0 = d0_bound(cx.triangle_count(), tracks.psi_T, profile);

  if (Xprime.vertices.empty()) {
    report.degenerate = true;
    report.presentation = emit_presentation(Xprime);
    report.emitted_h1_f2 = report.presentation.h1_f2_dim;
    return report;
  }

  report.presentation = emit_presentation(Xprime);
  report.emitted_h1_f2 = report.presentation.h1_f2_dim;
  for (const auto& rel : report.presentation.relators)
    report.max_relator_length =
        std::max(report.max_relator_length, static_cast<long long>(rel.size()));
  report.relator_length_bound = 4 * tracks.red_edge_count + 2;

  BoundaryWords words(cx, marked);
  WhiteBases wb = compute_white_bases(tracks);

  // Diameter of X'.
  {
    const int n = static_cast<int>(Xprime.vertices.size());
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : Xprime.edges) {
      adj[e.white].push_back(e.black);
      adj[e.black].push_back(e.white);
    }
    long long diam = 0;
    for (int s = 0; s < n; ++s) {
      std::vector<int> dist(n, -1);
      std::vector<int> queue{s};
      dist[s] = 0;
      for (size_t qi = 0; qi < queue.size(); ++qi)
        for (int w : adj[queue[qi]])
          if (dist[w] < 0) {
            dist[w] = dist[queue[qi]] + 1;
            queue.push_back(w);
          }
      for (int v = 0; v < n; ++v) diam = std::max<long long>(diam, dist[v]);
    }
    report.diam_xprime = diam;
  }

  // Per-vertex basepoints and representatives.
  VertexAnchors anchors;
  anchors.conjugator.assign(Xprime.vertices.size(), Word{});
  anchors.rep.assign(Xprime.vertices.size(), act.basepoint);
  anchors.white_bp.assign(Xprime.vertices.size(), -1);
  for (size_t v = 0; v < Xprime.vertices.size(); ++v) {
    const auto& gv = Xprime.vertices[v];
    if (gv.white) {
      const int bp = wb.vertex_local[gv.component][0];
      anchors.white_bp[v] = bp;
      anchors.rep[v] =
          mark_representative(marked, tracks.vertices[bp].gen,
                              tracks.vertices[bp].slice_index);
    } else {
      const auto& mg = midpoints[gv.component];
      const auto& root = mg.nodes[mg.root];
      if (root.kind == MidpointGraph::Node::Kind::interval && root.interval > 0)
        anchors.rep[v] = mark_representative(marked, root.gen, root.interval - 1);
      else
        anchors.rep[v] = act.basepoint;
    }
  }

  // Crossing words along edges: white basepoint -> portal mark -> interval
  // anchor -> midpoint root.
  auto crossing_word = [&](const GogEdge& e) {
    const auto& gb = Xprime.vertices[e.black];
    const auto& dc = dcs[gb.component];
    const auto& mg = midpoints[gb.component];
    // least portal of the edge's dC component
    int portal = -1;
    for (size_t nid = 0; nid < dc.nodes.size(); ++nid) {
      if (dc.node_component[nid] != e.dc_component) continue;
      if (dc.nodes[nid].kind != BoundaryGraphDC::Node::Kind::portal) continue;
      portal = static_cast<int>(nid);
      break;
    }
    if (portal < 0) throw InvariantError("dC component without a portal");
    const auto& pn = dc.nodes[portal];
    Word w = words.walk_word(
        tracks, anchors.white_bp[e.white],
        track_path(tracks, anchors.white_bp[e.white], pn.mark_vertex));
    // mark position on its edge is slice index + 1
    const int mark_pos = tracks.vertices[pn.mark_vertex].slice_index + 1;
    w = append_word(w, words.along_edge(pn.gen, mark_pos, pn.interval));
    const int inode = mg.node_of_interval(pn.gen, pn.interval);
    w = append_word(w, mg_steps_word(mg, mg_tree_path(mg, inode, mg.root)));
    return w;
  };

  // Conjugators along the maximal forest.
  {
    const int n = static_cast<int>(Xprime.vertices.size());
    std::vector<bool> seen(n, false);
    for (int root = 0; root < n; ++root) {
      if (seen[root]) continue;
      seen[root] = true;
      std::vector<int> queue{root};
      for (size_t qi = 0; qi < queue.size(); ++qi) {
        const int u = queue[qi];
        for (size_t ei = 0; ei < Xprime.edges.size(); ++ei) {
          const auto& e = Xprime.edges[ei];
          if (!e.in_tree) continue;
          int other = -1;
          if (e.white == u) other = e.black;
          else if (e.black == u) other = e.white;
          if (other < 0 || seen[other]) continue;
          seen[other] = true;
          const Word cross = crossing_word(e);
          if (e.white == u)
            anchors.conjugator[other] = append_word(anchors.conjugator[u], cross);
          else
            anchors.conjugator[other] =
                append_word(anchors.conjugator[u], inverse_word(cross));
          queue.push_back(other);
        }
      }
    }
  }

  const long long unit = (profile.mode == ProfileMode::theory)
                             ? checked_mul(1000, profile.delta)
                             : checked_mul(10, profile.neighbor_threshold);
  const long long stable_bound =
      checked_mul(report.diam_xprime, checked_add(report.D0, unit));

  auto measure = [&](const Word& w, VertexId at) {
    return static_cast<long long>(
        act.model->distance(at, act.eval(w).apply(at)));
  };

  for (size_t v = 0; v < Xprime.vertices.size(); ++v) {
    const auto& gv = Xprime.vertices[v];
    const VertexId base = act.eval(anchors.conjugator[v]).apply(anchors.rep[v]);
    if (gv.white) {
      const auto& basis = wb.basis[gv.component];
      for (size_t i = 0; i < basis.red_chords.size(); ++i) {
        GeneratorEntry entry;
        entry.kind = GeneratorEntry::Kind::vertex_red;
        entry.name = Xprime.symbols[gv.red_gens[i]].name;
        std::vector<std::pair<int, bool>> steps;
        for (const auto& [local, fwd] : basis.loops.at(basis.red_chords[i]))
          steps.push_back({wb.edge_local[gv.component][local], fwd});
        Word loop = words.walk_word(
            tracks, wb.vertex_local[gv.component][basis.root], steps);
        entry.g_word = append_word(
            append_word(anchors.conjugator[v], loop),
            inverse_word(anchors.conjugator[v]));
        entry.displacement = measure(entry.g_word, base);
        entry.bound = report.D0;
        entry.within_bound = entry.displacement <= entry.bound;
        report.generators.push_back(std::move(entry));
      }
    } else {
      const auto& mg = midpoints[gv.component];
      for (size_t i = 0; i < mg.chords.size(); ++i) {
        GeneratorEntry entry;
        entry.kind = GeneratorEntry::Kind::black_gen;
        entry.name = Xprime.symbols[gv.red_gens[i]].name;
        const int chord = mg.chords[i];
        std::vector<std::pair<int, bool>> steps =
            mg_tree_path(mg, mg.root, mg.edges[chord].a);
        steps.push_back({chord, true});
        auto back = mg_tree_path(mg, mg.edges[chord].b, mg.root);
        steps.insert(steps.end(), back.begin(), back.end());
        Word loop = mg_steps_word(mg, steps);
        entry.g_word = append_word(
            append_word(anchors.conjugator[v], loop),
            inverse_word(anchors.conjugator[v]));
        entry.displacement = measure(entry.g_word, base);
        entry.bound = report.D0;
        entry.within_bound = entry.displacement <= entry.bound;
        report.generators.push_back(std::move(entry));
      }
    }
  }

  for (const auto& e : Xprime.edges) {
    if (e.in_tree) continue;
    GeneratorEntry entry;
    entry.kind = GeneratorEntry::Kind::stable;
    entry.name = Xprime.symbols[e.stable_symbol].name;
    const Word cross = crossing_word(e);
    entry.g_word = append_word(
        append_word(anchors.conjugator[e.white], cross),
        inverse_word(anchors.conjugator[e.black]));
    const VertexId at =
        act.eval(anchors.conjugator[e.white]).apply(anchors.rep[e.white]);
    entry.displacement = measure(entry.g_word, at);
    entry.bound = stable_bound;
    entry.within_bound = entry.displacement <= entry.bound;
    report.generators.push_back(std::move(entry));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Pipeline

TracksBundle run_tracks_pipeline(const SimpleGraph& g,
                                 const PreferredGeodesicFamily& fam,
                                 const ConstantProfile& profile,
                                 const TriangularPresentation& pres,
                                 const GroupAction& act, std::uint64_t seed) {
  TracksBundle bundle;
  bundle.complex = build_complex(pres);
  validate_action(pres, act);

  std::vector<GraphAutomorphism> F;
  for (const auto& img : act.images) {
    bool dup = false;
    for (const auto& f : F) dup = dup || (f == img);
    if (!dup) F.push_back(img);
  }

  ChannelScan scan = measure_kappa(g, fam, profile, profile.mu, seed);
  AxiomReport axioms = verify_family_axioms(fam, g, profile.mu, profile.epsilon);
  bundle.bounds.kappa_mu = scan.kappa_measured;
  bundle.bounds.K0 = axioms.K0_measured;
  bundle.bounds.K1 = axioms.K1_measured;
  bundle.bounds.k1 = axioms.k1_used;
  const long long fcount = static_cast<long long>(F.size());
  bundle.bounds.n = checked_mul(checked_mul(2 * fcount, 2 * fcount), 2 * fcount);
  bundle.bounds.psi_of_n = psi(bundle.bounds.n, bundle.bounds.kappa_mu, profile.epsilon);

  bundle.goodl = good_l_search(g, fam, profile, F, act.basepoint, bundle.bounds);
  if (!bundle.goodl.found)
    throw BudgetError("tracks: no cylinder parameter passed all inclusions\n" +
                      bundle.goodl.to_text(g));
  const long long l = bundle.goodl.found->l;

  bundle.marked = mark_edges(bundle.complex, act, fam, profile, l);
  for (int t = 0; t < bundle.complex.triangle_count(); ++t) {
    const auto& rel = bundle.complex.pres.relators[t];
    const VertexId x = act.basepoint;
    const VertexId y = act.eval(Word{rel[0]}).apply(act.basepoint);
    const VertexId z = act.eval(Word{rel[0], rel[1]}).apply(act.basepoint);
    bundle.decomps.push_back(triangle_decomposition(g, fam, profile, x, y, z, l,
                                                    bundle.bounds.psi_of_n));
  }

  const long long psi_T = psi(bundle.complex.triangle_count(),
                              bundle.bounds.kappa_mu, profile.epsilon);
  bundle.tracks = build_tracks(bundle.complex, bundle.marked, bundle.decomps,
                               act, profile, psi_T);
  bundle.complement = build_complement(bundle.complex, bundle.marked, bundle.tracks);

  long long dc_red_total = 0;
  for (int b = 0; b < bundle.complement.component_count; ++b) {
    bundle.dcs.push_back(boundary_graph(bundle.tracks, bundle.complement, b));
    bundle.midpoints.push_back(
        midpoint_graph(bundle.complex, bundle.marked, bundle.tracks,
                       bundle.complement, b));
    dc_red_total += bundle.dcs.back().red_edges;
  }
  if (dc_red_total > 2 * bundle.tracks.red_edge_count)
    throw InvariantError("dC graphs carry " + std::to_string(dc_red_total) +
                         " red edges, above 2*N0");

  bundle.X = build_graph_of_groups(bundle.tracks, bundle.complement, bundle.dcs,
                                   bundle.midpoints, pres);
  bundle.Xprime = prune_graph_of_groups(bundle.X, bundle.prune_log,
                                        presentation_h1_f2(pres), bundle.tracks,
                                        bundle.tracks.red_edge_count,
                                        bundle.complex.triangle_count());
  bundle.report = displacement_report(bundle.Xprime, bundle.tracks,
                                      bundle.complement, bundle.dcs,
                                      bundle.midpoints, bundle.complex, act, fam,
                                      profile, bundle.marked);
  return bundle;
}

namespace {

std::string symbol_word_text(const GraphOfGroups& X, const SymbolWord& w) {
  if (w.empty()) return "1";
  std::ostringstream out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out << " ";
    out << X.symbols[w[i].symbol].name;
    if (w[i].sign < 0) out << "^-1";
  }
  return out.str();
}

std::string presentation_word_text(const EmittedPresentation& p, const SymbolWord& w) {
  if (w.empty()) return "1";
  std::ostringstream out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out << " ";
    out << p.generator_names[w[i].symbol];
    if (w[i].sign < 0) out << "^-1";
  }
  return out.str();
}

void gog_section(std::ostringstream& out, const GraphOfGroups& X) {
  out << "white=" << X.white_count() << " black=" << X.black_count()
      << " edges=" << X.edges.size() << "\n";
  for (size_t v = 0; v < X.vertices.size(); ++v) {
    const auto& gv = X.vertices[v];
    out << (gv.white ? "white W" : "black B") << gv.component << " gens:";
    for (int s : gv.red_gens) out << " " << X.symbols[s].name;
    for (int s : gv.blue_gens) out << " " << X.symbols[s].name;
    out << "\n";
  }
  for (const auto& e : X.edges) {
    out << "edge W" << X.vertices[e.white].component << " - B"
        << X.vertices[e.black].component << " dc=" << e.dc_component
        << " gens=" << e.gens.size()
        << " black_attach="
        << (e.attach_black_surjective
                ? "surjective"
                : (e.attach_black_index2 ? "index2" : "other"))
        << "\n";
    for (const auto& gen : e.gens) {
      out << "  attach " << (gen.red ? "red" : "blue") << " white: "
          << symbol_word_text(X, gen.into_white)
          << " | black: " << symbol_word_text(X, gen.into_black) << "\n";
    }
  }
  for (const auto& n : X.notes) out << "note: " << n << "\n";
}

}  // namespace

std::string tracks_report(const SimpleGraph& g, const TracksBundle& bundle,
                          const GroupAction& act) {
  std::ostringstream out;
  const auto& pres = bundle.complex.pres;

  out << "MARKS\n";
  out << "goodl l=" << (bundle.goodl.found ? bundle.goodl.found->l : -1)
      << " n=" << bundle.bounds.n << " psi_n=" << bundle.bounds.psi_of_n
      << " kappa_mu=" << bundle.bounds.kappa_mu << "\n";
  for (const auto& me : bundle.marked) {
    out << "edge " << pres.generators[me.gen] << " marks=" << me.marks()
        << " slices:";
    for (const auto& s : me.slices.slices) {
      out << " {";
      for (size_t i = 0; i < s.members.size(); ++i)
        out << (i ? "," : "") << g.name(s.members[i]);
      out << "}";
    }
    out << "\n";
  }

  out << "TRACKS\n";
  long long blue = 0;
  for (const auto& e : bundle.tracks.edges)
    if (e.color == TrackColor::blue) ++blue;
  out << "vertices=" << bundle.tracks.vertices.size() << " blue=" << blue
      << " red=" << bundle.tracks.red_edge_count << " psi_T="
      << bundle.tracks.psi_T << " N0_bound="
      << bundle.complex.triangle_count() * 30 * bundle.tracks.psi_T << "\n";
  for (size_t t = 0; t < bundle.tracks.triangles.size(); ++t) {
    const auto& tt = bundle.tracks.triangles[t];
    out << "triangle " << (t + 1) << " arcs=(" << tt.arcs[0] << ","
        << tt.arcs[1] << "," << tt.arcs[2] << ") holes=" << tt.hole_marks.size()
        << "\n";
  }

  out << "COMPONENTS\n";
  for (int c = 0; c < bundle.tracks.component_count; ++c) {
    long long size = 0;
    for (size_t v = 0; v < bundle.tracks.vertices.size(); ++v)
      if (bundle.tracks.component[v] == c) ++size;
    out << "track " << c << " size=" << size << " all_blue="
        << (bundle.tracks.component_all_blue[c] ? "yes" : "no") << "\n";
  }
  for (int b = 0; b < bundle.complement.component_count; ++b) {
    std::map<std::string, int> shapes;
    long long count = 0;
    for (size_t p = 0; p < bundle.complement.pieces.size(); ++p) {
      if (bundle.complement.piece_component[p] != b) continue;
      ++count;
      ++shapes[piece_shape_name(bundle.complement.pieces[p].shape)];
    }
    out << "complement " << b << " pieces=" << count << " has_vertex="
        << (bundle.complement.component_has_vertex[b] ? "yes" : "no") << " shapes:";
    for (const auto& [name, n] : shapes) out << " " << name << "=" << n;
    out << " b1=" << bundle.midpoints[b].b1 << "\n";
  }

  out << "DC\n";
  for (int b = 0; b < bundle.complement.component_count; ++b) {
    const auto& dc = bundle.dcs[b];
    out << "black " << b << " components=" << dc.component_count
        << " red_edges=" << dc.red_edges << " whites:";
    for (int w : dc.white_of_component) out << " " << w;
    out << "\n";
  }

  out << "X\n";
  gog_section(out, bundle.X);
  out << "XPRIME\n";
  gog_section(out, bundle.Xprime);
  for (const auto& r : bundle.prune_log.removed) out << "pruned: " << r << "\n";
  out << "one_endedness_flag="
      << (bundle.prune_log.one_endedness_flag ? "RAISED" : "clear") << "\n";

  out << "GENERATORS\n";
  for (const auto& gen : bundle.report.generators) {
    const char* kind = gen.kind == GeneratorEntry::Kind::vertex_red
                           ? "vertex_red"
                           : (gen.kind == GeneratorEntry::Kind::black_gen
                                  ? "vertex_black"
                                  : "stable");
    out << gen.name << " kind=" << kind << " word: "
        << word_to_text(pres.generators, gen.g_word) << "\n";
  }
  // blue loop diagnostics against the slice each component maps into
  {
    WhiteBases wb = compute_white_bases(bundle.tracks);
    BoundaryWords words(bundle.complex, bundle.marked);
    for (int c = 0; c < bundle.tracks.component_count; ++c) {
      const auto& basis = wb.basis[c];
      for (size_t i = 0; i < basis.blue_chords.size(); ++i) {
        std::vector<std::pair<int, bool>> steps;
        for (const auto& [local, fwd] : basis.loops.at(basis.blue_chords[i]))
          steps.push_back({wb.edge_local[c][local], fwd});
        const int root = wb.vertex_local[c][basis.root];
        Word loop = words.walk_word(bundle.tracks, root, steps);
        const auto& rootv = bundle.tracks.vertices[root];
        const auto& slice =
            bundle.marked[rootv.gen].slices.slices[rootv.slice_index].members;
        OrbitDiagnostic diag =
            blue_triviality_check(act, loop, slice.front(), &slice);
        out << "blue w" << c << ".b" << i << " word: "
            << word_to_text(pres.generators, loop) << " " << diag.to_text()
            << "\n";
      }
    }
  }

  out << "RELATORS\n";
  out << "count=" << bundle.report.presentation.relators.size()
      << " max_len=" << bundle.report.max_relator_length
      << " bound=" << bundle.report.relator_length_bound << "\n";
  for (const auto& rel : bundle.report.presentation.relators)
    out << "rel: " << presentation_word_text(bundle.report.presentation, rel) << "\n";

  out << "DISPLACEMENT\n";
  out << "D0=" << bundle.report.D0 << " diam_xprime=" << bundle.report.diam_xprime
      << "\n";
  bool all_within = true;
  for (const auto& gen : bundle.report.generators) {
    out << gen.name << " displacement=" << gen.displacement << " bound="
        << gen.bound << " " << (gen.within_bound ? "ok" : "EXCEEDED") << "\n";
    all_within = all_within && gen.within_bound;
  }
  out << "all_within_bounds=" << (all_within ? "yes" : "NO") << "\n";
  out << "h1_f2 input=" << bundle.report.input_h1_f2 << " emitted="
      << bundle.report.emitted_h1_f2 << "\n";
  return out.str();
}

}  // namespace hypcyl
