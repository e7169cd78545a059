#include "hypcyl/tracks.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

namespace hypcyl {

Word inverse_word(const Word& w) {
  Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    out.push_back({it->gen, -it->sign});
  return out;
}

std::string word_to_text(const std::vector<std::string>& gen_names, const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out << " ";
    out << gen_names[w[i].gen];
    if (w[i].sign < 0) out << "^-1";
  }
  return out.str();
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

Letter parse_letter(const TriangularPresentation& p, const std::string& tok,
                    const std::string& where) {
  std::string base = tok;
  int sign = 1;
  if (base.size() > 3 && base.substr(base.size() - 3) == "^-1") {
    sign = -1;
    base = base.substr(0, base.size() - 3);
  }
  for (size_t i = 0; i < p.generators.size(); ++i)
    if (p.generators[i] == base) return Letter{static_cast<int>(i), sign};
  throw InputError(where + ": unknown generator '" + base + "'");
}

}  // namespace

TriangularPresentation parse_presentation(std::istream& in, const std::string& source) {
  TriangularPresentation p;
  bool have_gens = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '#') continue;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (toks[0] == "gen") {
      if (have_gens) throw InputError(where + ": duplicate 'gen' line");
      have_gens = true;
      for (size_t i = 1; i < toks.size(); ++i) {
        if (std::find(p.generators.begin(), p.generators.end(), toks[i]) !=
            p.generators.end())
          throw InputError(where + ": duplicate generator '" + toks[i] + "'");
        p.generators.push_back(toks[i]);
      }
      if (p.generators.empty()) throw InputError(where + ": empty generator list");
    } else if (toks[0] == "rel") {
      if (!have_gens) throw InputError(where + ": 'rel' before 'gen'");
      if (toks.size() != 4)
        throw InputError(where + ": relators must have exactly 3 letters "
                         "(triangular input required; reduce shorter relators "
                         "before running)");
      std::array<Letter, 3> rel;
      for (int i = 0; i < 3; ++i) rel[i] = parse_letter(p, toks[i + 1], where);
      p.relators.push_back(rel);
    } else {
      throw InputError(where + ": expected 'gen ...' or 'rel ...'");
    }
  }
  if (!have_gens) throw InputError(source + ": missing 'gen' line");
  return p;
}

TriangularPresentation parse_presentation_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open presentation file '" + path + "'");
  return parse_presentation(f, path);
}

std::string serialize_presentation(const TriangularPresentation& p) {
  std::ostringstream out;
  out << "gen";
  for (const auto& g : p.generators) out << " " << g;
  out << "\n";
  for (const auto& rel : p.relators) {
    out << "rel";
    for (const auto& letter : rel) {
      out << " " << p.generators[letter.gen];
      if (letter.sign < 0) out << "^-1";
    }
    out << "\n";
  }
  return out.str();
}

GraphAutomorphism GroupAction::eval(const Word& w) const {
  GraphAutomorphism acc = GraphAutomorphism::identity(model->vertex_count());
  for (const Letter& letter : w) {
    const GraphAutomorphism& img =
        letter.sign > 0 ? images[letter.gen] : images[letter.gen].inverse();
    acc = acc.compose(img);
  }
  return acc;
}

GroupAction parse_action(const SimpleGraph& model, const TriangularPresentation& pres,
                         std::istream& in, const std::string& source) {
  GroupAction act;
  act.model = &model;
  act.images.assign(pres.rank(), GraphAutomorphism::identity(model.vertex_count()));
  std::vector<bool> have(pres.rank(), false);
  bool have_base = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '#') continue;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (toks[0] == "basepoint") {
      if (toks.size() != 2) throw InputError(where + ": expected 'basepoint <vertex>'");
      act.basepoint = model.vertex(toks[1]);
      have_base = true;
    } else if (toks[0] == "gen") {
      if (toks.size() < 4 || toks[2] != "->" || toks[3] != "perm:")
        throw InputError(where + ": expected 'gen <name> -> perm: <v> ...'");
      int gi = -1;
      for (size_t i = 0; i < pres.generators.size(); ++i)
        if (pres.generators[i] == toks[1]) gi = static_cast<int>(i);
      if (gi < 0) throw InputError(where + ": unknown generator '" + toks[1] + "'");
      if (have[gi]) throw InputError(where + ": duplicate image for '" + toks[1] + "'");
      if (static_cast<int>(toks.size()) - 4 != model.vertex_count())
        throw InputError(where + ": permutation needs one image per vertex in "
                         "the graph's vertex order");
      std::vector<VertexId> fwd;
      for (size_t i = 4; i < toks.size(); ++i) fwd.push_back(model.vertex(toks[i]));
      act.images[gi] = GraphAutomorphism::from_images(model, std::move(fwd));
      have[gi] = true;
    } else {
      throw InputError(where + ": expected 'gen ...' or 'basepoint ...'");
    }
  }
  for (int i = 0; i < pres.rank(); ++i)
    if (!have[i])
      throw InputError(source + ": generator '" + pres.generators[i] + "' has no image");
  if (!have_base) throw InputError(source + ": missing 'basepoint' line");
  validate_action(pres, act);
  return act;
}

GroupAction parse_action_file(const SimpleGraph& model,
                              const TriangularPresentation& pres,
                              const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open action file '" + path + "'");
  return parse_action(model, pres, f, path);
}

std::string serialize_action(const TriangularPresentation& pres, const GroupAction& act) {
  std::ostringstream out;
  for (int i = 0; i < pres.rank(); ++i) {
    out << "gen " << pres.generators[i] << " -> perm:";
    for (VertexId v : act.model->vertices())
      out << " " << act.model->name(act.images[i].apply(v));
    out << "\n";
  }
  out << "basepoint " << act.model->name(act.basepoint) << "\n";
  return out.str();
}

void validate_action(const TriangularPresentation& pres, const GroupAction& act) {
  if (static_cast<int>(act.images.size()) != pres.rank())
    throw InputError("action: one image per generator required");
  act.model->require_vertex(act.basepoint);
  for (int t = 0; t < pres.triangle_count(); ++t) {
    Word w(pres.relators[t].begin(), pres.relators[t].end());
    if (!act.eval(w).is_identity())
      throw InputError("action: relator " + std::to_string(t + 1) +
                       " does not act as the identity");
  }
}

VanKampen2Complex build_complex(const TriangularPresentation& pres) {
  if (pres.generators.empty()) throw InputError("presentation has no generators");
  for (const auto& rel : pres.relators) {
    // reduced: no letter immediately cancels its neighbor (cyclically)
    for (int i = 0; i < 3; ++i) {
      const Letter& a = rel[i];
      const Letter& b = rel[(i + 1) % 3];
      if (a.gen == b.gen && a.sign == -b.sign)
        throw InputError("relator is not cyclically reduced");
    }
  }
  return VanKampen2Complex{pres};
}

std::vector<MarkedEdge> mark_edges(const VanKampen2Complex& cx,
                                   const GroupAction& act,
                                   const PreferredGeodesicFamily& fam,
                                   const ConstantProfile& profile, long long l) {
  const SimpleGraph& g = fam.graph();
  std::vector<MarkedEdge> out;
  for (int e = 0; e < cx.edge_count(); ++e) {
    MarkedEdge me;
    me.gen = e;
    VertexId p = act.basepoint;
    VertexId q = act.images[e].apply(p);
    me.cyl = cylinder(g, fam, profile, p, q, l);
    me.slices = slice_partition(g, me.cyl, profile, p);
    out.push_back(std::move(me));
  }
  return out;
}

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

// Mark index on the owning edge for a side position (0-based both).
int side_pos_to_mark_index(const TriangleSide& s, int pos) {
  return s.sign > 0 ? pos : s.mark_count - 1 - pos;
}

std::vector<VertexId> translated_slice(const GraphAutomorphism& t,
                                       const std::vector<VertexId>& s) {
  std::vector<VertexId> out;
  out.reserve(s.size());
  for (VertexId v : s) out.push_back(t.apply(v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TrackGraph build_tracks(const VanKampen2Complex& cx,
                        const std::vector<MarkedEdge>& marked,
                        const std::vector<TriangleDecomposition>& decomps,
                        const GroupAction& act, const ConstantProfile& profile,
                        long long psi_T) {
  (void)profile;
  if (static_cast<int>(marked.size()) != cx.edge_count())
    throw InputError("build_tracks: one marked edge per generator required");
  if (static_cast<int>(decomps.size()) != cx.triangle_count())
    throw InputError("build_tracks: one decomposition per triangle required");
  for (int e = 0; e < cx.edge_count(); ++e) {
    bool used = false;
    for (const auto& rel : cx.pres.relators)
      for (const auto& letter : rel)
        if (letter.gen == e) used = true;
    if (!used)
      throw InputError("generator '" + cx.pres.generators[e] +
                       "' appears in no relator; the complex would have a free "
                       "edge (the group has a free factor)");
  }

  TrackGraph tg;
  tg.psi_T = psi_T;
  tg.mark_base.assign(cx.edge_count(), 0);
  for (int e = 0; e < cx.edge_count(); ++e) {
    tg.mark_base[e] = static_cast<int>(tg.vertices.size());
    for (int k = 0; k < marked[e].marks(); ++k) {
      TrackVertex v;
      v.kind = TrackVertex::Kind::mark;
      v.gen = e;
      v.slice_index = k;
      tg.vertices.push_back(v);
    }
  }

  for (int t = 0; t < cx.triangle_count(); ++t) {
    const auto& rel = cx.pres.relators[t];
    const auto& dec = decomps[t];
    TriangleTracks tt;

    // Corners u0 = 1, u1 = l1, u2 = l1 l2; side i runs corner i -> i+1.
    Word prefix;
    std::array<GraphAutomorphism, 3> corner_elt = {
        act.eval(prefix),
        act.eval(Word{rel[0]}),
        act.eval(Word{rel[0], rel[1]})};
    std::array<VertexId, 3> corner_img = {corner_elt[0].apply(act.basepoint),
                                          corner_elt[1].apply(act.basepoint),
                                          corner_elt[2].apply(act.basepoint)};
    if (corner_img[0] != dec.x || corner_img[1] != dec.y || corner_img[2] != dec.z)
      throw InvariantError("triangle " + std::to_string(t + 1) +
                           ": decomposition corners do not match the relator");

    for (int s = 0; s < 3; ++s) {
      TriangleSide side;
      side.gen = rel[s].gen;
      side.sign = rel[s].sign;
      side.mark_count = marked[side.gen].marks();
      side.from = corner_img[s];
      side.to = corner_img[(s + 1) % 3];
      tt.sides[s] = side;
    }

    // Marks translate equivariantly: the side's slice list must be the
    // translated edge slice list (reversed on inverse letters).
    const std::array<const SlicePartition*, 3> side_slices = {
        &dec.xy, &dec.yz, &dec.xz};  // xz read from z via reversal below
    for (int s = 0; s < 3; ++s) {
      const TriangleSide& side = tt.sides[s];
      SlicePartition part = (s == 2) ? dec.xz.reversed() : *side_slices[s];
      if (static_cast<int>(part.slices.size()) != side.mark_count)
        throw InvariantError("triangle " + std::to_string(t + 1) + " side " +
                             std::to_string(s) + ": slice count differs from "
                             "the edge's mark count (equivariance broken)");
      const GraphAutomorphism translate =
          side.sign > 0 ? corner_elt[s]
                        : corner_elt[(s + 1) % 3];
      for (int q = 0; q < side.mark_count; ++q) {
        const int mk = side_pos_to_mark_index(side, q);
        auto expect = translated_slice(
            translate, marked[side.gen].slices.slices[mk].members);
        if (expect != part.slices[q].members)
          throw InvariantError("triangle " + std::to_string(t + 1) + " side " +
                               std::to_string(s) +
                               ": slices are not equivariant translates of the "
                               "edge slices (decomposition/mark mismatch)");
      }
    }

    tt.arcs = {static_cast<int>(dec.shared_S.size()),
               static_cast<int>(dec.shared_T.size()),
               static_cast<int>(dec.shared_V.size())};
    for (int c = 0; c < 3; ++c) {
      const int rs = c;                // outgoing side at corner c
      const int ls = (c + 2) % 3;      // incoming side
      const int n_rs = tt.sides[rs].mark_count;
      const int n_ls = tt.sides[ls].mark_count;
      if (tt.arcs[c] > std::min(n_rs, n_ls))
        throw InvariantError("triangle " + std::to_string(t + 1) +
                             ": shared run exceeds a side's mark count");
      for (int v = 0; v < tt.arcs[c]; ++v) {
        TrackEdge e;
        e.color = TrackColor::blue;
        e.tri = t;
        // canonical direction: incoming side -> outgoing side
        e.u_at = SideCoord{ls, n_ls - 1 - v};
        e.v_at = SideCoord{rs, v};
        e.u = tg.mark_id(tt.sides[ls].gen,
                         side_pos_to_mark_index(tt.sides[ls], n_ls - 1 - v));
        e.v = tg.mark_id(tt.sides[rs].gen, side_pos_to_mark_index(tt.sides[rs], v));
        tt.blue_ids[c].push_back(static_cast<int>(tg.edges.size()));
        tg.edges.push_back(e);
      }
    }

    // hole sanity: n_s = arcs(start) + holes + arcs(end)
    for (int s = 0; s < 3; ++s) {
      const int start_arcs = tt.arcs[s];
      const int end_arcs = tt.arcs[(s + 1) % 3];
      if (tt.sides[s].mark_count - start_arcs - end_arcs < 0)
        throw InvariantError("triangle " + std::to_string(t + 1) + " side " +
                             std::to_string(s) + ": shared runs overlap the holes");
    }

    for (int s = 0; s < 3; ++s) {
      const int start_arcs = tt.arcs[s];
      const int end_arcs = tt.arcs[(s + 1) % 3];
      for (int q = start_arcs; q < tt.sides[s].mark_count - end_arcs; ++q) {
        tt.hole_marks.push_back(
            tg.mark_id(tt.sides[s].gen, side_pos_to_mark_index(tt.sides[s], q)));
        tt.hole_coords.push_back(SideCoord{s, q});
      }
    }
    if (!tt.hole_marks.empty()) {
      TrackVertex sp;
      sp.kind = TrackVertex::Kind::singular;
      sp.tri = t;
      tt.singular = static_cast<int>(tg.vertices.size());
      tg.vertices.push_back(sp);
      if (static_cast<long long>(tt.hole_marks.size()) > 30 * psi_T)
        throw InvariantError("triangle " + std::to_string(t + 1) + ": singular "
                             "point has " + std::to_string(tt.hole_marks.size()) +
                             " red edges, above 30*psi(T)");
      for (size_t h = 0; h < tt.hole_marks.size(); ++h) {
        TrackEdge e;
        e.color = TrackColor::red;
        e.tri = t;
        e.u = tt.singular;
        e.v = tt.hole_marks[h];
        e.v_at = tt.hole_coords[h];
        tt.red_ids.push_back(static_cast<int>(tg.edges.size()));
        tg.edges.push_back(e);
        ++tg.red_edge_count;
      }
    }
    tg.triangles.push_back(std::move(tt));
  }

  if (tg.red_edge_count > cx.triangle_count() * 30 * psi_T)
    throw InvariantError("total red edges " + std::to_string(tg.red_edge_count) +
                         " above T(G)*30*psi(T)");

  UnionFind uf(static_cast<int>(tg.vertices.size()));
  for (const auto& e : tg.edges) uf.join(e.u, e.v);
  std::map<int, int> roots;
  tg.component.assign(tg.vertices.size(), -1);
  for (size_t v = 0; v < tg.vertices.size(); ++v) {
    int r = uf.find(static_cast<int>(v));
    auto it = roots.find(r);
    if (it == roots.end()) it = roots.emplace(r, static_cast<int>(roots.size())).first;
    tg.component[v] = it->second;
  }
  tg.component_count = static_cast<int>(roots.size());
  tg.component_all_blue.assign(tg.component_count, true);
  for (const auto& e : tg.edges)
    if (e.color == TrackColor::red) tg.component_all_blue[tg.component[e.u]] = false;
  return tg;
}

// ---------------------------------------------------------------------------
// Complement pieces

const char* piece_shape_name(Piece::Shape s) {
  switch (s) {
    case Piece::Shape::spike: return "spike";
    case Piece::Shape::quad: return "quad";
    case Piece::Shape::rr_triangle: return "rr_triangle";
    case Piece::Shape::pentagon: return "pentagon";
    case Piece::Shape::blue_polygon: return "blue_polygon";
    case Piece::Shape::corner_polygon: return "corner_polygon";
    case Piece::Shape::other: return "polygon";
  }
  return "?";
}

namespace {

PieceItem corner_item(int c) {
  PieceItem it;
  it.kind = PieceItem::Kind::corner;
  it.corner = c;
  return it;
}

// Side-interval si of side s, traversed in the side's positive direction.
PieceItem interval_item(const TriangleSide& s, int si) {
  PieceItem it;
  it.kind = PieceItem::Kind::interval;
  it.gen = s.gen;
  const int n = s.mark_count;
  if (s.sign > 0) {
    it.interval = si;
    it.from_pos = si;
    it.to_pos = si + 1;
  } else {
    it.interval = n - si;
    it.from_pos = n + 1 - si;
    it.to_pos = n - si;
  }
  return it;
}

PieceItem track_item(int edge, bool forward) {
  PieceItem it;
  it.kind = PieceItem::Kind::track;
  it.track_edge = edge;
  it.forward = forward;
  return it;
}

}  // namespace

ComplementDecomposition build_complement(const VanKampen2Complex& cx,
                                         const std::vector<MarkedEdge>& marked,
                                         const TrackGraph& tracks) {
  ComplementDecomposition out;

  for (int t = 0; t < cx.triangle_count(); ++t) {
    const TriangleTracks& tt = tracks.triangles[t];
    const auto& sides = tt.sides;
    std::vector<Piece> faces;

    // Spikes and nested quads at each corner with arcs.
    for (int c = 0; c < 3; ++c) {
      const int rs = c, ls = (c + 2) % 3;
      const int n_ls = sides[ls].mark_count;
      if (tt.arcs[c] >= 1) {
        Piece spike;
        spike.tri = t;
        spike.boundary = {corner_item(c), interval_item(sides[rs], 0),
                          track_item(tt.blue_ids[c][0], false),
                          interval_item(sides[ls], n_ls)};
        spike.shape = Piece::Shape::spike;
        faces.push_back(std::move(spike));
      }
      for (int v = 1; v < tt.arcs[c]; ++v) {
        Piece quad;
        quad.tri = t;
        quad.boundary = {interval_item(sides[rs], v),
                         track_item(tt.blue_ids[c][v], false),
                         interval_item(sides[ls], n_ls - v),
                         track_item(tt.blue_ids[c][v - 1], true)};
        quad.shape = Piece::Shape::quad;
        faces.push_back(std::move(quad));
      }
    }

    // Central boundary list; hole marks are sentinels splitting it into the
    // red star's faces.
    struct CentralItem {
      bool is_hole = false;
      int hole_index = -1;
      PieceItem item;
    };
    std::vector<CentralItem> central;
    int hole_counter = 0;
    for (int s = 0; s < 3; ++s) {
      const int start_arcs = tt.arcs[s];
      const int end_arcs = tt.arcs[(s + 1) % 3];
      if (start_arcs > 0) {
        central.push_back({false, -1,
                           track_item(tt.blue_ids[s][start_arcs - 1], true)});
      } else {
        central.push_back({false, -1, corner_item(s)});
      }
      central.push_back({false, -1, interval_item(sides[s], start_arcs)});
      for (int q = start_arcs; q < sides[s].mark_count - end_arcs; ++q) {
        central.push_back({true, hole_counter++, PieceItem{}});
        central.push_back({false, -1, interval_item(sides[s], q + 1)});
      }
    }

    if (tt.hole_marks.empty()) {
      Piece face;
      face.tri = t;
      for (const auto& ci : central) face.boundary.push_back(ci.item);
      face.shape = Piece::Shape::blue_polygon;
      faces.push_back(std::move(face));
    } else {
      const int H = static_cast<int>(tt.hole_marks.size());
      std::vector<int> hole_at(H, -1);
      for (size_t i = 0; i < central.size(); ++i)
        if (central[i].is_hole) hole_at[central[i].hole_index] = static_cast<int>(i);
      for (int h = 0; h < H; ++h) {
        const int next = (h + 1) % H;
        Piece face;
        face.tri = t;
        face.boundary.push_back(track_item(tt.red_ids[h], true));  // sp -> mark
        int i = (hole_at[h] + 1) % central.size();
        while (i != hole_at[next]) {
          face.boundary.push_back(central[i].item);
          i = static_cast<int>((i + 1) % central.size());
        }
        face.boundary.push_back(track_item(tt.red_ids[next], false));  // mark -> sp
        // classify
        int blues = 0, corners = 0, ints = 0;
        for (const auto& it : face.boundary) {
          if (it.kind == PieceItem::Kind::corner) ++corners;
          else if (it.kind == PieceItem::Kind::interval) ++ints;
          else if (tracks.edges[it.track_edge].color == TrackColor::blue) ++blues;
        }
        if (corners == 0 && blues == 0 && ints == 1)
          face.shape = Piece::Shape::rr_triangle;
        else if (corners == 0 && blues == 1 && ints == 2)
          face.shape = Piece::Shape::pentagon;
        else if (corners > 0)
          face.shape = Piece::Shape::corner_polygon;
        else
          face.shape = Piece::Shape::other;
        faces.push_back(std::move(face));
      }
    }

    for (auto& f : faces) {
      f.interval_count = 0;
      for (const auto& it : f.boundary) {
        if (it.kind == PieceItem::Kind::interval) ++f.interval_count;
        if (it.kind == PieceItem::Kind::corner) f.has_corner = true;
      }
      if (f.interval_count == 0)
        throw InvariantError("piece without boundary interval in triangle " +
                             std::to_string(t + 1));
      out.pieces.push_back(std::move(f));
    }
  }

  // Self-check: every track edge borders exactly two piece slots, every
  // interval occurrence appears exactly once per side occurrence.
  {
    std::vector<int> edge_slots(tracks.edges.size(), 0);
    std::map<std::pair<int, int>, int> expected;  // (gen, interval) -> occurrences
    for (int t = 0; t < cx.triangle_count(); ++t)
      for (int s = 0; s < 3; ++s) {
        const TriangleSide& side = tracks.triangles[t].sides[s];
        for (int j = 0; j <= side.mark_count; ++j) ++expected[{side.gen, j}];
      }
    std::map<std::pair<int, int>, int> found;
    for (const auto& p : out.pieces)
      for (const auto& it : p.boundary) {
        if (it.kind == PieceItem::Kind::track) ++edge_slots[it.track_edge];
        if (it.kind == PieceItem::Kind::interval) ++found[{it.gen, it.interval}];
      }
    for (size_t e = 0; e < tracks.edges.size(); ++e)
      if (edge_slots[e] != 2)
        throw InvariantError("track edge " + std::to_string(e) + " borders " +
                             std::to_string(edge_slots[e]) + " pieces, not 2");
    if (found != expected)
      throw InvariantError("interval incidence differs from the side occurrences");
    for (int e = 0; e < cx.edge_count(); ++e)
      for (int j = 0; j <= marked[e].marks(); ++j)
        if (!expected.count({e, j}))
          throw InvariantError("edge interval missing from every triangle");
  }

  // Glue pieces: across shared intervals, and through the single vertex.
  const int P = static_cast<int>(out.pieces.size());
  UnionFind uf(P + 1);  // node P = the complex vertex zone
  std::map<std::pair<int, int>, int> interval_rep;
  for (int i = 0; i < P; ++i) {
    for (const auto& it : out.pieces[i].boundary) {
      if (it.kind == PieceItem::Kind::corner) uf.join(i, P);
      if (it.kind == PieceItem::Kind::interval) {
        auto key = std::make_pair(it.gen, it.interval);
        auto rep = interval_rep.find(key);
        if (rep == interval_rep.end()) interval_rep.emplace(key, i);
        else uf.join(i, rep->second);
        // end intervals touch the vertex
        if (it.interval == 0 || it.interval == marked[it.gen].marks()) uf.join(i, P);
      }
    }
  }
  std::map<int, int> roots;
  out.piece_component.assign(P, -1);
  for (int i = 0; i < P; ++i) {
    int r = uf.find(i);
    auto it = roots.find(r);
    if (it == roots.end()) it = roots.emplace(r, static_cast<int>(roots.size())).first;
    out.piece_component[i] = it->second;
  }
  out.component_count = static_cast<int>(roots.size());
  out.component_has_vertex.assign(out.component_count, false);
  {
    int r = uf.find(P);
    auto it = roots.find(r);
    if (it != roots.end()) out.component_has_vertex[it->second] = true;
  }
  for (const auto& [key, rep] : interval_rep)
    out.interval_component[key] = out.piece_component[rep];
  return out;
}

// ---------------------------------------------------------------------------
// Words

BoundaryWords::BoundaryWords(const VanKampen2Complex& cx,
                             const std::vector<MarkedEdge>& marked)
    : cx_(&cx) {
  for (const auto& me : marked) marks_.push_back(me.marks());
}

Word BoundaryWords::along_edge(int gen, int from_pos, int to_pos) const {
  const int n = marks_[gen];
  Word w;
  if (from_pos < to_pos) {
    if (to_pos == n + 1) w.push_back({gen, 1});
  } else if (from_pos > to_pos) {
    if (from_pos == n + 1) w.push_back({gen, -1});
  }
  return w;
}

Word BoundaryWords::partial_side(const TriangleSide& s, int u, int v) const {
  const int n = s.mark_count;
  Word w;
  if (s.sign > 0) {
    // side positions are edge positions
    if (v == n + 1 && u <= n) w.push_back({s.gen, 1});
  } else {
    if (u == 0 && v >= 1) w.push_back({s.gen, -1});
  }
  return w;
}

Word BoundaryWords::route(const TriangleTracks& tri, SideCoord from, SideCoord to) const {
  // boundary positions: mark pos q sits at side position q+1
  const int ua = from.pos + 1;
  const int ub = to.pos + 1;
  Word w;
  auto append = [&w](const Word& part) { w.insert(w.end(), part.begin(), part.end()); };
  if (from.side == to.side && ua <= ub) {
    append(partial_side(tri.sides[from.side], ua, ub));
    return w;
  }
  append(partial_side(tri.sides[from.side],
                      ua, tri.sides[from.side].mark_count + 1));
  int s = (from.side + 1) % 3;
  while (s != to.side) {
    append(partial_side(tri.sides[s], 0, tri.sides[s].mark_count + 1));
    s = (s + 1) % 3;
  }
  append(partial_side(tri.sides[to.side], 0, ub));
  return w;
}

Word BoundaryWords::track_edge_word(const TrackGraph& t, int edge, bool forward) const {
  const TrackEdge& e = t.edges[edge];
  if (e.color != TrackColor::blue)
    throw InvariantError("red track edges carry words only in pairs");
  Word w = route(t.triangles[e.tri], e.u_at, e.v_at);
  return forward ? w : inverse_word(w);
}

Word BoundaryWords::walk_word(const TrackGraph& t, int start_vertex,
                              const std::vector<std::pair<int, bool>>& steps) const {
  if (t.vertices[start_vertex].kind != TrackVertex::Kind::mark)
    throw InvariantError("track walks must start at a mark");
  Word w;
  int position = start_vertex;
  bool pending = false;
  SideCoord pending_coord;
  int pending_tri = -1;
  for (const auto& [edge, forward] : steps) {
    const TrackEdge& e = t.edges[edge];
    const int from = forward ? e.u : e.v;
    const int to = forward ? e.v : e.u;
    if (from != position)
      throw InvariantError("track walk steps are not contiguous");
    if (e.color == TrackColor::blue) {
      Word part = track_edge_word(t, edge, forward);
      w.insert(w.end(), part.begin(), part.end());
    } else {
      if (t.vertices[to].kind == TrackVertex::Kind::singular) {
        // entering the singular point from a mark
        if (pending) throw InvariantError("unpaired red step");
        pending = true;
        pending_coord = e.v_at;
        pending_tri = e.tri;
      } else {
        if (!pending || pending_tri != e.tri)
          throw InvariantError("red steps must pair through one singular point");
        Word part = route(t.triangles[e.tri], pending_coord, e.v_at);
        w.insert(w.end(), part.begin(), part.end());
        pending = false;
      }
    }
    position = to;
  }
  if (pending) throw InvariantError("track walk ends inside a singular point");
  return w;
}

// ---------------------------------------------------------------------------
// Generator selection on red/blue graphs

GeneratorBasis select_generators(const RBGraph& g) {
  if (g.n <= 0) throw InputError("select_generators: empty graph");
  {
    UnionFind uf(g.n);
    for (const auto& e : g.edges) uf.join(e.u, e.v);
    for (int v = 1; v < g.n; ++v)
      if (uf.find(v) != uf.find(0))
        throw InputError("select_generators: graph is disconnected");
  }

  // Blue-priority Kruskal: the blue tree edges form a maximal blue forest
  // (equivalently, the dropped blue edges are a minimal set making the blue
  // subgraph a forest), and the red tree edges are a minimal completion.
  GeneratorBasis basis;
  basis.root = 0;
  std::vector<bool> in_tree_edge(g.edges.size(), false);
  UnionFind uf(g.n);
  for (int pass = 0; pass < 2; ++pass) {
    const bool red_pass = (pass == 1);
    for (size_t ei = 0; ei < g.edges.size(); ++ei) {
      const auto& e = g.edges[ei];
      if (e.red != red_pass || e.u == e.v) continue;
      if (uf.find(e.u) == uf.find(e.v)) continue;
      uf.join(e.u, e.v);
      in_tree_edge[ei] = true;
    }
  }

  // Root the spanning tree at vertex 0.
  std::vector<std::vector<std::pair<int, int>>> adj(g.n);  // (neighbor, edge)
  for (size_t ei = 0; ei < g.edges.size(); ++ei) {
    if (!in_tree_edge[ei]) continue;
    adj[g.edges[ei].u].push_back({g.edges[ei].v, static_cast<int>(ei)});
    adj[g.edges[ei].v].push_back({g.edges[ei].u, static_cast<int>(ei)});
  }
  std::vector<int> parent_edge(g.n, -1), parent_vertex(g.n, -1);
  std::vector<bool> seen(g.n, false);
  std::vector<int> queue{0};
  seen[0] = true;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    const int u = queue[qi];
    for (const auto& [w, ei] : adj[u]) {
      if (seen[w]) continue;
      seen[w] = true;
      parent_vertex[w] = u;
      parent_edge[w] = ei;
      queue.push_back(w);
    }
  }

  for (size_t ei = 0; ei < g.edges.size(); ++ei) {
    if (in_tree_edge[ei]) basis.tree_edges.push_back(static_cast<int>(ei));
    else if (g.edges[ei].red) basis.red_chords.push_back(static_cast<int>(ei));
    else basis.blue_chords.push_back(static_cast<int>(ei));
  }

  // Free-basis loops: tree path root -> u, chord, tree path v -> root.
  auto tree_path_down = [&](int v) {
    std::vector<std::pair<int, bool>> rev;  // built v -> root, then reversed
    int cur = v;
    while (parent_edge[cur] >= 0) {
      const auto& e = g.edges[parent_edge[cur]];
      rev.push_back({parent_edge[cur], e.u == parent_vertex[cur]});
      cur = parent_vertex[cur];
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
  };

  for (size_t ei = 0; ei < g.edges.size(); ++ei) {
    if (in_tree_edge[ei]) continue;
    const auto& e = g.edges[ei];
    std::vector<std::pair<int, bool>> loop = tree_path_down(e.u);
    loop.push_back({static_cast<int>(ei), true});
    auto down = tree_path_down(e.v);
    std::reverse(down.begin(), down.end());
    for (auto& [idx, fwd] : down) loop.push_back({idx, !fwd});
    basis.loops[static_cast<int>(ei)] = std::move(loop);
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Orbit diagnostics

std::string OrbitDiagnostic::to_text() const {
  std::ostringstream out;
  out << "orbit finite=" << (finite ? "yes" : (budget_exhausted ? "budget-exhausted" : "no"))
      << " size=" << orbit_size << " diameter=" << orbit_diameter;
  if (confinement_checked) out << " confined=" << (confined ? "yes" : "NO");
  return out.str();
}

OrbitDiagnostic blue_triviality_check(const GroupAction& act, const Word& word,
                                      VertexId start,
                                      const std::vector<VertexId>* confinement,
                                      long long iteration_budget) {
  OrbitDiagnostic diag;
  const GraphAutomorphism sigma = act.eval(word);
  std::set<VertexId> orbit;
  VertexId cur = start;
  for (long long i = 0; i < iteration_budget; ++i) {
    if (!orbit.insert(cur).second) {
      diag.finite = true;
      break;
    }
    cur = sigma.apply(cur);
  }
  if (!diag.finite) diag.budget_exhausted = true;
  diag.orbit_size = static_cast<long long>(orbit.size());
  for (VertexId u : orbit)
    for (VertexId v : orbit)
      diag.orbit_diameter =
          std::max<long long>(diag.orbit_diameter, act.model->distance(u, v));
  if (confinement) {
    diag.confinement_checked = true;
    diag.confined = true;
    for (VertexId v : orbit)
      if (std::find(confinement->begin(), confinement->end(), v) ==
          confinement->end())
        diag.confined = false;
  }
  return diag;
}

}  // namespace hypcyl
