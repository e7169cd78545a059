#include <sstream>

#include "doctest.h"
#include "hypcyl/gog.hpp"
#include "oracles.hpp"

using namespace hypcyl;

namespace {

ConstantProfile c6_profile() { return experiment_profile(1, 2, 1, 1, 4, 1, 1); }

// Rotation of C6 by k steps.
GraphAutomorphism rot(const SimpleGraph& c6, int k) {
  std::vector<VertexId> fwd;
  for (int i = 0; i < 6; ++i)
    fwd.push_back(c6.vertex("v" + std::to_string((i + k) % 6)));
  return GraphAutomorphism::from_images(c6, fwd);
}

TriangularPresentation torus_presentation() {
  std::istringstream in(
      "gen a b c\n"
      "rel a b c^-1\n"
      "rel b a c^-1\n");
  return parse_presentation(in, "torus");
}

GroupAction torus_action(const SimpleGraph& c6, const TriangularPresentation& pres) {
  GroupAction act;
  act.model = &c6;
  act.images = {rot(c6, 1), rot(c6, 2), rot(c6, 3)};
  act.basepoint = c6.vertex("v0");
  validate_action(pres, act);
  return act;
}

}  // namespace

TEST_CASE("presentation parsing and the triangular contract") {
  auto pres = torus_presentation();
  CHECK(pres.rank() == 3);
  CHECK(pres.triangle_count() == 2);
  CHECK(pres.relators[0][2].sign == -1);
  CHECK(serialize_presentation(pres) ==
        "gen a b c\nrel a b c^-1\nrel b a c^-1\n");

  std::istringstream bad("gen a b\nrel a b\n");
  CHECK_THROWS_WITH_AS(parse_presentation(bad, "f"),
                       doctest::Contains("exactly 3"), InputError);

  std::istringstream dup("gen a a\n");
  CHECK_THROWS_AS(parse_presentation(dup, "f"), InputError);
}

TEST_CASE("build_complex counts and rejections") {
  std::istringstream one("gen a b c\nrel a b c\n");
  auto pres = parse_presentation(one, "f");
  auto cx = build_complex(pres);
  CHECK(cx.edge_count() == 3);
  CHECK(cx.triangle_count() == 1);

  auto torus = build_complex(torus_presentation());
  // Euler characteristic 1 - 3 + 2 = 0
  CHECK(1 - torus.edge_count() + torus.triangle_count() == 0);

  std::istringstream unreduced("gen a b\nrel a a^-1 b\n");
  CHECK_THROWS_AS(build_complex(parse_presentation(unreduced, "f")), InputError);
}

TEST_CASE("action parsing validates relators") {
  auto c6 = cycle_graph(6);
  auto pres = torus_presentation();
  auto act = torus_action(c6, pres);
  const std::string text = serialize_action(pres, act);
  std::istringstream in(text);
  auto act2 = parse_action(c6, pres, in);
  CHECK(serialize_action(pres, act2) == text);

  // wrong image for c breaks the relators
  GroupAction bad = act;
  bad.images[2] = rot(c6, 4);
  CHECK_THROWS_AS(validate_action(pres, bad), InputError);
}

TEST_CASE("mark_edges puts one mark per slice") {
  auto c6 = cycle_graph(6);
  auto pres = torus_presentation();
  auto act = torus_action(c6, pres);
  AllGeodesicsFamily fam(c6);
  auto marked = mark_edges(build_complex(pres), act, fam, c6_profile(), 12);
  REQUIRE(marked.size() == 3);
  CHECK(marked[0].marks() == 1);  // Cyl(v0, v1) collapses into one slice
  CHECK(marked[1].marks() == 3);  // Cyl(v0, v2)
  CHECK(marked[2].marks() == 4);  // Cyl(v0, v3), antipodal
}

TEST_CASE("identity generator marks a single point") {
  auto c6 = cycle_graph(6);
  std::istringstream in("gen a e\nrel e e e\n");  // e acts trivially
  auto pres = parse_presentation(in, "f");
  GroupAction act;
  act.model = &c6;
  act.images = {rot(c6, 2), rot(c6, 0)};
  act.basepoint = c6.vertex("v0");
  validate_action(pres, act);
  AllGeodesicsFamily fam(c6);
  auto marked = mark_edges(build_complex(pres), act, fam, c6_profile(), 12);
  CHECK(marked[1].marks() == 1);
  CHECK(marked[0].marks() == 3);  // same image as another generator would match
}

TEST_CASE("select_generators splits blue and red chords") {
  // all-blue cycle: one blue generator
  RBGraph cycle;
  cycle.n = 4;
  cycle.edges = {{0, 1, false}, {1, 2, false}, {2, 3, false}, {3, 0, false}};
  auto basis = select_generators(cycle);
  CHECK(basis.blue_chords.size() == 1);
  CHECK(basis.red_chords.empty());

  // tree: no generators at all
  RBGraph tree;
  tree.n = 4;
  tree.edges = {{0, 1, true}, {1, 2, false}, {1, 3, true}};
  auto tbasis = select_generators(tree);
  CHECK(tbasis.blue_chords.empty());
  CHECK(tbasis.red_chords.empty());

  // theta graph with one red edge: one blue + one red generator
  RBGraph theta;
  theta.n = 2;
  theta.edges = {{0, 1, false}, {0, 1, false}, {0, 1, true}};
  auto thbasis = select_generators(theta);
  CHECK(thbasis.blue_chords.size() == 1);
  CHECK(thbasis.red_chords.size() == 1);
  // generator count equals b1 = E - V + 1
  CHECK(thbasis.blue_chords.size() + thbasis.red_chords.size() ==
        theta.edges.size() - theta.n + 1);

  RBGraph split;
  split.n = 2;
  split.edges = {};
  CHECK_THROWS_AS(select_generators(split), InputError);
}

TEST_CASE("blue maximality: removal keeps the blue subgraph a forest") {
  RBGraph g;
  g.n = 5;
  g.edges = {{0, 1, false}, {1, 2, false}, {2, 0, false},
             {2, 3, true},  {3, 4, true},  {4, 2, true}};
  auto basis = select_generators(g);
  CHECK(basis.blue_chords.size() == 1);
  CHECK(basis.red_chords.size() == 1);
  CHECK(basis.tree_edges.size() == 4);
}

TEST_CASE("orbit diagnostics") {
  auto c6 = cycle_graph(6);
  auto pres = torus_presentation();
  auto act = torus_action(c6, pres);

  auto idle = blue_triviality_check(act, Word{}, c6.vertex("v0"), nullptr);
  CHECK(idle.finite);
  CHECK(idle.orbit_size == 1);

  Word spin{{0, 1}};  // rotation: finite orbit covering the cycle
  auto diag = blue_triviality_check(act, spin, c6.vertex("v0"), nullptr);
  CHECK(diag.finite);
  CHECK(diag.orbit_size == 6);

  std::vector<VertexId> slice{c6.vertex("v0")};
  auto confined = blue_triviality_check(act, spin, c6.vertex("v0"), &slice);
  CHECK(confined.confinement_checked);
  CHECK_FALSE(confined.confined);
}

TEST_CASE("torus pipeline reproduces the one-white-one-black shape") {
  auto c6 = cycle_graph(6);
  auto pres = torus_presentation();
  auto act = torus_action(c6, pres);
  AllGeodesicsFamily fam(c6);
  // threshold 3 collapses each cylinder into one slice: every mark turns red
  // through its triangle's singular point, one track component, and every
  // complement piece touches the base vertex
  auto profile = experiment_profile(1, 2, 1, 1, 4, 1, 3);
  auto bundle = run_tracks_pipeline(c6, fam, profile, pres, act, 0);

  CHECK(bundle.goodl.found.has_value());
  CHECK(bundle.tracks.red_edge_count > 0);
  CHECK(bundle.tracks.red_edge_count <=
        bundle.complex.triangle_count() * 30 * bundle.tracks.psi_T);

  long long dc_red = 0;
  for (const auto& dc : bundle.dcs) dc_red += dc.red_edges;
  CHECK(dc_red <= 2 * bundle.tracks.red_edge_count);

  CHECK(bundle.Xprime.white_count() == 1);
  CHECK(bundle.Xprime.black_count() == 1);

  // homology shadow: the emitted presentation has the input's H1 dimension
  CHECK(presentation_h1_f2(pres) == 2);
  CHECK(bundle.report.emitted_h1_f2 == bundle.report.input_h1_f2);

  // marks sit in exactly one track component; blue edges match equal slices
  for (const auto& e : bundle.tracks.edges) {
    if (e.color != TrackColor::blue) continue;
    CHECK(bundle.tracks.component[e.u] == bundle.tracks.component[e.v]);
  }

  auto text = tracks_report(c6, bundle, act);
  for (const char* section : {"MARKS", "TRACKS", "COMPONENTS", "DC", "X",
                              "XPRIME", "GENERATORS", "RELATORS", "DISPLACEMENT"})
    CHECK(text.find(section) != std::string::npos);
}

TEST_CASE("richer torus profile: four pockets, homology still conserved") {
  auto c6 = cycle_graph(6);
  auto pres = torus_presentation();
  auto act = torus_action(c6, pres);
  AllGeodesicsFamily fam(c6);
  auto bundle = run_tracks_pipeline(c6, fam, c6_profile(), pres, act, 0);
  CHECK(bundle.Xprime.white_count() == 1);
  CHECK(bundle.complement.component_count == 4);
  CHECK(bundle.report.emitted_h1_f2 == bundle.report.input_h1_f2);
}

TEST_CASE("unpruned graph of groups presents the input group's H1") {
  auto c6 = cycle_graph(6);
  AllGeodesicsFamily fam(c6);

  struct Fixture {
    const char* pres_text;
    std::vector<int> rotations;
  };
  std::vector<Fixture> fixtures = {
      {"gen a b c\nrel a b c^-1\nrel b a c^-1\n", {1, 2, 3}},  // Z^2
      {"gen a b c\nrel a b c\n", {1, 2, 3}},                   // free of rank 2
      {"gen a b c\nrel a b c^-1\nrel a b c\n", {1, 2, 3}},     // (ab)^2 = 1
      {"gen a\nrel a a a\n", {2}},                             // Z/3
  };
  for (const auto& fx : fixtures) {
    std::istringstream in(fx.pres_text);
    auto pres = parse_presentation(in, "fx");
    GroupAction act;
    act.model = &c6;
    for (int k : fx.rotations) act.images.push_back(rot(c6, k));
    act.basepoint = c6.vertex("v0");
    validate_action(pres, act);
    auto bundle = run_tracks_pipeline(c6, fam, c6_profile(), pres, act, 0);
    GraphOfGroups X = bundle.X;
    auto emitted = emit_presentation(X);
    CHECK(emitted.h1_f2_dim == presentation_h1_f2(pres));
  }
}

TEST_CASE("tripod action: red edges only for the center marks") {
  auto tripod = spider_graph({5, 5, 5});
  // rotate the three legs; the single relator's triangle is the tripod itself
  std::vector<VertexId> fwd{tripod.vertex("o")};
  for (int leg = 0; leg < 3; ++leg)
    for (int i = 1; i <= 5; ++i)
      fwd.push_back(tripod.vertex("l" + std::to_string((leg + 1) % 3) + "_" +
                                  std::to_string(i)));
  auto rho = GraphAutomorphism::from_images(tripod, fwd);

  std::istringstream in("gen r\nrel r r r\n");
  auto pres = parse_presentation(in, "tripod");
  GroupAction act;
  act.model = &tripod;
  act.images = {rho};
  act.basepoint = tripod.vertex("l0_5");
  validate_action(pres, act);
  AllGeodesicsFamily fam(tripod);
  auto profile = experiment_profile(0, 2, 1, 1, 4, 1, 0);
  auto bundle = run_tracks_pipeline(tripod, fam, profile, pres, act, 0);

  REQUIRE(bundle.marked.size() == 1);
  CHECK(bundle.marked[0].marks() == 11);
  long long reds = 0, blues = 0;
  const int center_mark = bundle.tracks.mark_id(0, 5);
  for (const auto& e : bundle.tracks.edges) {
    if (e.color == TrackColor::red) {
      ++reds;
      CHECK(e.v == center_mark);
    } else {
      ++blues;
    }
  }
  CHECK(reds == 3);
  CHECK(blues == 15);
  // one triangle, three empty-hole corners would mean no singular point; here
  // exactly one singular point collects the center
  CHECK(bundle.tracks.triangles[0].singular >= 0);
  CHECK(bundle.tracks.triangles[0].hole_marks.size() == 3);
}

TEST_CASE("holes-empty triangle grows no singular point") {
  // build_tracks on a hand-made decomposition shape: reuse the tripod data
  // but give the triangle full shared runs by splitting marks evenly; the
  // real pipeline case is covered above, this pins the no-red rule
  auto c6 = cycle_graph(6);
  auto pres = torus_presentation();
  auto act = torus_action(c6, pres);
  AllGeodesicsFamily fam(c6);
  auto profile = experiment_profile(1, 2, 1, 1, 4, 1, 3);
  auto bundle = run_tracks_pipeline(c6, fam, profile, pres, act, 0);
  for (const auto& tt : bundle.tracks.triangles)
    if (tt.hole_marks.empty()) CHECK(tt.singular < 0);
}

TEST_CASE("generators with equal images mark equally") {
  auto c6 = cycle_graph(6);
  std::istringstream in("gen a b c\nrel a b c^-1\nrel b a c^-1\n");
  auto pres = parse_presentation(in, "f");
  GroupAction act;
  act.model = &c6;
  act.images = {rot(c6, 2), rot(c6, 2), rot(c6, 4)};
  act.basepoint = c6.vertex("v0");
  validate_action(pres, act);
  AllGeodesicsFamily fam(c6);
  auto marked = mark_edges(build_complex(pres), act, fam, c6_profile(), 12);
  CHECK(marked[0].marks() == marked[1].marks());
}

TEST_CASE("doubled-edge relator yields a Mobius-like pocket") {
  // relator a a b with an involution acting for a: the strip between the
  // doubled a-side tracks closes up with a flip
  auto c6 = cycle_graph(6);
  std::istringstream in("gen a b\nrel a a b\n");
  auto pres = parse_presentation(in, "m");
  GroupAction act;
  act.model = &c6;
  act.images = {rot(c6, 3), rot(c6, 0)};
  act.basepoint = c6.vertex("v0");
  validate_action(pres, act);
  AllGeodesicsFamily fam(c6);
  auto profile = experiment_profile(1, 2, 1, 1, 4, 1, 2);
  auto bundle = run_tracks_pipeline(c6, fam, profile, pres, act, 0);

  REQUIRE(bundle.complement.component_count == 2);
  CHECK(bundle.dcs[1].component_count == 1);
  CHECK(bundle.midpoints[1].b1 == 1);
  bool found_index2 = false;
  for (const auto& e : bundle.X.edges) {
    if (bundle.X.vertices[e.black].component != 1) continue;
    CHECK_FALSE(e.attach_black_surjective);
    CHECK(e.attach_black_index2);
    found_index2 = true;
  }
  CHECK(found_index2);

  // disk pocket: the vertex component's boundary graph splits in two, one
  // circle per side, and the trivial side shows the mod-2 index-2 shadow
  CHECK(bundle.dcs[0].component_count == 2);
}

TEST_CASE("free edges are rejected") {
  auto c6 = cycle_graph(6);
  std::istringstream in("gen a b c d\nrel a b c^-1\nrel b a c^-1\n");
  auto pres = parse_presentation(in, "f");
  GroupAction act;
  act.model = &c6;
  act.images = {rot(c6, 1), rot(c6, 2), rot(c6, 3), rot(c6, 0)};
  act.basepoint = c6.vertex("v0");
  validate_action(pres, act);
  AllGeodesicsFamily fam(c6);
  CHECK_THROWS_WITH_AS(run_tracks_pipeline(c6, fam, c6_profile(), pres, act, 0),
                       doctest::Contains("free"), InputError);
}
