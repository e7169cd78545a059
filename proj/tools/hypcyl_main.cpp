// Command-line front end: batch subcommands over graph/profile/presentation
// files, emitting deterministic plain-text reports.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "hypcyl/gog.hpp"

using namespace hypcyl;

namespace {

struct RunConfig {
  std::string graph_path;
  std::string profile_path;
  std::string presentation_path;
  std::string action_path;
  std::string out_path;
  std::uint64_t seed = 0;
  long long budget_override = -1;
  std::string subcommand;
  std::vector<std::string> args;
};

std::string config_header(const RunConfig& cfg) {
  std::ostringstream out;
  out << "# hypcyl " << cfg.subcommand;
  for (const auto& a : cfg.args) out << " " << a;
  out << "\n# graph=" << cfg.graph_path << " profile=" << cfg.profile_path;
  if (!cfg.presentation_path.empty())
    out << " presentation=" << cfg.presentation_path;
  if (!cfg.action_path.empty()) out << " action=" << cfg.action_path;
  out << " seed=" << cfg.seed << " budget="
      << (cfg.budget_override >= 0 ? std::to_string(cfg.budget_override)
                                   : std::string("profile"))
      << "\n";
  return out.str();
}

struct Inputs {
  SimpleGraph graph;
  ConstantProfile profile;
};

// One comment line echoing the constants every report was produced under.
std::string profile_echo(const ConstantProfile& p) {
  std::ostringstream out;
  out << "# profile mode=" << (p.mode == ProfileMode::theory ? "theory" : "experiment")
      << " delta=" << p.delta << " lambda=" << p.lambda << " epsilon=" << p.epsilon
      << " mu=" << p.mu << " nu=" << p.nu << " l=" << p.l
      << " neighbor_threshold=" << p.neighbor_threshold << " budget=" << p.budget;
  if (p.degenerate()) out << " degenerate=yes";
  out << "\n";
  return out.str();
}

Inputs load_inputs(const RunConfig& cfg) {
  if (cfg.graph_path.empty()) throw InputError("--graph is required");
  if (cfg.profile_path.empty()) throw InputError("--profile is required");
  Inputs in{parse_graph_file(cfg.graph_path), parse_profile_file(cfg.profile_path)};
  if (cfg.budget_override >= 0) in.profile.budget = cfg.budget_override;
  return in;
}

std::vector<GraphAutomorphism> family_from_action(const SimpleGraph& g,
                                                  const RunConfig& cfg,
                                                  GroupAction& act_out,
                                                  TriangularPresentation& pres_out) {
  if (cfg.presentation_path.empty() || cfg.action_path.empty())
    throw InputError("this subcommand needs --presentation and --action");
  pres_out = parse_presentation_file(cfg.presentation_path);
  act_out = parse_action_file(g, pres_out, cfg.action_path);
  std::vector<GraphAutomorphism> F;
  for (const auto& img : act_out.images) {
    bool dup = false;
    for (const auto& f : F) dup = dup || (f == img);
    if (!dup) F.push_back(img);
  }
  return F;
}

MeasuredBounds measure_bounds(const SimpleGraph& g,
                              const PreferredGeodesicFamily& fam,
                              const ConstantProfile& profile, long long n_for_psi,
                              std::uint64_t seed) {
  MeasuredBounds b;
  b.kappa_mu = measure_kappa(g, fam, profile, profile.mu, seed).kappa_measured;
  AxiomReport axioms = verify_family_axioms(fam, g, profile.mu, profile.epsilon);
  b.K0 = axioms.K0_measured;
  b.K1 = axioms.K1_measured;
  b.k1 = axioms.k1_used;
  b.n = n_for_psi;
  b.psi_of_n = psi(n_for_psi, b.kappa_mu, profile.epsilon);
  return b;
}

int cmd_delta(const RunConfig& cfg, std::ostream& out) {
  Inputs in = load_inputs(cfg);
  out << profile_echo(in.profile);
  AllGeodesicsFamily fam(in.graph);
  BudgetMeter meter(in.profile.budget, "slim_delta");
  out << "slim_delta = " << slim_delta(in.graph, meter) << "\n";
  out << verify_family_axioms(fam, in.graph, in.profile.l, in.profile.epsilon)
             .to_text();
  return 0;
}

int cmd_cylinder(const RunConfig& cfg, std::ostream& out) {
  Inputs in = load_inputs(cfg);
  out << profile_echo(in.profile);
  if (cfg.args.size() != 2) throw InputError("usage: cylinder <x> <y>");
  AllGeodesicsFamily fam(in.graph);
  auto cyl = cylinder(in.graph, fam, in.profile,
                      in.graph.vertex(cfg.args[0]), in.graph.vertex(cfg.args[1]),
                      in.profile.l);
  out << cylinder_report(in.graph, cyl);
  return 0;
}

int cmd_slices(const RunConfig& cfg, std::ostream& out) {
  Inputs in = load_inputs(cfg);
  out << profile_echo(in.profile);
  if (cfg.args.size() != 2) throw InputError("usage: slices <x> <y>");
  AllGeodesicsFamily fam(in.graph);
  VertexId x = in.graph.vertex(cfg.args[0]);
  VertexId y = in.graph.vertex(cfg.args[1]);
  // canonical presentation: anchors in vertex order
  if (y < x) std::swap(x, y);
  auto cyl = cylinder(in.graph, fam, in.profile, x, y, in.profile.l);
  auto part = slice_partition(in.graph, cyl, in.profile, x);
  out << slice_report(in.graph, part);
  long long diam = 0;
  for (const auto& s : part.slices)
    diam = std::max(diam, slice_diameter(in.graph, s));
  out << "max_slice_diameter = " << diam << " (bound "
      << slice_diameter_bound(in.profile) << ")\n";
  if (part.slices.size() >= 2)
    out << "consecutive_gap = " << consecutive_slice_gap(in.graph, part)
        << " (bound " << slice_gap_bound(in.profile) << ")\n";
  return 0;
}

int cmd_channels(const RunConfig& cfg, std::ostream& out) {
  Inputs in = load_inputs(cfg);
  out << profile_echo(in.profile);
  if (cfg.args.size() != 3) throw InputError("usage: channels <a> <b> <L>");
  AllGeodesicsFamily fam(in.graph);
  const long long L = std::stoll(cfg.args[2]);
  auto scan = channels(in.graph, fam, in.profile, in.graph.vertex(cfg.args[0]),
                       in.graph.vertex(cfg.args[1]), L, cfg.seed);
  out << "channels " << cfg.args[0] << " " << cfg.args[1] << " L=" << L << "\n";
  for (const auto& ch : scan.channels) {
    out << "core:";
    for (VertexId v : ch.core.verts) out << " " << in.graph.name(v);
    out << " ambient:";
    for (VertexId v : ch.ambient.verts) out << " " << in.graph.name(v);
    out << "\n";
  }
  out << "count = " << scan.channels.size() << "\n";
  out << "kappa_measured = " << scan.kappa_measured << " over "
      << scan.pairs_sampled
      << (scan.sampled_all_pairs ? " pairs (all pairs within 3L)"
                                 : " sampled pairs (seeded)")
      << "\n";
  return 0;
}

int cmd_goodl(const RunConfig& cfg, std::ostream& out) {
  Inputs in = load_inputs(cfg);
  out << profile_echo(in.profile);
  AllGeodesicsFamily fam(in.graph);
  GroupAction act;
  TriangularPresentation pres;
  auto F = family_from_action(in.graph, cfg, act, pres);
  const long long fcount = static_cast<long long>(F.size());
  const long long n = 8 * fcount * fcount * fcount;
  MeasuredBounds bounds = measure_bounds(in.graph, fam, in.profile, n, cfg.seed);
  auto result = good_l_search(in.graph, fam, in.profile, F, act.basepoint, bounds);
  out << result.to_text(in.graph);
  return 0;
}

int cmd_triangle(const RunConfig& cfg, std::ostream& out) {
  Inputs in = load_inputs(cfg);
  out << profile_echo(in.profile);
  if (cfg.args.size() != 3) throw InputError("usage: triangle <x> <y> <z>");
  AllGeodesicsFamily fam(in.graph);
  // psi(n) from the action's family when given, else the single-map default
  long long n = 8;
  if (!cfg.presentation_path.empty() && !cfg.action_path.empty()) {
    GroupAction act;
    TriangularPresentation pres;
    auto F = family_from_action(in.graph, cfg, act, pres);
    const long long fcount = static_cast<long long>(F.size());
    n = 8 * fcount * fcount * fcount;
  }
  MeasuredBounds bounds = measure_bounds(in.graph, fam, in.profile, n, cfg.seed);
  auto dec = triangle_decomposition(
      in.graph, fam, in.profile, in.graph.vertex(cfg.args[0]),
      in.graph.vertex(cfg.args[1]), in.graph.vertex(cfg.args[2]), in.profile.l,
      bounds.psi_of_n);
  out << dec.to_text(in.graph);
  return 0;
}

int cmd_tracks(const RunConfig& cfg, std::ostream& out) {
  Inputs in = load_inputs(cfg);
  out << profile_echo(in.profile);
  AllGeodesicsFamily fam(in.graph);
  GroupAction act;
  TriangularPresentation pres;
  family_from_action(in.graph, cfg, act, pres);
  auto bundle = run_tracks_pipeline(in.graph, fam, in.profile, pres, act, cfg.seed);
  out << tracks_report(in.graph, bundle, act);
  return 0;
}

// The whole invariant battery over the configured inputs. Deterministic for
// a fixed seed; exit 3 on any violation.
int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  Inputs in = load_inputs(cfg);
  out << profile_echo(in.profile);
  const SimpleGraph& g = in.graph;
  const ConstantProfile& profile = in.profile;
  AllGeodesicsFamily fam(g);
  std::mt19937_64 rng(cfg.seed);
  bool all_ok = true;
  auto line = [&](const std::string& name, bool ok, const std::string& detail) {
    out << "[" << name << "] " << (ok ? "pass" : "FAIL");
    if (!detail.empty()) out << " " << detail;
    out << "\n";
    all_ok = all_ok && ok;
  };

  const auto verts = g.vertices();
  auto pick_vertex = [&]() {
    std::uniform_int_distribution<size_t> d(0, verts.size() - 1);
    return verts[d(rng)];
  };

  // metric invariants on sampled triples
  {
    bool sym = true, tri = true;
    for (int i = 0; i < 200; ++i) {
      VertexId a = pick_vertex(), b = pick_vertex(), c = pick_vertex();
      sym = sym && g.distance(a, b) == g.distance(b, a);
      tri = tri && g.distance(a, c) <= g.distance(a, b) + g.distance(b, c);
    }
    line("metric.symmetry", sym, "samples=200");
    line("metric.triangle", tri, "samples=200");
  }

  // automorphisms act by isometries
  std::vector<GraphAutomorphism> autos;
  {
    bool iso = true;
    autos = all_automorphisms(g, 4096);
    for (const auto& s : autos)
      for (int i = 0; i < 50; ++i) {
        VertexId a = pick_vertex(), b = pick_vertex();
        iso = iso && g.distance(s.apply(a), s.apply(b)) == g.distance(a, b);
      }
    line("automorphism.isometry", iso,
         "count=" + std::to_string(autos.size()));
  }

  // geodesic enumeration against minimal-length filtering on small graphs
  if (g.vertex_count() <= 40) {
    bool ok = true;
    for (int i = 0; i < 10; ++i) {
      VertexId a = pick_vertex(), b = pick_vertex();
      auto geos = g.all_geodesics(a, b, 1 << 20);
      for (const auto& p : geos)
        ok = ok && p.length() == g.distance(a, b) && g.is_valid_path(p);
    }
    line("geodesics.minimal", ok, "samples=10");
  }

  // family axioms
  {
    auto rep = verify_family_axioms(fam, g, profile.l, profile.epsilon);
    line("family.subpath_closure", rep.subpath_closure_pass,
         "K0=" + std::to_string(rep.K0_measured) +
             " K1=" + std::to_string(rep.K1_measured));
  }

  // constants module
  {
    bool ok = true;
    if (profile.mode == ProfileMode::theory) {
      auto ref = theory_profile(profile.delta, profile.epsilon);
      ok = ref.lambda == profile.lambda && ref.mu == profile.mu &&
           ref.nu == profile.nu &&
           ref.neighbor_threshold == profile.neighbor_threshold;
    }
    auto cands = l_candidates(profile, std::max<long long>(4 * profile.epsilon,
                                                           2 * profile.epsilon));
    for (size_t i = 0; i + 1 < cands.size(); ++i)
      ok = ok && cands[i + 1] - cands[i] == 2 * profile.epsilon;
    line("constants.audit", ok, "");
  }

  // cylinders + slices on sampled anchor pairs
  {
    bool sym = true, contain = true, witness_qg = true, near = true;
    bool cocycle = true, antis = true, order = true, diam_ok = true, gap_ok = true;
    bool slice_inv = true, equiv = true;
    long long pairs = 0;
    int delta_graph = -1;
    {
      BudgetMeter m(profile.budget, "slim_delta");
      delta_graph = slim_delta(g, m);
    }
    const int samples = g.vertex_count() <= 12 ? 20 : 10;
    for (int i = 0; i < samples; ++i) {
      VertexId x = pick_vertex(), y = pick_vertex();
      ++pairs;
      auto cyl = cylinder(g, fam, profile, x, y, profile.l);
      auto rev = cylinder(g, fam, profile, y, x, profile.l);
      sym = sym && cyl.members == rev.members;
      for (const auto& geo : fam.paths(x, y))
        for (VertexId v : geo.verts) contain = contain && cyl.contains(v);
      for (const auto& [v, wit] : cyl.witnesses) {
        witness_qg =
            witness_qg && is_quasi_geodesic(g, wit.path, profile.lambda);
        (void)v;
      }
      for (VertexId v : cyl.members) {
        int best = g.vertex_count();
        for (const auto& geo : fam.paths(x, y))
          for (VertexId w : geo.verts) best = std::min(best, g.distance(v, w));
        near = near && best <= 2 * delta_graph + 2 * profile.epsilon;
      }
      for (const auto& s : autos) {
        auto mapped = cylinder(g, fam, profile, s.apply(x), s.apply(y), profile.l);
        std::vector<VertexId> translated;
        for (VertexId v : cyl.members) translated.push_back(s.apply(v));
        std::sort(translated.begin(), translated.end());
        equiv = equiv && mapped.members == translated;
        if (autos.size() > 4) break;  // one nontrivial map per pair is plenty
      }
      // slicing invariants
      for (VertexId u : cyl.members)
        for (VertexId v : cyl.members) {
          const long long duv = diff(g, x, y, u, v, cyl, profile);
          antis = antis && duv == -diff(g, x, y, v, u, cyl, profile);
          for (VertexId w : cyl.members)
            cocycle = cocycle && diff(g, x, y, u, w, cyl, profile) ==
                                     duv + diff(g, x, y, v, w, cyl, profile);
        }
      if (x != y) {
        auto part = slice_partition(g, cyl, profile, x);
        for (const auto& s : part.slices) {
          diam_ok = diam_ok &&
                    slice_diameter(g, s) <= slice_diameter_bound(profile);
          // documented degenerate case: threshold 0 is the singleton-slice
          // regime, where consecutive slices sit at distance exactly one
          if (profile.neighbor_threshold == 0)
            diam_ok = diam_ok && s.members.size() == 1;
        }
        if (part.slices.size() >= 2) {
          const long long gap = consecutive_slice_gap(g, part);
          gap_ok = gap_ok && (profile.neighbor_threshold == 0
                                  ? gap == 1
                                  : gap <= slice_gap_bound(profile));
        }
        // Diff depends only on slices
        for (const auto& s : part.slices)
          for (VertexId u : s.members)
            slice_inv = slice_inv &&
                        diff(g, x, y, u, s.members.front(), cyl, profile) == 0;
        for (size_t si = 0; si < part.slices.size(); ++si)
          for (size_t sj = si + 1; sj < part.slices.size(); ++sj)
            order = order && diff(g, x, y, part.slices[si].members.front(),
                                  part.slices[sj].members.front(), cyl,
                                  profile) < 0;
      }
    }
    line("cylinder.symmetry", sym, "pairs=" + std::to_string(pairs));
    line("cylinder.contains_preferred", contain, "");
    line("cylinder.witness_quasi_geodesic", witness_qg, "");
    line("cylinder.near_geodesic", near,
         "delta_graph=" + std::to_string(delta_graph));
    line("cylinder.equivariance", equiv, "maps=" + std::to_string(autos.size()));
    line("slices.cocycle", cocycle, "");
    line("slices.antisymmetry", antis, "");
    line("slices.total_order", order, "");
    line("slices.diameter_bound", diam_ok, "");
    line("slices.gap_bound", gap_ok, "");
    line("slices.diff_slice_invariant", slice_inv, "");
  }

  // track pipeline when a presentation and action are configured
  if (!cfg.presentation_path.empty() && !cfg.action_path.empty()) {
    GroupAction act;
    TriangularPresentation pres;
    family_from_action(g, cfg, act, pres);
    auto bundle = run_tracks_pipeline(g, fam, profile, pres, act, cfg.seed);
    line("tracks.n0_bound",
         bundle.tracks.red_edge_count <=
             bundle.complex.triangle_count() * 30 * bundle.tracks.psi_T,
         "N0=" + std::to_string(bundle.tracks.red_edge_count));
    long long dc_red = 0;
    for (const auto& dc : bundle.dcs) dc_red += dc.red_edges;
    line("tracks.dc_red_bound", dc_red <= 2 * bundle.tracks.red_edge_count,
         "dc_red=" + std::to_string(dc_red));
    line("tracks.h1_conserved",
         bundle.report.emitted_h1_f2 == bundle.report.input_h1_f2,
         "input=" + std::to_string(bundle.report.input_h1_f2) + " emitted=" +
             std::to_string(bundle.report.emitted_h1_f2));
    bool all_blue_pruned = true;
    for (const auto& v : bundle.Xprime.vertices)
      if (v.white && v.red_gens.empty()) all_blue_pruned = false;
    line("tracks.all_blue_pruned", all_blue_pruned, "");
    bool within = true;
    for (const auto& gen : bundle.report.generators)
      within = within && gen.within_bound;
    line("tracks.displacement_bounds", within, "");
  } else {
    out << "[tracks] skipped (no presentation/action)\n";
  }

  out << "verdict " << (all_ok ? "PASS" : "FAIL") << "\n";
  return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"canonical cylinders, slices and track decompositions on "
               "finite hyperbolic graphs"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--graph", cfg.graph_path, "graph file (v/e lines)");
  app.add_option("--profile", cfg.profile_path, "constant profile file");
  app.add_option("--presentation", cfg.presentation_path,
                 "triangular presentation file");
  app.add_option("--action", cfg.action_path, "group action file");
  app.add_option("--seed", cfg.seed, "seed for all sampling (default 0)");
  app.add_option("--budget", cfg.budget_override,
                 "override the profile's search budget");
  app.add_option("--out", cfg.out_path, "write the report to a file");

  if (const char* env = std::getenv("HYPCYL_BUDGET"))
    cfg.budget_override = std::atoll(env);

  auto add = [&](const std::string& name, const std::string& desc, int nargs) {
    auto* sub = app.add_subcommand(name, desc);
    if (nargs > 0)
      sub->add_option("args", cfg.args)->expected(nargs);
    sub->callback([&cfg, name]() { cfg.subcommand = name; });
    return sub;
  };
  add("delta", "slim hyperbolicity constant plus the family axiom report", 0);
  add("cylinder", "cylinder membership and witnesses for an anchor pair", 2);
  add("slices", "slice partition of a cylinder", 2);
  add("channels", "channels of an anchor pair and measured kappa(L)", 3);
  add("goodl", "pigeonhole search for a good cylinder parameter", 0);
  add("triangle", "ordered slice decomposition of a triangle", 3);
  add("tracks", "full track pipeline to the pruned graph of groups", 0);
  add("verify", "run the whole invariant suite", 0);

  CLI11_PARSE(app, argc, argv);

  std::ostringstream report;
  int status = 0;
  try {
    report << config_header(cfg);
    if (cfg.subcommand == "delta") status = cmd_delta(cfg, report);
    else if (cfg.subcommand == "cylinder") status = cmd_cylinder(cfg, report);
    else if (cfg.subcommand == "slices") status = cmd_slices(cfg, report);
    else if (cfg.subcommand == "channels") status = cmd_channels(cfg, report);
    else if (cfg.subcommand == "goodl") status = cmd_goodl(cfg, report);
    else if (cfg.subcommand == "triangle") status = cmd_triangle(cfg, report);
    else if (cfg.subcommand == "tracks") status = cmd_tracks(cfg, report);
    else if (cfg.subcommand == "verify") status = cmd_verify(cfg, report);
    else throw InputError("unknown subcommand");
  } catch (const BudgetError& e) {
    report << "error(budget): " << e.what() << "\n";
    for (const auto& p : e.partial()) report << "partial: " << p << "\n";
    if (e.lower_bound() >= 0)
      report << "lower_bound: " << e.lower_bound() << "\n";
    status = static_cast<int>(ExitCode::budget);
  } catch (const InvariantError& e) {
    report << "error(invariant): " << e.what() << "\n";
    status = static_cast<int>(ExitCode::invariant);
  } catch (const InputError& e) {
    report << "error(input): " << e.what() << "\n";
    status = static_cast<int>(ExitCode::input);
  }

  if (!cfg.out_path.empty()) {
    std::ofstream f(cfg.out_path);
    if (!f) {
      std::cerr << "error(input): cannot write '" << cfg.out_path << "'\n";
      return static_cast<int>(ExitCode::input);
    }
    f << report.str();
  } else {
    std::cout << report.str();
  }
  return status;
}
