#include "hypcyl/cylinders.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace hypcyl {

void Subdivision::validate(int path_length) const {
  if (breaks.empty() || breaks.size() % 2 != 0)
    throw InputError("subdivision needs breakpoints c1 d1 ... cn dn");
  if (breaks.front() != 0)
    throw InputError("subdivision must start at the path's first vertex");
  if (breaks.back() != path_length)
    throw InputError("subdivision must end at the path's last vertex");
  for (size_t i = 0; i + 1 < breaks.size(); ++i)
    if (breaks[i] > breaks[i + 1])
      throw InputError("subdivision breakpoints must be monotone");
  for (int b : breaks)
    if (b < 0 || b > path_length)
      throw InputError("subdivision breakpoint out of path range");
}

CoarsePiecewiseGeodesic trivial_cptg(const PathSeq& geodesic, long long l) {
  CoarsePiecewiseGeodesic c;
  c.path = geodesic;
  c.subdivision.breaks = {0, geodesic.length()};
  c.l = l;
  return c;
}

bool is_quasi_geodesic_rational(const SimpleGraph& g, const PathSeq& p,
                                long long num, long long den) {
  g.require_path(p);
  if (num < 1 || den < 1) throw InputError("quasi-geodesic parameter must be positive");
  const int m = p.length();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j <= m; ++j) {
      const long long d = g.distance(p.verts[i], p.verts[j]);
      const long long gap = j - i;
      if (den * gap > num * d) return false;  // lower bi-Lipschitz bound
      if (den * d > num * gap) return false;  // upper bound
    }
  return true;
}

bool is_quasi_geodesic(const SimpleGraph& g, const PathSeq& p, long long lambda) {
  return is_quasi_geodesic_rational(g, p, lambda, 1);
}

bool is_local_quasi_geodesic_rational(const SimpleGraph& g, const PathSeq& p,
                                      long long nu, long long num, long long den) {
  g.require_path(p);
  if (nu < 0) throw InputError("window length must be >= 0");
  const int m = p.length();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j <= m && j - i <= nu; ++j) {
      const long long d = g.distance(p.verts[i], p.verts[j]);
      const long long gap = j - i;
      if (den * gap > num * d) return false;
      if (den * d > num * gap) return false;
    }
  return true;
}

bool is_local_quasi_geodesic(const SimpleGraph& g, const PathSeq& p,
                             long long nu, long long lambda) {
  return is_local_quasi_geodesic_rational(g, p, nu, lambda, 1);
}

bool is_local_preferred_geodesic(const PreferredGeodesicFamily& fam,
                                 const PathSeq& p, long long mu) {
  if (mu < 1) throw InputError("mu must be >= 1");
  const int m = p.length();
  if (m == 0) return true;
  const int w = static_cast<int>(std::min<long long>(mu, m));
  for (int i = 0; i + w <= m; ++i)
    if (!fam.contains(p.sub(i, i + w))) return false;
  return true;
}

std::string CptgReport::to_text() const {
  std::ostringstream out;
  auto line = [&](const char* k, bool v) { out << k << " = " << (v ? "pass" : "fail") << "\n"; };
  line("structure", structure_ok);
  line("local_quasi_geodesic", local_quasi_geodesic);
  line("segments_preferred", segments_preferred);
  line("bridges", bridges_ok);
  line("interior_lengths", interior_lengths_ok);
  line("neighborhood", neighborhood_ok);
  for (const auto& f : failures) out << "failure: " << f << "\n";
  return out.str();
}

CptgReport validate_cptg(const CoarsePiecewiseGeodesic& c,
                         const PreferredGeodesicFamily& fam,
                         const ConstantProfile& profile) {
  const SimpleGraph& g = fam.graph();
  g.require_path(c.path);
  CptgReport rep;
  try {
    c.subdivision.validate(c.path.length());
  } catch (const InputError& e) {
    rep.structure_ok = false;
    rep.failures.push_back(e.what());
    return rep;
  }

  if (!is_local_quasi_geodesic_rational(g, c.path, profile.nu, profile.lambda, 2)) {
    rep.local_quasi_geodesic = false;
    rep.failures.push_back("path is not a nu-local lambda/2-quasi-geodesic");
  }

  const int n = c.subdivision.segments();
  for (int i = 0; i < n; ++i) {
    const int cb = c.subdivision.seg_begin(i), de = c.subdivision.seg_end(i);
    if (!is_local_preferred_geodesic(fam, c.path.sub(cb, de), profile.mu)) {
      rep.segments_preferred = false;
      rep.failures.push_back("segment " + std::to_string(i + 1) +
                             " is not a mu-local preferred geodesic");
    }
    if (i + 1 < n) {
      const int bridge = c.subdivision.seg_begin(i + 1) - de;
      if (bridge > profile.epsilon) {
        rep.bridges_ok = false;
        rep.failures.push_back("bridge after segment " + std::to_string(i + 1) +
                               " has length " + std::to_string(bridge));
      }
    }
    if (i > 0 && i < n - 1 && de - cb < c.l) {
      rep.interior_lengths_ok = false;
      rep.failures.push_back("interior segment " + std::to_string(i + 1) +
                             " has length " + std::to_string(de - cb) + " < l");
    }
  }

  bool near = false;
  for (const auto& geo : fam.paths(c.path.front(), c.path.back())) {
    bool all = true;
    for (VertexId v : c.path.verts) {
      int best = g.vertex_count();
      for (VertexId w : geo.verts) best = std::min(best, g.distance(v, w));
      if (best > 2 * profile.epsilon) { all = false; break; }
    }
    if (all) { near = true; break; }
  }
  if (!near) {
    rep.neighborhood_ok = false;
    rep.failures.push_back("path leaves the 2*epsilon-neighborhood of every "
                           "preferred geodesic between its endpoints");
  }
  return rep;
}

bool CylinderSet::contains(VertexId v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

namespace {

// Per-path subdivision feasibility tables. Positions are 0..m.
struct SubdivisionTables {
  int m;
  long long l, eps, mu;
  std::vector<std::vector<char>> short_ok;  // [i][j-i] for j-i <= mu
  std::vector<char> win_ok;                 // full mu-windows at i
  std::vector<int> win_prefix;              // prefix count of win_ok
  std::vector<char> F1, Fn, L, R;

  bool seg_ok(int c, int d) const {
    if (d - c <= mu) return short_ok[c][d - c];
    // all mu-windows inside [c, d]
    return win_prefix[d - (int)mu + 1] - win_prefix[c] == d - (int)mu + 1 - c;
  }
};

SubdivisionTables build_tables(const SimpleGraph& /*g*/,
                               const PreferredGeodesicFamily& fam,
                               const PathSeq& p, long long l, long long mu,
                               long long eps) {
  SubdivisionTables t;
  t.m = p.length();
  t.l = l;
  t.eps = eps;
  t.mu = mu;
  const int m = t.m;
  const int w = static_cast<int>(std::min<long long>(mu, m));
  t.short_ok.assign(m + 1, {});
  for (int i = 0; i <= m; ++i) {
    const int top = std::min<int>(i + w, m) - i;
    t.short_ok[i].assign(static_cast<size_t>(std::min<long long>(mu, m)) + 1, 0);
    for (int len = 0; len <= top && len <= mu; ++len)
      t.short_ok[i][len] = (len == 0) ? 1 : fam.contains(p.sub(i, i + len));
  }
  t.win_ok.assign(std::max(0, m - (int)mu + 1), 0);
  for (int i = 0; i + mu <= m; ++i)
    t.win_ok[i] = t.short_ok[i][static_cast<size_t>(mu)];
  t.win_prefix.assign(t.win_ok.size() + 1, 0);
  for (size_t i = 0; i < t.win_ok.size(); ++i)
    t.win_prefix[i + 1] = t.win_prefix[i] + (t.win_ok[i] ? 1 : 0);

  t.F1.assign(m + 1, 0);
  t.Fn.assign(m + 1, 0);
  for (int q = 0; q <= m; ++q) {
    t.F1[q] = t.seg_ok(0, q);
    t.Fn[q] = t.seg_ok(q, m);
  }

  // L[c]: c can start a segment that is neither first nor absent, i.e. the
  // positions before c are covered by a first segment plus zero or more
  // interior segments and bridges of length <= eps.
  t.L.assign(m + 1, 0);
  std::vector<char> FL(m + 1, 0);
  for (int q = 0; q <= m; ++q) {
    for (int c2 = 0; c2 + l <= q; ++c2)
      if (t.L[c2] && t.seg_ok(c2, q)) { FL[q] = 1; break; }
    for (int d = std::max<long long>(0, q - eps); d <= q; ++d)
      if (t.F1[d] || FL[d]) { t.L[q] = 1; break; }
  }

  // R[d]: symmetric from the right; d can end a non-last segment.
  t.R.assign(m + 1, 0);
  std::vector<char> FR(m + 1, 0);
  for (int q = m; q >= 0; --q) {
    for (int d2 = m; d2 >= q + l; --d2)
      if (t.R[d2] && t.seg_ok(q, d2)) { FR[q] = 1; break; }
    for (int c2 = q; c2 <= std::min<long long>(m, q + eps); ++c2)
      if (t.Fn[c2] || FR[c2]) { t.R[q] = 1; break; }
  }
  return t;
}

// Usable roles of a segment [c, d] within some valid subdivision.
bool segment_usable(const SubdivisionTables& t, int c, int d) {
  if (!t.seg_ok(c, d)) return false;
  if (c == 0 && d == t.m) return true;                       // only segment
  if (c == 0) return t.R[d];                                 // first
  if (d == t.m) return t.L[c];                               // last
  return d - c >= t.l && t.L[c] && t.R[d];                   // interior
}

// Does [c, d] certify membership of v (at some position) under the
// positional condition? Distances are graph distances.
bool segment_certifies(const SimpleGraph& g, const PathSeq& p, int c, int d,
                       VertexId x, VertexId y, long long l, VertexId v) {
  for (int tpos = c; tpos <= d; ++tpos) {
    if (p.verts[tpos] != v) continue;
    if (p.verts[c] != x && g.distance(p.verts[c], v) < l) continue;
    if (p.verts[d] != y && g.distance(p.verts[d], v) < l) continue;
    return true;
  }
  return false;
}

// Lexicographically least subdivision of p certifying v, as flat breakpoints.
// Assumes at least one exists (the membership scan said so).
std::vector<int> least_certifying_subdivision(const SimpleGraph& g,
                                              const SubdivisionTables& t,
                                              const PathSeq& p, VertexId x,
                                              VertexId y, long long l, VertexId v) {
  const int m = t.m;
  // feasible[c][cert]: a valid tail starting with a segment at c exists,
  // certifying v somewhere if cert == 0.
  std::vector<std::array<int, 2>> memo(m + 1, {-1, -1});
  std::function<bool(int, int)> feasible = [&](int c, int cert) -> bool {
    int& slot = memo[c][cert];
    if (slot >= 0) return slot != 0;
    slot = 0;
    for (int d = c; d <= m; ++d) {
      if (!t.seg_ok(c, d)) continue;
      const int cert2 = cert || segment_certifies(g, p, c, d, x, y, l, v);
      if (d == m) {
        if (cert2) { slot = 1; return true; }
        continue;
      }
      if (d - c < t.l) continue;  // interior segment
      for (int c2 = d; c2 <= std::min<long long>(m, d + t.eps); ++c2)
        if (feasible(c2, cert2)) { slot = 1; return true; }
    }
    return false;
  };

  std::vector<int> breaks;
  std::function<bool(int, int, bool)> build = [&](int c, int cert, bool first) -> bool {
    for (int d = c; d <= m; ++d) {
      if (!t.seg_ok(c, d)) continue;
      const int cert2 = cert || segment_certifies(g, p, c, d, x, y, l, v);
      if (d == m) {
        if (!cert2) continue;
        breaks.push_back(c);
        breaks.push_back(d);
        return true;
      }
      if (!first && d - c < t.l) continue;
      for (int c2 = d; c2 <= std::min<long long>(m, d + t.eps); ++c2) {
        if (!feasible(c2, cert2)) continue;
        breaks.push_back(c);
        breaks.push_back(d);
        if (build(c2, cert2, false)) return true;
        breaks.pop_back();
        breaks.pop_back();
      }
    }
    return false;
  };
  if (!build(0, 0, true))
    throw InvariantError("certifying subdivision vanished during reconstruction");
  return breaks;
}

}  // namespace

CylinderSet cylinder(const SimpleGraph& g, const PreferredGeodesicFamily& fam,
                     const ConstantProfile& profile, VertexId x, VertexId y,
                     long long l) {
  g.require_vertex(x);
  g.require_vertex(y);
  validate_profile(profile);
  if (profile.mu < 1 || l < 1)
    throw InputError("cylinder: degenerate profile (mu or l is zero)");
  if (l < profile.mu)
    throw InputError("cylinder: l must be >= mu");

  CylinderSet cyl;
  cyl.x = x;
  cyl.y = y;
  cyl.l = l;

  if (x == y) {
    cyl.members = {x};
    PathSeq triv;
    triv.verts = {x};
    cyl.witnesses.emplace(x, trivial_cptg(triv, l));
    return cyl;
  }

  const long long lambda = profile.lambda;
  const long long eps = profile.epsilon;
  const auto prefs = fam.paths(x, y);

  // Distance to each preferred geodesic, and the union-neighborhood filter
  // for the search.
  const int n = g.vertex_count();
  std::vector<std::vector<int>> geo_dist(prefs.size(), std::vector<int>(n, 0));
  std::vector<char> allowed(n, 0);
  for (size_t gi = 0; gi < prefs.size(); ++gi) {
    for (int v = 0; v < n; ++v) {
      int best = n;
      for (VertexId w : prefs[gi].verts)
        best = std::min(best, g.distance(VertexId{(std::uint32_t)v}, w));
      geo_dist[gi][v] = best;
      if (best <= 2 * eps) allowed[v] = 1;
    }
  }

  BudgetMeter meter = profile.meter("cylinder");
  std::map<VertexId, CoarsePiecewiseGeodesic> witnesses;
  std::set<VertexId> members;

  auto process_path = [&](const PathSeq& p) {
    // Neighborhood clause: one preferred geodesic must cover the whole path.
    bool near = false;
    for (size_t gi = 0; gi < prefs.size() && !near; ++gi) {
      bool all = true;
      for (VertexId v : p.verts)
        if (geo_dist[gi][v.value] > 2 * eps) { all = false; break; }
      near = all;
    }
    if (!near) return;

    auto tables = build_tables(g, fam, p, l, profile.mu, eps);
    std::set<VertexId> certified;
    for (int c = 0; c <= tables.m; ++c) {
      for (int d = c; d <= tables.m; ++d) {
        if (!segment_usable(tables, c, d)) continue;
        for (int tpos = c; tpos <= d; ++tpos) {
          VertexId v = p.verts[tpos];
          if (certified.count(v)) continue;
          if (p.verts[c] != x && g.distance(p.verts[c], v) < l) continue;
          if (p.verts[d] != y && g.distance(p.verts[d], v) < l) continue;
          certified.insert(v);
        }
      }
    }
    for (VertexId v : certified) {
      members.insert(v);
      if (!witnesses.count(v)) {
        CoarsePiecewiseGeodesic wit;
        wit.path = p;
        wit.subdivision.breaks =
            least_certifying_subdivision(g, tables, p, x, y, l, v);
        wit.l = l;
        witnesses.emplace(v, std::move(wit));
      }
    }
  };

  // Depth-first in ascending neighbor order, so paths are discovered in
  // lexicographic order and the first witness found is the least one.
  std::vector<VertexId> path{x};
  std::function<void()> extend = [&]() {
    const int j = static_cast<int>(path.size());
    for (VertexId w : g.neighbors(path.back())) {
      if (!allowed[w.value]) continue;
      meter.tick();
      bool ok = true;
      for (int i = j - 1; i >= 0 && ok; --i) {
        const long long d = g.distance(path[i], w);
        const long long gap = j - i;
        if (gap <= profile.nu) {
          ok = 2 * gap <= lambda * d;  // local lambda/2 lower bound
        } else {
          ok = gap <= lambda * d;  // global lambda lower bound
        }
      }
      if (!ok) continue;
      path.push_back(w);
      if (w == y) {
        PathSeq p;
        p.verts = path;
        process_path(p);
      } else {
        extend();
      }
      path.pop_back();
    }
  };

  try {
    extend();
  } catch (const BudgetError& e) {
    std::vector<std::string> partial;
    for (VertexId v : members) partial.push_back(g.name(v));
    throw BudgetError("cylinder(" + g.name(x) + "," + g.name(y) +
                          "): " + e.what() + "; members found so far form a "
                          "certified subset",
                      partial);
  }

  cyl.members.assign(members.begin(), members.end());
  cyl.witnesses = std::move(witnesses);
  return cyl;
}

CylinderSet cylinder(const SimpleGraph& g, const PreferredGeodesicFamily& fam,
                     const ConstantProfile& profile, VertexId x, VertexId y) {
  return cylinder(g, fam, profile, x, y, profile.l);
}

std::string cylinder_report(const SimpleGraph& g, const CylinderSet& cyl) {
  std::ostringstream out;
  out << "cyl " << g.name(cyl.x) << " " << g.name(cyl.y) << " l=" << cyl.l << "\n";
  for (VertexId v : cyl.members) out << "m " << g.name(v) << "\n";
  for (VertexId v : cyl.members) {
    auto it = cyl.witnesses.find(v);
    if (it == cyl.witnesses.end()) continue;
    out << "witness " << g.name(v) << " :";
    for (VertexId w : it->second.path.verts) out << " " << g.name(w);
    out << " | subdivision:";
    for (int b : it->second.subdivision.breaks) out << " " << b;
    out << "\n";
  }
  return out.str();
}

namespace {

std::vector<LChannel> channels_of_pair(const SimpleGraph& g,
                                       const PreferredGeodesicFamily& fam,
                                       const ConstantProfile& profile,
                                       VertexId a, VertexId b, long long L) {
  const long long eps = profile.epsilon;
  std::vector<LChannel> out;
  std::set<std::vector<VertexId>> cores_seen;
  for (VertexId a2 : g.vertices()) {
    if (g.distance(a, a2) > 2 * eps) continue;
    for (VertexId b2 : g.vertices()) {
      if (g.distance(b, b2) > 2 * eps) continue;
      if (g.distance(a2, b2) != 3 * L) continue;
      for (const auto& g2 : fam.paths(a2, b2)) {
        PathSeq core = g2.sub(static_cast<int>(L), static_cast<int>(2 * L));
        if (!fam.contains(core)) continue;
        if (!cores_seen.insert(core.verts).second) continue;
        LChannel ch;
        ch.core = std::move(core);
        ch.ambient = g2;
        ch.a = a;
        ch.b = b;
        ch.L = L;
        out.push_back(std::move(ch));
      }
    }
  }
  return out;
}

}  // namespace

ChannelScan measure_kappa(const SimpleGraph& g, const PreferredGeodesicFamily& fam,
                          const ConstantProfile& profile, long long L,
                          std::uint64_t seed, int sample_size) {
  if (L < 1) throw InputError("channels: L must be >= 1");
  std::vector<std::pair<VertexId, VertexId>> candidates;
  for (VertexId a : g.vertices())
    for (VertexId b : g.vertices())
      if (a <= b && g.distance(a, b) <= 3 * L) candidates.push_back({a, b});

  ChannelScan scan;
  std::vector<std::pair<VertexId, VertexId>> picked;
  if (g.vertex_count() <= 40 ||
      static_cast<long long>(candidates.size()) <= sample_size) {
    picked = candidates;
    scan.sampled_all_pairs = true;
  } else {
    scan.sampled_all_pairs = false;
    std::mt19937_64 rng(seed);
    std::set<size_t> chosen;
    std::uniform_int_distribution<size_t> pick(0, candidates.size() - 1);
    while (static_cast<int>(chosen.size()) < sample_size) chosen.insert(pick(rng));
    for (size_t i : chosen) picked.push_back(candidates[i]);
  }
  scan.pairs_sampled = static_cast<long long>(picked.size());
  for (const auto& [a, b] : picked) {
    auto chans = channels_of_pair(g, fam, profile, a, b, L);
    scan.kappa_measured =
        std::max(scan.kappa_measured, static_cast<long long>(chans.size()));
  }
  return scan;
}

ChannelScan channels(const SimpleGraph& g, const PreferredGeodesicFamily& fam,
                     const ConstantProfile& profile, VertexId a, VertexId b,
                     long long L, std::uint64_t seed) {
  g.require_vertex(a);
  g.require_vertex(b);
  if (L < 1) throw InputError("channels: L must be >= 1");
  if (g.distance(a, b) > 3 * L)
    throw InputError("channels: d(a,b) exceeds 3L; no channels are defined");
  ChannelScan scan = measure_kappa(g, fam, profile, L, seed);
  scan.channels = channels_of_pair(g, fam, profile, a, b, L);
  scan.kappa_measured = std::max(
      scan.kappa_measured, static_cast<long long>(scan.channels.size()));
  return scan;
}

namespace {

// First preferred geodesic whose 2*eps-neighborhood contains the whole path,
// chosen by least worst distance, then family order.
std::optional<PathSeq> certifying_geodesic(const SimpleGraph& g,
                                           const PreferredGeodesicFamily& fam,
                                           const PathSeq& p, long long eps) {
  std::optional<PathSeq> best;
  int best_worst = -1;
  for (const auto& geo : fam.paths(p.front(), p.back())) {
    int worst = 0;
    for (VertexId v : p.verts) {
      int near = g.vertex_count();
      for (VertexId w : geo.verts) near = std::min(near, g.distance(v, w));
      worst = std::max(worst, near);
    }
    if (worst <= 2 * eps && (best_worst < 0 || worst < best_worst)) {
      best_worst = worst;
      best = geo;
    }
  }
  return best;
}

PathSeq concat(const PathSeq& a, const PathSeq& b) {
  if (a.back() != b.front())
    throw InvariantError("path concatenation endpoints disagree");
  PathSeq out = a;
  out.verts.insert(out.verts.end(), b.verts.begin() + 1, b.verts.end());
  return out;
}

}  // namespace

CoarsePiecewiseGeodesic reroute_interior(const SimpleGraph& g,
                                         const PreferredGeodesicFamily& fam,
                                         const ConstantProfile& profile,
                                         const CoarsePiecewiseGeodesic& c, int t) {
  g.require_path(c.path);
  c.subdivision.validate(c.path.length());
  if (t < 0 || t > c.path.length())
    throw InputError("reroute_interior: position out of path range");

  int seg = -1;
  for (int i = 0; i < c.subdivision.segments(); ++i)
    if (c.subdivision.seg_begin(i) <= t && t <= c.subdivision.seg_end(i)) { seg = i; break; }
  if (seg < 0)
    throw InputError("reroute_interior: position lies in a bridge, not on a "
                     "sub-local geodesic");
  const int cb = c.subdivision.seg_begin(seg);
  const long long along = t - cb;
  if (along < c.l + 2 * profile.epsilon)
    throw InputError("reroute_interior: distance along the sub-local geodesic is " +
                     std::to_string(along) + ", needs at least l + 2*epsilon = " +
                     std::to_string(c.l + 2 * profile.epsilon));

  auto geo = certifying_geodesic(g, fam, c.path, profile.epsilon);
  if (!geo)
    throw InputError("reroute_interior: input is outside the 2*epsilon-"
                     "neighborhood of every preferred geodesic");

  const VertexId s = c.path.verts[t];
  int spp_pos = 0;
  {
    int best = g.vertex_count() + 1;
    for (int k = 0; k <= geo->length(); ++k) {
      int d = g.distance(s, geo->verts[k]);
      if (d < best) { best = d; spp_pos = k; }
    }
  }
  const VertexId spp = geo->verts[spp_pos];
  int tp = cb;
  {
    int best = g.vertex_count() + 1;
    for (int k = cb; k <= c.subdivision.seg_end(seg); ++k) {
      int d = g.distance(c.path.verts[k], spp);
      if (d < best) { best = d; tp = k; }
    }
  }
  const VertexId sp = c.path.verts[tp];

  PathSeq out = c.path.sub(0, tp);
  if (sp != spp) out = concat(out, g.all_geodesics(sp, spp, 1 << 20).front());
  const int bridge_end = out.length();
  if (spp_pos < geo->length())
    out = concat(out, geo->sub(spp_pos, geo->length()));

  CoarsePiecewiseGeodesic res;
  res.path = out;
  res.l = c.l;
  for (int i = 0; i < seg; ++i) {
    res.subdivision.breaks.push_back(c.subdivision.seg_begin(i));
    res.subdivision.breaks.push_back(c.subdivision.seg_end(i));
  }
  res.subdivision.breaks.push_back(cb);
  res.subdivision.breaks.push_back(tp);
  res.subdivision.breaks.push_back(bridge_end);
  res.subdivision.breaks.push_back(out.length());
  res.subdivision.validate(res.path.length());
  return res;
}

CoarsePiecewiseGeodesic reroute_to_new_endpoint(const SimpleGraph& g,
                                                const PreferredGeodesicFamily& fam,
                                                const ConstantProfile& profile,
                                                const CoarsePiecewiseGeodesic& c,
                                                VertexId z) {
  g.require_path(c.path);
  g.require_vertex(z);
  c.subdivision.validate(c.path.length());
  const int last = c.subdivision.segments() - 1;
  const long long last_len =
      c.subdivision.seg_end(last) - c.subdivision.seg_begin(last);
  if (last_len < c.l + 2 * profile.mu)
    throw InputError("reroute_to_new_endpoint: last sub-local geodesic has "
                     "length " + std::to_string(last_len) +
                     ", needs at least l + 2*mu = " +
                     std::to_string(c.l + 2 * profile.mu));

  const VertexId fb = c.path.back();
  std::optional<PathSeq> h;
  int hit_pos = -1;
  for (const auto& cand : fam.paths(c.path.front(), z)) {
    for (int k = 0; k <= cand.length(); ++k) {
      if (g.distance(fb, cand.verts[k]) <= profile.delta) {
        h = cand;
        hit_pos = k;
        break;
      }
    }
    if (h) break;
  }
  if (!h)
    throw InputError("reroute_to_new_endpoint: no preferred geodesic from '" +
                     g.name(c.path.front()) + "' to '" + g.name(z) +
                     "' passes within delta of '" + g.name(fb) + "'");

  PathSeq out = c.path;
  const VertexId wb = h->verts[hit_pos];
  if (wb != fb) out = concat(out, g.all_geodesics(fb, wb, 1 << 20).front());
  const int bridge_end = out.length();
  if (hit_pos < h->length()) out = concat(out, h->sub(hit_pos, h->length()));

  CoarsePiecewiseGeodesic res;
  res.path = out;
  res.l = c.l;
  res.subdivision.breaks = c.subdivision.breaks;
  res.subdivision.breaks.push_back(bridge_end);
  res.subdivision.breaks.push_back(out.length());
  res.subdivision.validate(res.path.length());
  return res;
}

}  // namespace hypcyl
