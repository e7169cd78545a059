#include "hypcyl/slicing.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace hypcyl {

namespace {

void require_member(const SimpleGraph& g, const CylinderSet& cyl, VertexId v) {
  if (!cyl.contains(v))
    throw InputError("vertex '" + g.name(v) + "' is not a member of Cyl(" +
                     g.name(cyl.x) + "," + g.name(cyl.y) + ")");
}

void require_anchors(const SimpleGraph& g, const CylinderSet& cyl, VertexId a,
                     VertexId b) {
  const bool same = (a == cyl.x && b == cyl.y) || (a == cyl.y && b == cyl.x);
  if (!same)
    throw InputError("anchors (" + g.name(a) + "," + g.name(b) +
                     ") do not match the cylinder (" + g.name(cyl.x) + "," +
                     g.name(cyl.y) + ")");
}

}  // namespace

NeighborSets neighbor_sets(const SimpleGraph& g, const CylinderSet& cyl,
                           const ConstantProfile& profile, VertexId a,
                           VertexId b, VertexId x) {
  require_anchors(g, cyl, a, b);
  require_member(g, cyl, x);
  NeighborSets out;
  out.anchor_a = a;
  out.anchor_b = b;
  out.center = x;
  const long long thr = profile.neighbor_threshold;
  const int ax = g.distance(a, x);
  for (VertexId v : cyl.members) {
    if (g.distance(x, v) <= thr) continue;
    const int av = g.distance(a, v);
    if (av > ax) out.right.push_back(v);
    else if (av < ax) out.left.push_back(v);
  }
  return out;
}

long long diff(const SimpleGraph& g, VertexId a, VertexId b, VertexId x,
               VertexId y, const CylinderSet& cyl, const ConstantProfile& profile) {
  NeighborSets nx = neighbor_sets(g, cyl, profile, a, b, x);
  NeighborSets ny = neighbor_sets(g, cyl, profile, a, b, y);
  auto minus = [](const std::vector<VertexId>& A, const std::vector<VertexId>& B) {
    long long n = 0;
    for (VertexId v : A)
      if (!std::binary_search(B.begin(), B.end(), v)) ++n;
    return n;
  };
  return minus(nx.left, ny.left) - minus(ny.left, nx.left) +
         minus(ny.right, nx.right) - minus(nx.right, ny.right);
}

int SlicePartition::index_of(VertexId v) const {
  for (size_t i = 0; i < slices.size(); ++i)
    if (std::binary_search(slices[i].members.begin(), slices[i].members.end(), v))
      return static_cast<int>(i);
  return -1;
}

SlicePartition SlicePartition::reversed() const {
  SlicePartition out;
  out.from = to;
  out.to = from;
  out.slices.assign(slices.rbegin(), slices.rend());
  for (size_t i = 0; i < out.slices.size(); ++i)
    out.slices[i].rank = static_cast<int>(i);
  return out;
}

SlicePartition slice_partition(const SimpleGraph& g, const CylinderSet& cyl,
                               const ConstantProfile& profile, VertexId from) {
  if (from != cyl.x && from != cyl.y)
    throw InputError("slice_partition: orientation vertex must be an anchor");
  const VertexId a = from;
  const VertexId b = (from == cyl.x) ? cyl.y : cyl.x;

  // Group members into Diff-classes against one representative each.
  std::vector<std::vector<VertexId>> classes;
  std::vector<VertexId> reps;
  for (VertexId v : cyl.members) {
    bool placed = false;
    for (size_t i = 0; i < reps.size(); ++i) {
      if (diff(g, a, b, v, reps[i], cyl, profile) == 0) {
        classes[i].push_back(v);
        placed = true;
        break;
      }
    }
    if (!placed) {
      reps.push_back(v);
      classes.push_back({v});
    }
  }

  // Total order by the sign of Diff between representatives; the trichotomy
  // check guards against a cylinder computed under a different profile.
  std::vector<size_t> order(reps.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
    if (i == j) return false;
    return diff(g, a, b, reps[i], reps[j], cyl, profile) < 0;
  });
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    const long long d01 = diff(g, a, b, reps[order[i]], reps[order[i + 1]], cyl, profile);
    if (d01 >= 0)
      throw InvariantError("slice order is not a strict total order (profile/"
                           "cylinder mismatch?)");
  }

  SlicePartition part;
  part.from = a;
  part.to = b;
  for (size_t i = 0; i < order.size(); ++i) {
    Slice s;
    s.rank = static_cast<int>(i);
    s.members = classes[order[i]];
    std::sort(s.members.begin(), s.members.end());
    part.slices.push_back(std::move(s));
  }
  return part;
}

std::string slice_report(const SimpleGraph& g, const SlicePartition& p) {
  std::ostringstream out;
  out << "slices " << g.name(p.from) << " -> " << g.name(p.to) << "\n";
  for (const auto& s : p.slices) {
    out << "slice " << s.rank << " :";
    for (VertexId v : s.members) out << " " << g.name(v);
    out << "\n";
  }
  return out.str();
}

long long slice_diameter(const SimpleGraph& g, const Slice& s) {
  long long best = 0;
  for (VertexId u : s.members)
    for (VertexId v : s.members)
      best = std::max<long long>(best, g.distance(u, v));
  return best;
}

long long consecutive_slice_gap(const SimpleGraph& g, const SlicePartition& p) {
  if (p.slices.size() < 2)
    throw InputError("consecutive_slice_gap needs at least two slices");
  long long best = 0;
  for (size_t i = 0; i + 1 < p.slices.size(); ++i)
    for (VertexId u : p.slices[i].members)
      for (VertexId v : p.slices[i + 1].members)
        best = std::max<long long>(best, g.distance(u, v));
  return best;
}

long long gromov_product(const SimpleGraph& g, VertexId x, VertexId y, VertexId z) {
  return (g.distance(x, y) + g.distance(x, z) - g.distance(y, z)) / 2;
}

namespace {

// Cache cylinders across candidates and triangles; anchors repeat heavily.
struct CylinderCache {
  const SimpleGraph& g;
  const PreferredGeodesicFamily& fam;
  const ConstantProfile& profile;
  std::map<std::tuple<VertexId, VertexId, long long>, CylinderSet> store;

  const CylinderSet& get(VertexId a, VertexId b, long long l) {
    auto key = std::make_tuple(a, b, l);
    auto it = store.find(key);
    if (it == store.end())
      it = store.emplace(key, cylinder(g, fam, profile, a, b, l)).first;
    return it->second;
  }
};

std::vector<VertexId> ball_members(const SimpleGraph& g, const CylinderSet& cyl,
                                   VertexId center, long long radius) {
  std::vector<VertexId> out;
  if (radius < 0) return out;
  for (VertexId v : cyl.members)
    if (g.distance(center, v) <= radius) out.push_back(v);
  return out;
}

}  // namespace

std::string GoodLSearchResult::to_text(const SimpleGraph& g) const {
  std::ostringstream out;
  if (found) {
    out << "goodl l=" << found->l << " n=" << found->n << " psi_n=" << found->psi_n
        << " candidates=" << candidates.size() << "\n";
    for (const auto& a : found->audits) {
      out << "inclusion x=" << g.name(a.x) << " y=" << g.name(a.y)
          << " z=" << g.name(a.z) << " R=" << a.radius << " forward="
          << (a.forward_ok ? "pass" : "fail") << " backward="
          << (a.backward_ok ? "pass" : "fail") << "\n";
    }
  } else {
    out << "goodl FAILED candidates=" << candidates.size() << "\n";
    for (const auto& f : failures)
      out << "candidate l=" << f.l << " first_failure: " << f.first_failure << "\n";
  }
  return out.str();
}

GoodLSearchResult good_l_search(const SimpleGraph& g,
                                const PreferredGeodesicFamily& fam,
                                const ConstantProfile& profile,
                                const std::vector<GraphAutomorphism>& F,
                                VertexId p, const MeasuredBounds& bounds) {
  if (F.empty()) throw InputError("good_l_search: family F is empty");
  g.require_vertex(p);
  const long long n = checked_mul(checked_mul(2 * (long long)F.size(),
                                              2 * (long long)F.size()),
                                  2 * (long long)F.size());
  const long long psi_n = psi(n, bounds.kappa_mu, profile.epsilon);

  GoodLSearchResult result;
  result.candidates = l_candidates(profile, psi_n);

  // Triangles (p, alpha p, gamma^-1 p) over alpha beta gamma = 1.
  std::vector<GraphAutomorphism> pool;
  for (const auto& f : F) pool.push_back(f);
  for (const auto& f : F) pool.push_back(f.inverse());
  std::vector<std::pair<VertexId, VertexId>> corners;  // (y, z) per triangle
  std::set<std::pair<VertexId, VertexId>> seen;
  for (const auto& alpha : pool)
    for (const auto& beta : pool)
      for (const auto& gamma : pool) {
        if (!alpha.compose(beta).compose(gamma).is_identity()) continue;
        VertexId yy = alpha.apply(p);
        VertexId zz = gamma.apply_inverse(p);
        if (seen.insert({yy, zz}).second) corners.push_back({yy, zz});
      }

  CylinderCache cache{g, fam, profile, {}};
  const long long offset = checked_mul(5, checked_add(checked_mul(13, profile.mu), psi_n));

  auto audit_corner = [&](VertexId cx, VertexId cy, VertexId cz, long long l,
                          InclusionAudit& audit) {
    audit.x = cx;
    audit.y = cy;
    audit.z = cz;
    audit.radius = gromov_product(g, cx, cy, cz) - offset;
    const auto& cxy = cache.get(cx, cy, l);
    const auto& cxz = cache.get(cx, cz, l);
    auto inside_xy = ball_members(g, cxy, cx, audit.radius);
    auto inside_xz = ball_members(g, cxz, cx, audit.radius);
    audit.forward_ok = std::includes(inside_xz.begin(), inside_xz.end(),
                                     inside_xy.begin(), inside_xy.end());
    audit.backward_ok = std::includes(inside_xy.begin(), inside_xy.end(),
                                      inside_xz.begin(), inside_xz.end());
  };

  for (long long l : result.candidates) {
    std::vector<InclusionAudit> audits;
    std::optional<CandidateFailure> failure;
    for (const auto& [yy, zz] : corners) {
      std::array<std::array<VertexId, 3>, 3> rotations = {{
          {p, yy, zz}, {yy, zz, p}, {zz, p, yy}}};
      for (const auto& rot : rotations) {
        InclusionAudit audit;
        audit_corner(rot[0], rot[1], rot[2], l, audit);
        audits.push_back(audit);
        if (!audit.forward_ok || !audit.backward_ok) {
          std::ostringstream msg;
          msg << "corner " << g.name(rot[0]) << " of (" << g.name(rot[0]) << ","
              << g.name(rot[1]) << "," << g.name(rot[2]) << ") R=" << audit.radius
              << (audit.forward_ok ? " backward" : " forward") << " inclusion fails";
          failure = CandidateFailure{l, msg.str()};
          break;
        }
      }
      if (failure) break;
    }
    if (!failure) {
      GoodL good;
      good.l = l;
      good.n = n;
      good.psi_n = psi_n;
      good.audits = std::move(audits);
      result.found = std::move(good);
      return result;
    }
    result.failures.push_back(*failure);
  }
  return result;
}

namespace {

bool same_members(const Slice& a, const Slice& b) { return a.members == b.members; }

int prefix_match(const SlicePartition& p, const SlicePartition& q) {
  int k = 0;
  while (k < static_cast<int>(p.slices.size()) &&
         k < static_cast<int>(q.slices.size()) &&
         same_members(p.slices[k], q.slices[k]))
    ++k;
  return k;
}

std::vector<Slice> slice_range(const SlicePartition& p, int from, int count) {
  std::vector<Slice> out;
  for (int i = 0; i < count; ++i) out.push_back(p.slices[from + i]);
  return out;
}

}  // namespace

std::string TriangleDecomposition::to_text(const SimpleGraph& g) const {
  std::ostringstream out;
  out << "decomp x=" << g.name(x) << " y=" << g.name(y) << " z=" << g.name(z)
      << " l=" << l << "\n";
  auto row = [&](const char* tag, const std::vector<Slice>& run) {
    out << tag << " :";
    for (const auto& s : run) {
      out << " {";
      for (size_t i = 0; i < s.members.size(); ++i)
        out << (i ? "," : "") << g.name(s.members[i]);
      out << "}";
    }
    out << "\n";
  };
  row("S", shared_S);
  row("T", shared_T);
  row("V", shared_V);
  row("H_z", hole_z);
  row("H_y", hole_y);
  row("H_x", hole_x);
  out << "row xy : S(" << shared_S.size() << ") H_z(" << hole_z.size() << ") T("
      << shared_T.size() << ")\n";
  out << "row xz : S(" << shared_S.size() << ") H_y(" << hole_y.size() << ") V("
      << shared_V.size() << ")\n";
  out << "row yz : T(" << shared_T.size() << ") H_x(" << hole_x.size() << ") V("
      << shared_V.size() << ")\n";
  out << "bloc_iv = " << (bloc_iv_pass ? "pass" : "fail") << "\n";
  for (const auto& n : notes) out << "note: " << n << "\n";
  return out.str();
}

TriangleDecomposition triangle_decomposition(const SimpleGraph& g,
                                             const PreferredGeodesicFamily& fam,
                                             const ConstantProfile& profile,
                                             VertexId x, VertexId y, VertexId z,
                                             long long l, long long psi_n) {
  TriangleDecomposition dec;
  dec.x = x;
  dec.y = y;
  dec.z = z;
  dec.l = l;

  if (x == y && y == z) {
    dec.degenerate = true;
    CylinderSet cxx = cylinder(g, fam, profile, x, x, l);
    dec.xy = slice_partition(g, cxx, profile, x);
    dec.xz = dec.xy;
    dec.yz = dec.xy;
    return dec;
  }

  CylinderSet cxy = cylinder(g, fam, profile, x, y, l);
  CylinderSet cxz = cylinder(g, fam, profile, x, z, l);
  CylinderSet cyz = cylinder(g, fam, profile, y, z, l);
  dec.xy = slice_partition(g, cxy, profile, x);
  dec.xz = slice_partition(g, cxz, profile, x);
  dec.yz = slice_partition(g, cyz, profile, y);

  const int sxy = static_cast<int>(dec.xy.slices.size());
  const int sxz = static_cast<int>(dec.xz.slices.size());
  const int syz = static_cast<int>(dec.yz.slices.size());

  const int k_raw = prefix_match(dec.xy, dec.xz);
  const int m_raw = prefix_match(dec.xy.reversed(), dec.yz);
  const int p_raw = prefix_match(dec.xz.reversed(), dec.yz.reversed());

  // Slices shared by all three cylinders may land in several raw runs; trim
  // so each cylinder splits cleanly into prefix, hole, suffix.
  const int k = std::max(0, std::min({k_raw, sxy - m_raw, sxz - p_raw}));
  const int m = std::max(0, std::min({m_raw, sxy - k_raw, syz - p_raw}));
  const int p = std::max(0, std::min({p_raw, sxz - k_raw, syz - m_raw}));

  dec.shared_S = slice_range(dec.xy, 0, k);
  dec.shared_T = slice_range(dec.yz, 0, m);
  dec.shared_V = slice_range(dec.yz.reversed(), 0, p);
  dec.hole_z = slice_range(dec.xy, k, sxy - k - m);
  dec.hole_y = slice_range(dec.xz, k, sxz - k - p);
  dec.hole_x = slice_range(dec.yz, m, syz - m - p);

  const bool distinct = (x != y && y != z && x != z);
  const long long hole_bound = checked_mul(10, psi_n);
  if (distinct) {
    for (const auto* hole : {&dec.hole_x, &dec.hole_y, &dec.hole_z}) {
      if (static_cast<long long>(hole->size()) > hole_bound)
        throw InvariantError("triangle decomposition hole has " +
                             std::to_string(hole->size()) + " slices, above 10*psi(n) = " +
                             std::to_string(hole_bound) + " (l is not good for this family)");
    }
  }

  // Ball-restricted slice transfer: slices deep inside the shared ball of one
  // cylinder must be slices of the other.
  const long long offset = checked_mul(5, checked_add(checked_mul(13, profile.mu), psi_n));
  struct CornerView {
    VertexId a;
    const SlicePartition* pab;
    const SlicePartition* pac;
    VertexId bb, cc;
  };
  SlicePartition yx = dec.xy.reversed();
  SlicePartition zx = dec.xz.reversed();
  SlicePartition zy = dec.yz.reversed();
  std::vector<CornerView> views = {
      {x, &dec.xy, &dec.xz, y, z}, {y, &yx, &dec.yz, x, z}, {z, &zx, &zy, x, y}};
  for (const auto& view : views) {
    const long long R = gromov_product(g, view.a, view.bb, view.cc) - offset;
    const long long inner = R - slice_diameter_bound(profile);
    for (const auto& s : view.pab->slices) {
      bool inside = true;
      for (VertexId v : s.members)
        if (g.distance(view.a, v) > inner) { inside = false; break; }
      if (!inside || inner < 0) continue;
      bool found = false;
      for (const auto& t : view.pac->slices)
        if (same_members(s, t)) { found = true; break; }
      if (!found) {
        dec.bloc_iv_pass = false;
        dec.notes.push_back("slice of Cyl(" + g.name(view.a) + "," + g.name(view.bb) +
                            ") inside the shared ball is not a slice of Cyl(" +
                            g.name(view.a) + "," + g.name(view.cc) + ")");
      }
    }
  }
  return dec;
}

}  // namespace hypcyl
