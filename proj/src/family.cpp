#include "hypcyl/family.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hypcyl {

AllGeodesicsFamily::AllGeodesicsFamily(const SimpleGraph& g, long long cap)
    : g_(&g), cap_(cap) {
  if (!g.connected()) throw InputError("geodesic family requires a connected graph");
}

std::vector<PathSeq> AllGeodesicsFamily::paths(VertexId a, VertexId b) const {
  return g_->all_geodesics(a, b, cap_);
}

bool AllGeodesicsFamily::contains(const PathSeq& p) const {
  if (!g_->is_valid_path(p)) return false;
  return p.length() == g_->distance(p.front(), p.back());
}

ExplicitGeodesicFamily::ExplicitGeodesicFamily(const SimpleGraph& g,
                                               std::vector<PathSeq> paths,
                                               bool claim_subpath_closed,
                                               bool claim_reversal_closed)
    : g_(&g) {
  subpath_closed_ = claim_subpath_closed;
  reversal_closed_ = claim_reversal_closed;
  for (auto& p : paths) {
    g.require_path(p);
    if (p.length() != g.distance(p.front(), p.back()))
      throw InputError("family path from '" + g.name(p.front()) + "' to '" +
                       g.name(p.back()) + "' is not a geodesic");
    const VertexId lo = std::min(p.front(), p.back());
    const VertexId hi = std::max(p.front(), p.back());
    table_[{lo, hi}].push_back(std::move(p));
  }
  for (auto& [key, list] : table_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

std::vector<PathSeq> ExplicitGeodesicFamily::paths(VertexId a, VertexId b) const {
  if (a == b) {
    PathSeq triv;
    triv.verts = {a};
    return {triv};
  }
  auto it = table_.find({std::min(a, b), std::max(a, b)});
  std::vector<PathSeq> out;
  if (it != table_.end()) {
    for (const auto& p : it->second) {
      if (p.front() == a && p.back() == b) out.push_back(p);
      else if (reversal_closed_) out.push_back(p.reversed());
    }
    std::sort(out.begin(), out.end());
  }
  if (out.empty())
    throw InputError("family has no path from '" + g_->name(a) + "' to '" +
                     g_->name(b) + "'");
  return out;
}

bool ExplicitGeodesicFamily::contains(const PathSeq& p) const {
  if (p.verts.empty()) return false;
  if (p.length() == 0) return true;  // trivial paths are always preferred
  auto it = table_.find({std::min(p.front(), p.back()), std::max(p.front(), p.back())});
  if (it == table_.end()) return false;
  for (const auto& q : it->second) {
    if (q == p) return true;
    if (reversal_closed_ && q.reversed() == p) return true;
  }
  return false;
}

std::string AxiomReport::to_text() const {
  std::ostringstream out;
  out << "axioms L=" << L << " epsilon=" << epsilon << "\n"
      << "K0_measured = " << K0_measured << "\n"
      << "K1_measured = " << K1_measured << " (k1=" << k1_used << ", r<=" << r_max << ")\n"
      << "subpath_closure = " << (subpath_closure_pass ? "pass" : "fail") << "\n";
  for (const auto& f : subpath_failures) out << "subpath_violation " << f << "\n";
  out << "pairs_checked = " << pairs_checked << "\n";
  return out.str();
}

AxiomReport verify_family_axioms(const PreferredGeodesicFamily& fam,
                                 const SimpleGraph& g, long long L,
                                 long long epsilon) {
  if (L < 0 || epsilon < 0) throw InputError("verify_family_axioms: L, epsilon >= 0");
  AxiomReport rep;
  rep.L = L;
  rep.epsilon = epsilon;
  const auto verts = g.vertices();

  for (VertexId a : verts) {
    for (VertexId b : verts) {
      if (b < a) continue;
      ++rep.pairs_checked;
      auto geos = fam.paths(a, b);

      std::set<VertexId> on_geos;
      for (const auto& p : geos)
        on_geos.insert(p.verts.begin(), p.verts.end());

      // K0: crowding of preferred-geodesic vertices near a point of one.
      for (VertexId c : on_geos) {
        long long count = 0;
        for (VertexId v : on_geos)
          if (g.distance(c, v) <= L + 2 * epsilon) ++count;
        rep.K0_measured = std::max(rep.K0_measured, count);
      }

      // Subpath closure: every subpath of a preferred geodesic is preferred.
      for (const auto& p : geos) {
        for (int i = 0; i <= p.length(); ++i) {
          for (int j = i; j <= p.length(); ++j) {
            if (!fam.contains(p.sub(i, j))) {
              rep.subpath_closure_pass = false;
              if (rep.subpath_failures.size() < 5) {
                std::ostringstream f;
                f << "[" << g.name(p.verts[i]) << ".." << g.name(p.verts[j])
                  << "] inside a preferred geodesic " << g.name(a) << "-" << g.name(b);
                rep.subpath_failures.push_back(f.str());
              }
            }
          }
        }
      }

      // K1 analogue: fellow-traveling of preferred geodesics between nearby
      // endpoint pairs, measured for small r with a fixed k1.
      for (long long r = 0; r <= rep.r_max; ++r) {
        std::set<VertexId> wide;
        for (VertexId a2 : verts) {
          if (g.distance(a, a2) > r) continue;
          for (VertexId b2 : verts) {
            if (g.distance(b, b2) > r) continue;
            for (const auto& q : fam.paths(a2, b2))
              wide.insert(q.verts.begin(), q.verts.end());
          }
        }
        for (const auto& p : geos) {
          for (VertexId c : p.verts) {
            if (g.distance(a, c) < r + rep.k1_used) continue;
            if (g.distance(b, c) < r + rep.k1_used) continue;
            long long count = 0;
            for (VertexId v : wide)
              if (g.distance(c, v) <= 2 * epsilon) ++count;
            rep.K1_measured = std::max(rep.K1_measured, count);
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace hypcyl
