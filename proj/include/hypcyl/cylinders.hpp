#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hypcyl/constants.hpp"
#include "hypcyl/family.hpp"
#include "hypcyl/graph.hpp"

namespace hypcyl {

// Breakpoints a = c1 <= d1 <= c2 <= ... <= dn = b into a path, stored flat as
// [c1, d1, c2, d2, ...]. Segments [ci, di] are the sub-local geodesics,
// gaps [di, c(i+1)] the bridges.
struct Subdivision {
  std::vector<int> breaks;

  int segments() const { return static_cast<int>(breaks.size()) / 2; }
  int seg_begin(int i) const { return breaks[2 * i]; }
  int seg_end(int i) const { return breaks[2 * i + 1]; }
  void validate(int path_length) const;  // monotone, spans [0, path_length]
};

// A candidate coarse piecewise geodesic: the path, its subdivision and the
// parameter l it was built for. Whether it actually satisfies every clause of
// the definition is what validate_cptg reports.
struct CoarsePiecewiseGeodesic {
  PathSeq path;
  Subdivision subdivision;
  long long l = 0;
};

CoarsePiecewiseGeodesic trivial_cptg(const PathSeq& geodesic, long long l);

// Bi-Lipschitz path predicates. The rational version checks the parameter
// num/den exactly in integers; the plain one is the integer-lambda case.
bool is_quasi_geodesic_rational(const SimpleGraph& g, const PathSeq& p,
                                long long num, long long den);
bool is_quasi_geodesic(const SimpleGraph& g, const PathSeq& p, long long lambda);
bool is_local_quasi_geodesic_rational(const SimpleGraph& g, const PathSeq& p,
                                      long long nu, long long num, long long den);
bool is_local_quasi_geodesic(const SimpleGraph& g, const PathSeq& p,
                             long long nu, long long lambda);

// Every subpath of length min(mu, length) lies in the family.
bool is_local_preferred_geodesic(const PreferredGeodesicFamily& fam,
                                 const PathSeq& p, long long mu);

// Clause-by-clause check of the coarse-piecewise-geodesic definition.
struct CptgReport {
  bool structure_ok = true;          // breakpoints well formed
  bool local_quasi_geodesic = true;  // nu-local lambda/2
  bool segments_preferred = true;    // each segment mu-locally preferred
  bool bridges_ok = true;            // every bridge <= epsilon
  bool interior_lengths_ok = true;   // interior segments >= l
  bool neighborhood_ok = true;       // inside 2*epsilon of a preferred geodesic
  std::vector<std::string> failures;

  bool pass() const {
    return structure_ok && local_quasi_geodesic && segments_preferred &&
           bridges_ok && interior_lengths_ok && neighborhood_ok;
  }
  std::string to_text() const;
};

CptgReport validate_cptg(const CoarsePiecewiseGeodesic& c,
                         const PreferredGeodesicFamily& fam,
                         const ConstantProfile& profile);

// The set of vertices lying suitably deep on some l-cptg between the anchors,
// with one witness per member (lexicographically least path, then least
// subdivision). Witnesses are informational; membership is the contract.
struct CylinderSet {
  VertexId x, y;
  long long l = 0;
  std::vector<VertexId> members;  // sorted by id
  std::map<VertexId, CoarsePiecewiseGeodesic> witnesses;

  bool contains(VertexId v) const;
};

CylinderSet cylinder(const SimpleGraph& g, const PreferredGeodesicFamily& fam,
                     const ConstantProfile& profile, VertexId x, VertexId y,
                     long long l);
CylinderSet cylinder(const SimpleGraph& g, const PreferredGeodesicFamily& fam,
                     const ConstantProfile& profile, VertexId x, VertexId y);

std::string cylinder_report(const SimpleGraph& g, const CylinderSet& cyl);

// Middle third (core) of a length-3L preferred geodesic (ambient) nearly
// joining the anchors.
struct LChannel {
  PathSeq core;
  PathSeq ambient;
  VertexId a, b;
  long long L = 0;
};

struct ChannelScan {
  std::vector<LChannel> channels;  // per the queried anchors, core-deduplicated
  long long kappa_measured = 0;    // max channel count over the sampled pairs
  bool sampled_all_pairs = true;
  long long pairs_sampled = 0;
};

ChannelScan channels(const SimpleGraph& g, const PreferredGeodesicFamily& fam,
                     const ConstantProfile& profile, VertexId a, VertexId b,
                     long long L, std::uint64_t seed = 0);

// Measured kappa(L): max channel count over anchor pairs at distance <= 3L.
// All pairs when the graph is small, a seeded sample otherwise.
ChannelScan measure_kappa(const SimpleGraph& g, const PreferredGeodesicFamily& fam,
                          const ConstantProfile& profile, long long L,
                          std::uint64_t seed = 0, int sample_size = 64);

// Rerouting along a certifying geodesic: the output keeps the input up to a
// point on the sub-local geodesic through position t, then follows a
// preferred geodesic between the original endpoints.
CoarsePiecewiseGeodesic reroute_interior(const SimpleGraph& g,
                                         const PreferredGeodesicFamily& fam,
                                         const ConstantProfile& profile,
                                         const CoarsePiecewiseGeodesic& c, int t);

// Retargets the endpoint to z, given a preferred geodesic [start, z] passing
// within delta of the old endpoint; coincides with the input until then.
CoarsePiecewiseGeodesic reroute_to_new_endpoint(const SimpleGraph& g,
                                                const PreferredGeodesicFamily& fam,
                                                const ConstantProfile& profile,
                                                const CoarsePiecewiseGeodesic& c,
                                                VertexId z);

}  // namespace hypcyl
