#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypcyl/cylinders.hpp"

namespace hypcyl {

// Left/right neighbor sets of a cylinder member, relative to the anchor a.
struct NeighborSets {
  VertexId anchor_a, anchor_b, center;
  std::vector<VertexId> left;   // closer to a, beyond the threshold
  std::vector<VertexId> right;  // farther from a, beyond the threshold
};

NeighborSets neighbor_sets(const SimpleGraph& g, const CylinderSet& cyl,
                           const ConstantProfile& profile, VertexId a,
                           VertexId b, VertexId x);

// The four-term signed count. Vanishing is an equivalence relation; its
// classes are the slices.
long long diff(const SimpleGraph& g, VertexId a, VertexId b, VertexId x,
               VertexId y, const CylinderSet& cyl, const ConstantProfile& profile);

struct Slice {
  int rank = 0;                    // ascending with distance from the a-side
  std::vector<VertexId> members;   // sorted
};

struct SlicePartition {
  VertexId from, to;  // orientation: ranks ascend from `from`
  std::vector<Slice> slices;

  int index_of(VertexId v) const;  // slice rank containing v, or -1
  SlicePartition reversed() const;
};

SlicePartition slice_partition(const SimpleGraph& g, const CylinderSet& cyl,
                               const ConstantProfile& profile, VertexId from);

std::string slice_report(const SimpleGraph& g, const SlicePartition& p);

// Max distance between consecutive slices (pairwise, worst case).
long long consecutive_slice_gap(const SimpleGraph& g, const SlicePartition& p);
long long slice_diameter(const SimpleGraph& g, const Slice& s);

// One audited ball-restricted equality of the canonical-cylinders statement.
struct InclusionAudit {
  VertexId x, y, z;   // the triangle, with x the active corner
  long long radius;   // R_{x,y,z}
  bool forward_ok;    // Cyl(x,y) cap B  subset of  Cyl(x,z) cap B
  bool backward_ok;
  std::string detail;
};

struct GoodL {
  long long l = 0;
  long long n = 0;       // (2 #F)^3
  long long psi_n = 0;
  std::vector<InclusionAudit> audits;
};

struct CandidateFailure {
  long long l;
  std::string first_failure;
};

struct GoodLSearchResult {
  std::optional<GoodL> found;
  std::vector<CandidateFailure> failures;  // per rejected candidate
  std::vector<long long> candidates;

  std::string to_text(const SimpleGraph& g) const;
};

// Gromov product (y . z)_x = floor((d(x,y) + d(x,z) - d(y,z)) / 2).
long long gromov_product(const SimpleGraph& g, VertexId x, VertexId y, VertexId z);

// Least candidate l making all ball-restricted cylinder equalities hold over
// every triangle (p, alpha p, gamma^-1 p) with alpha beta gamma = 1 in
// F cup F^-1. Failure is a reported outcome, not an exception.
GoodLSearchResult good_l_search(const SimpleGraph& g,
                                const PreferredGeodesicFamily& fam,
                                const ConstantProfile& profile,
                                const std::vector<GraphAutomorphism>& F,
                                VertexId p, const MeasuredBounds& bounds);

// Ordered slice decomposition of a triangle's three cylinders into shared
// prefix runs S, T, V and three bounded holes.
struct TriangleDecomposition {
  VertexId x, y, z;
  long long l = 0;
  SlicePartition xy, xz, yz;       // oriented from x, x, y respectively
  std::vector<Slice> shared_S, shared_T, shared_V;
  std::vector<Slice> hole_x, hole_y, hole_z;
  bool degenerate = false;         // x == y == z
  bool bloc_iv_pass = true;        // ball-restricted slice transfer check
  std::vector<std::string> notes;

  std::string to_text(const SimpleGraph& g) const;
};

TriangleDecomposition triangle_decomposition(const SimpleGraph& g,
                                             const PreferredGeodesicFamily& fam,
                                             const ConstantProfile& profile,
                                             VertexId x, VertexId y, VertexId z,
                                             long long l, long long psi_n);

}  // namespace hypcyl
