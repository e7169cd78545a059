#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hypcyl/graph.hpp"

namespace hypcyl {

// Stand-in for the distinguished geodesic class: for every ordered vertex
// pair it provides a nonempty, deterministically ordered set of geodesics.
// All implementations are immutable and safe to share across threads.
class PreferredGeodesicFamily {
public:
  virtual ~PreferredGeodesicFamily() = default;

  virtual const SimpleGraph& graph() const = 0;
  virtual std::vector<PathSeq> paths(VertexId a, VertexId b) const = 0;
  virtual bool contains(const PathSeq& p) const = 0;

  bool subpath_closed_flag() const { return subpath_closed_; }
  bool reversal_closed_flag() const { return reversal_closed_; }

protected:
  bool subpath_closed_ = true;
  bool reversal_closed_ = true;
};

// Default family: every geodesic is preferred. Valid in locally finite
// graphs; subpath- and reversal-closed by construction.
class AllGeodesicsFamily final : public PreferredGeodesicFamily {
public:
  AllGeodesicsFamily(const SimpleGraph& g, long long cap = 1 << 20);

  const SimpleGraph& graph() const override { return *g_; }
  std::vector<PathSeq> paths(VertexId a, VertexId b) const override;
  bool contains(const PathSeq& p) const override;

private:
  const SimpleGraph* g_;
  long long cap_;
};

// Family given by an explicit table, keyed by unordered pair. Used to model
// deliberately broken families in diagnostics and tests.
class ExplicitGeodesicFamily final : public PreferredGeodesicFamily {
public:
  ExplicitGeodesicFamily(const SimpleGraph& g,
                         std::vector<PathSeq> paths,
                         bool claim_subpath_closed,
                         bool claim_reversal_closed);

  const SimpleGraph& graph() const override { return *g_; }
  std::vector<PathSeq> paths(VertexId a, VertexId b) const override;
  bool contains(const PathSeq& p) const override;

private:
  const SimpleGraph* g_;
  std::map<std::pair<VertexId, VertexId>, std::vector<PathSeq>> table_;
};

// Measured analogues of the finiteness axioms the machinery relies on.
struct AxiomReport {
  long long L = 0;
  long long epsilon = 0;
  // max, over pairs (a,b) and c on a preferred geodesic [a,b], of preferred
  // [a,b]-geodesic vertices within L + 2*epsilon of c
  long long K0_measured = 0;
  // max, over the same c with d(a,c), d(b,c) >= r + k1, of vertices within
  // 2*epsilon of c on preferred geodesics between points r-close to a and b
  long long K1_measured = 0;
  long long k1_used = 1;
  long long r_max = 2;
  bool subpath_closure_pass = true;
  std::vector<std::string> subpath_failures;  // first few, formatted
  long long pairs_checked = 0;

  std::string to_text() const;
};

AxiomReport verify_family_axioms(const PreferredGeodesicFamily& fam,
                                 const SimpleGraph& g, long long L,
                                 long long epsilon);

}  // namespace hypcyl
