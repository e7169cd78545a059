#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hypcyl/budget.hpp"
#include "hypcyl/graph.hpp"

namespace hypcyl {

enum class ProfileMode { theory, experiment };

// Every numeric constant driving the geometry, in one immutable bundle.
// Theory mode evaluates the closed-form expressions exactly (the values grow
// fast, so they exist for formula audits and reports, never for driving
// searches). Experiment mode takes small user constants, mutually
// unconstrained, and every report echoes them verbatim.
struct ConstantProfile {
  long long delta = 0;
  long long lambda = 0;
  long long epsilon = 0;
  long long mu = 0;
  long long nu = 0;
  long long l = 0;
  long long neighbor_threshold = 0;  // the slicing radius; 100*delta in theory mode
  ProfileMode mode = ProfileMode::experiment;
  long long budget = 1000000;  // global search cap

  bool degenerate() const { return lambda == 0 || mu == 0 || l == 0; }
  BudgetMeter meter(const std::string& label) const { return BudgetMeter(budget, label); }
};

// Finiteness constants measured on a concrete graph, plus the psi value they
// induce. `n` records which argument psi_of_n was computed for.
struct MeasuredBounds {
  long long kappa_mu = 0;
  long long K0 = 0;
  long long K1 = 0;
  long long k1 = 0;
  long long n = 0;
  long long psi_of_n = 0;
};

// Checked 64-bit arithmetic; overflow throws ArithmeticError.
long long checked_add(long long a, long long b);
long long checked_mul(long long a, long long b);

// lambda = 1000*delta, mu = (100*epsilon + lambda^2)*40*lambda,
// nu = 40*lambda*(epsilon + 100*lambda*delta), threshold = 100*delta.
ConstantProfile theory_profile(long long delta, long long epsilon);

// Experiment-mode constructor with validation (delta and threshold may be 0;
// lambda must be at least 2 so geodesics qualify as lambda/2-quasi-geodesics;
// the remaining fields must be positive).
ConstantProfile experiment_profile(long long delta, long long lambda,
                                   long long epsilon, long long mu, long long nu,
                                   long long l, long long neighbor_threshold,
                                   long long budget = 1000000);

void validate_profile(const ConstantProfile& p);

// psi(n) = 24*(n+1)*kappa_mu*(2*epsilon+1)*epsilon
long long psi(long long n, long long kappa_mu, long long epsilon);

// Candidate cylinder parameters l_i = 10*mu + 2*i*epsilon,
// i = 1 .. psi_n / (2*epsilon), ascending.
std::vector<long long> l_candidates(const ConstantProfile& profile, long long psi_n);

// Displacement bound for vertex generators. Theory form
// T*(20*psi_T*1000*delta + 200*delta); the experiment form replaces 1000*delta
// by 10*threshold and 200*delta by 2*threshold.
long long d0_bound(long long triangles, long long psi_T, const ConstantProfile& p);

// Slice bounds in the profile's units: diameter <= 2*threshold, consecutive
// slice gap <= 10*threshold.
long long slice_diameter_bound(const ConstantProfile& p);
long long slice_gap_bound(const ConstantProfile& p);

// Least epsilon such that every lambda-quasi-geodesic path stays epsilon-close
// to every geodesic joining its endpoints. Exhaustive over paths, budgeted;
// on exhaustion the BudgetError carries the best lower bound found.
long long morse_epsilon(const SimpleGraph& g, long long lambda, BudgetMeter& meter);

// Profile file format: one `key = value` line per field, fixed key order, so
// profiles diff cleanly. parse(serialize(p)) == p.
ConstantProfile parse_profile(std::istream& in, const std::string& source = "<profile>");
ConstantProfile parse_profile_file(const std::string& path);
std::string serialize_profile(const ConstantProfile& p);

}  // namespace hypcyl
