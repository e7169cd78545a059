#include "hypcyl/constants.hpp"

#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace hypcyl {

long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r))
    throw ArithmeticError("integer overflow in " + std::to_string(a) + " + " + std::to_string(b));
  return r;
}

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r))
    throw ArithmeticError("integer overflow in " + std::to_string(a) + " * " + std::to_string(b));
  return r;
}

ConstantProfile theory_profile(long long delta, long long epsilon) {
  if (delta < 0) throw InputError("theory_profile: delta must be >= 0");
  if (epsilon < 1) throw InputError("theory_profile: epsilon must be >= 1");
  ConstantProfile p;
  p.mode = ProfileMode::theory;
  p.delta = delta;
  p.epsilon = epsilon;
  p.lambda = checked_mul(1000, delta);
  p.mu = checked_mul(checked_add(checked_mul(100, epsilon), checked_mul(p.lambda, p.lambda)),
                     checked_mul(40, p.lambda));
  p.nu = checked_mul(checked_mul(40, p.lambda),
                     checked_add(epsilon, checked_mul(100, checked_mul(p.lambda, delta))));
  p.neighbor_threshold = checked_mul(100, delta);
  p.l = checked_add(checked_mul(10, p.mu), checked_mul(2, epsilon));
  return p;
}

ConstantProfile experiment_profile(long long delta, long long lambda, long long epsilon,
                                   long long mu, long long nu, long long l,
                                   long long neighbor_threshold, long long budget) {
  ConstantProfile p;
  p.mode = ProfileMode::experiment;
  p.delta = delta;
  p.lambda = lambda;
  p.epsilon = epsilon;
  p.mu = mu;
  p.nu = nu;
  p.l = l;
  p.neighbor_threshold = neighbor_threshold;
  p.budget = budget;
  validate_profile(p);
  return p;
}

void validate_profile(const ConstantProfile& p) {
  if (p.delta < 0) throw InputError("profile: delta must be >= 0");
  if (p.neighbor_threshold < 0) throw InputError("profile: neighbor_threshold must be >= 0");
  if (p.budget < 1) throw InputError("profile: budget must be positive");
  if (p.mode == ProfileMode::theory) {
    ConstantProfile ref = theory_profile(p.delta, p.epsilon);
    ref.budget = p.budget;
    if (ref.lambda != p.lambda || ref.mu != p.mu || ref.nu != p.nu ||
        ref.neighbor_threshold != p.neighbor_threshold || ref.l != p.l)
      throw InputError("profile: theory-mode fields do not match the formulas");
    return;
  }
  if (p.epsilon < 1) throw InputError("profile: epsilon must be >= 1");
  if (p.mu < 1) throw InputError("profile: mu must be >= 1");
  if (p.nu < 1) throw InputError("profile: nu must be >= 1");
  if (p.l < 1) throw InputError("profile: l must be >= 1");
  // A geodesic is a lambda/2-quasi-geodesic only when lambda >= 2; below
  // that every cylinder would be empty.
  if (p.lambda < 2) throw InputError("profile: lambda must be >= 2 in experiment mode");
}

long long psi(long long n, long long kappa_mu, long long epsilon) {
  if (n < 0 || kappa_mu < 0 || epsilon < 0)
    throw InputError("psi: arguments must be >= 0");
  return checked_mul(checked_mul(checked_mul(24, checked_add(n, 1)), kappa_mu),
                     checked_mul(checked_add(checked_mul(2, epsilon), 1), epsilon));
}

std::vector<long long> l_candidates(const ConstantProfile& profile, long long psi_n) {
  const long long eps = profile.epsilon;
  if (eps < 1) throw InputError("l_candidates: epsilon must be >= 1");
  if (psi_n < 2 * eps)
    throw InputError("l_candidates: psi_n = " + std::to_string(psi_n) +
                     " leaves an empty candidate range (needs psi_n >= 2*epsilon)");
  const long long count = psi_n / (2 * eps);
  std::vector<long long> out;
  out.reserve(static_cast<size_t>(count));
  for (long long i = 1; i <= count; ++i)
    out.push_back(checked_add(checked_mul(10, profile.mu), checked_mul(2 * i, eps)));
  return out;
}

long long d0_bound(long long triangles, long long psi_T, const ConstantProfile& p) {
  const long long unit = (p.mode == ProfileMode::theory) ? checked_mul(1000, p.delta)
                                                         : checked_mul(10, p.neighbor_threshold);
  const long long slice = (p.mode == ProfileMode::theory) ? checked_mul(200, p.delta)
                                                          : checked_mul(2, p.neighbor_threshold);
  return checked_mul(triangles,
                     checked_add(checked_mul(checked_mul(20, psi_T), unit), slice));
}

long long slice_diameter_bound(const ConstantProfile& p) {
  return checked_mul(2, p.neighbor_threshold);
}

long long slice_gap_bound(const ConstantProfile& p) {
  return checked_mul(10, p.neighbor_threshold);
}

long long morse_epsilon(const SimpleGraph& g, long long lambda, BudgetMeter& meter) {
  if (lambda < 1) throw InputError("morse_epsilon: lambda must be >= 1");
  if (!g.connected()) throw InputError("morse_epsilon requires a connected graph");
  const long long max_len = checked_mul(lambda, std::max(1, g.diameter()));
  long long best = 0;

  // Worst distance from any vertex of p to any geodesic joining its endpoints.
  auto path_slack = [&](const std::vector<VertexId>& p) {
    auto geos = g.all_geodesics(p.front(), p.back(), 1 << 20);
    long long worst = 0;
    for (const auto& geo : geos) {
      long long here = 0;
      for (VertexId v : p) {
        int near = g.vertex_count();
        for (VertexId w : geo.verts) near = std::min(near, g.distance(v, w));
        here = std::max<long long>(here, near);
      }
      worst = std::max(worst, here);
    }
    return worst;
  };

  std::vector<VertexId> path;
  // Every prefix of a lambda-quasi-geodesic is one, so pruning on the prefix
  // is exact.
  std::function<void()> extend = [&]() {
    meter.tick();
    best = std::max(best, path_slack(path));
    if (static_cast<long long>(path.size()) - 1 >= max_len) return;
    const int j = static_cast<int>(path.size());
    for (VertexId w : g.neighbors(path.back())) {
      bool ok = true;
      for (int i = 0; i < j && ok; ++i)
        ok = (j - i) <= checked_mul(lambda, g.distance(path[i], w));
      if (!ok) continue;
      path.push_back(w);
      extend();
      path.pop_back();
    }
  };

  try {
    for (VertexId s : g.vertices()) {
      path.assign(1, s);
      extend();
    }
  } catch (const BudgetError& e) {
    throw BudgetError(std::string("morse_epsilon: ") + e.what(), {}, best);
  }
  return best;
}

namespace {

const char* mode_name(ProfileMode m) {
  return m == ProfileMode::theory ? "theory" : "experiment";
}

}  // namespace

ConstantProfile parse_profile(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key, eq, value;
    if (!(ss >> key)) continue;
    auto where = source + ":" + std::to_string(lineno);
    if (!(ss >> eq >> value) || eq != "=")
      throw InputError(where + ": expected 'key = value'");
    if (!kv.emplace(key, value).second)
      throw InputError(where + ": duplicate key '" + key + "'");
  }
  auto need = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw InputError(source + ": missing key '" + key + "'");
    return it->second;
  };
  auto as_int = [&](const std::string& key) {
    const std::string& s = need(key);
    try {
      size_t pos = 0;
      long long v = std::stoll(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InputError(source + ": key '" + key + "' is not an integer: '" + s + "'");
    }
  };
  ConstantProfile p;
  std::string mode = need("mode");
  if (mode == "theory") p.mode = ProfileMode::theory;
  else if (mode == "experiment") p.mode = ProfileMode::experiment;
  else throw InputError(source + ": mode must be 'theory' or 'experiment'");
  p.delta = as_int("delta");
  p.lambda = as_int("lambda");
  p.epsilon = as_int("epsilon");
  p.mu = as_int("mu");
  p.nu = as_int("nu");
  p.l = as_int("l");
  p.neighbor_threshold = as_int("neighbor_threshold");
  p.budget = as_int("budget");
  validate_profile(p);
  return p;
}

ConstantProfile parse_profile_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open profile file '" + path + "'");
  return parse_profile(f, path);
}

std::string serialize_profile(const ConstantProfile& p) {
  std::ostringstream out;
  out << "mode = " << mode_name(p.mode) << "\n"
      << "delta = " << p.delta << "\n"
      << "lambda = " << p.lambda << "\n"
      << "epsilon = " << p.epsilon << "\n"
      << "mu = " << p.mu << "\n"
      << "nu = " << p.nu << "\n"
      << "l = " << p.l << "\n"
      << "neighbor_threshold = " << p.neighbor_threshold << "\n"
      << "budget = " << p.budget << "\n";
  return out.str();
}

}  // namespace hypcyl
