#include "hypcyl/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace hypcyl {

PathSeq PathSeq::sub(int i, int j) const {
  PathSeq out;
  out.verts.assign(verts.begin() + i, verts.begin() + j + 1);
  return out;
}

PathSeq PathSeq::reversed() const {
  PathSeq out = *this;
  std::reverse(out.verts.begin(), out.verts.end());
  return out;
}

SimpleGraph::SimpleGraph(std::vector<std::string> names,
                         std::vector<std::pair<std::string, std::string>> edge_names)
    : names_(std::move(names)) {
  std::map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw InputError("empty vertex name");
    if (!index.emplace(names_[i], i).second)
      throw InputError("duplicate vertex '" + names_[i] + "'");
  }
  adj_.assign(names_.size(), {});
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& [na, nb] : edge_names) {
    auto ia = index.find(na), ib = index.find(nb);
    if (ia == index.end()) throw InputError("edge references unknown vertex '" + na + "'");
    if (ib == index.end()) throw InputError("edge references unknown vertex '" + nb + "'");
    std::uint32_t a = ia->second, b = ib->second;
    if (a == b) throw InputError("self-loop at '" + na + "'");
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second)
      throw InputError("parallel edge '" + na + "' '" + nb + "'");
  }
  for (const auto& [a, b] : seen) {
    adj_[a].push_back(VertexId{b});
    adj_[b].push_back(VertexId{a});
    edges_.push_back({VertexId{a}, VertexId{b}});
  }
  for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());

  // All-pairs BFS; the table is the only metric state.
  const int n = vertex_count();
  dist_.assign(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    auto& row = dist_[s];
    row[s] = 0;
    std::deque<std::uint32_t> queue{static_cast<std::uint32_t>(s)};
    while (!queue.empty()) {
      std::uint32_t u = queue.front();
      queue.pop_front();
      for (VertexId w : adj_[u]) {
        if (row[w.value] < 0) {
          row[w.value] = row[u] + 1;
          queue.push_back(w.value);
        }
      }
    }
  }
  connected_ = n > 0;
  for (int s = 0; s < n && connected_; ++s)
    for (int t = 0; t < n; ++t)
      if (dist_[s][t] < 0) { connected_ = false; break; }
}

const std::string& SimpleGraph::name(VertexId v) const {
  require_vertex(v);
  return names_[v.value];
}

bool SimpleGraph::has_vertex(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

VertexId SimpleGraph::vertex(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw InputError("unknown vertex '" + name + "'");
  return VertexId{static_cast<std::uint32_t>(it - names_.begin())};
}

std::vector<VertexId> SimpleGraph::vertices() const {
  std::vector<VertexId> out(names_.size());
  for (std::uint32_t i = 0; i < names_.size(); ++i) out[i] = VertexId{i};
  return out;
}

void SimpleGraph::require_vertex(VertexId v) const {
  if (v.value >= names_.size())
    throw InputError("vertex id " + std::to_string(v.value) + " out of range");
}

const std::vector<VertexId>& SimpleGraph::neighbors(VertexId v) const {
  require_vertex(v);
  return adj_[v.value];
}

bool SimpleGraph::adjacent(VertexId a, VertexId b) const {
  const auto& nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

int SimpleGraph::distance(VertexId a, VertexId b) const {
  require_vertex(a);
  require_vertex(b);
  int d = dist_[a.value][b.value];
  if (d < 0)
    throw InputError("graph is disconnected: no path '" + names_[a.value] +
                     "' to '" + names_[b.value] + "'");
  return d;
}

int SimpleGraph::diameter() const {
  int best = 0;
  for (int a = 0; a < vertex_count(); ++a)
    for (int b = a + 1; b < vertex_count(); ++b)
      best = std::max(best, distance(VertexId{(std::uint32_t)a}, VertexId{(std::uint32_t)b}));
  return best;
}

std::vector<PathSeq> SimpleGraph::all_geodesics(VertexId a, VertexId b,
                                                long long cap) const {
  if (cap <= 0) throw InputError("geodesic cap must be positive");
  const int d = distance(a, b);
  std::vector<PathSeq> out;
  PathSeq cur;
  cur.verts.push_back(a);
  // Descend the distance-to-b gradient; neighbors are sorted, so the
  // output order is lexicographic.
  std::function<void(VertexId)> extend = [&](VertexId u) {
    if (u == b) {
      if (static_cast<long long>(out.size()) >= cap)
        throw BudgetError("all_geodesics: more than " + std::to_string(cap) +
                          " geodesics between '" + name(a) + "' and '" + name(b) + "'");
      out.push_back(cur);
      return;
    }
    int du = dist_[u.value][b.value];
    for (VertexId w : adj_[u.value]) {
      if (dist_[w.value][b.value] == du - 1) {
        cur.verts.push_back(w);
        extend(w);
        cur.verts.pop_back();
      }
    }
  };
  (void)d;
  extend(a);
  return out;
}

bool SimpleGraph::is_valid_path(const PathSeq& p) const {
  if (p.verts.empty()) return false;
  for (VertexId v : p.verts)
    if (v.value >= names_.size()) return false;
  for (size_t i = 0; i + 1 < p.verts.size(); ++i)
    if (!adjacent(p.verts[i], p.verts[i + 1])) return false;
  return true;
}

void SimpleGraph::require_path(const PathSeq& p) const {
  if (p.verts.empty()) throw InputError("empty path");
  for (VertexId v : p.verts) require_vertex(v);
  for (size_t i = 0; i + 1 < p.verts.size(); ++i)
    if (!adjacent(p.verts[i], p.verts[i + 1]))
      throw InputError("path step '" + name(p.verts[i]) + "' -> '" +
                       name(p.verts[i + 1]) + "' is not an edge");
}

GraphAutomorphism GraphAutomorphism::identity(int n) {
  GraphAutomorphism a;
  a.fwd_.resize(n);
  a.inv_.resize(n);
  for (int i = 0; i < n; ++i) {
    a.fwd_[i] = VertexId{(std::uint32_t)i};
    a.inv_[i] = VertexId{(std::uint32_t)i};
  }
  return a;
}

GraphAutomorphism GraphAutomorphism::from_images(const SimpleGraph& g,
                                                 std::vector<VertexId> forward) {
  const int n = g.vertex_count();
  if (static_cast<int>(forward.size()) != n)
    throw InputError("automorphism must map all " + std::to_string(n) + " vertices");
  GraphAutomorphism a;
  a.fwd_ = std::move(forward);
  a.inv_.assign(n, VertexId{0});
  std::vector<bool> hit(n, false);
  for (int i = 0; i < n; ++i) {
    VertexId img = a.fwd_[i];
    g.require_vertex(img);
    if (hit[img.value])
      throw InputError("automorphism is not a bijection: '" + g.name(img) +
                       "' hit twice");
    hit[img.value] = true;
    a.inv_[img.value] = VertexId{(std::uint32_t)i};
  }
  for (const auto& [u, v] : g.edges()) {
    if (!g.adjacent(a.fwd_[u.value], a.fwd_[v.value]))
      throw InputError("map does not preserve edge '" + g.name(u) + "' '" +
                       g.name(v) + "'");
  }
  // Bijection + edge count preserved forces the inverse direction too, but
  // check it anyway so corrupt inputs fail with a direct message.
  for (const auto& [u, v] : g.edges()) {
    if (!g.adjacent(a.inv_[u.value], a.inv_[v.value]))
      throw InputError("inverse map does not preserve edge '" + g.name(u) +
                       "' '" + g.name(v) + "'");
  }
  return a;
}

GraphAutomorphism GraphAutomorphism::inverse() const {
  GraphAutomorphism a;
  a.fwd_ = inv_;
  a.inv_ = fwd_;
  return a;
}

GraphAutomorphism GraphAutomorphism::compose(const GraphAutomorphism& other) const {
  if (size() != other.size()) throw InputError("composing maps of different graphs");
  GraphAutomorphism a;
  a.fwd_.resize(fwd_.size());
  a.inv_.resize(fwd_.size());
  for (size_t i = 0; i < fwd_.size(); ++i)
    a.fwd_[i] = fwd_[other.fwd_[i].value];
  for (size_t i = 0; i < fwd_.size(); ++i)
    a.inv_[a.fwd_[i].value] = VertexId{(std::uint32_t)i};
  return a;
}

bool GraphAutomorphism::is_identity() const {
  for (size_t i = 0; i < fwd_.size(); ++i)
    if (fwd_[i].value != i) return false;
  return true;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

}  // namespace

SimpleGraph parse_graph(std::istream& in, const std::string& source) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '#') continue;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    auto where = source + ":" + std::to_string(lineno);
    if (toks[0] == "v" && toks.size() == 2) {
      names.push_back(toks[1]);
    } else if (toks[0] == "e" && toks.size() == 3) {
      edges.push_back({toks[1], toks[2]});
    } else {
      throw InputError(where + ": expected 'v <name>' or 'e <name> <name>', got '" + line + "'");
    }
  }
  try {
    return SimpleGraph(std::move(names), std::move(edges));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

SimpleGraph parse_graph_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open graph file '" + path + "'");
  return parse_graph(f, path);
}

std::string serialize_graph(const SimpleGraph& g) {
  std::ostringstream out;
  for (VertexId v : g.vertices()) out << "v " << g.name(v) << "\n";
  for (const auto& [a, b] : g.edges())
    out << "e " << g.name(a) << " " << g.name(b) << "\n";
  return out.str();
}

GraphAutomorphism parse_automorphism(const SimpleGraph& g, std::istream& in,
                                     const std::string& source) {
  std::vector<VertexId> fwd(g.vertex_count(), VertexId{0});
  std::vector<bool> assigned(g.vertex_count(), false);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '#') continue;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    auto where = source + ":" + std::to_string(lineno);
    if (toks[0] != "map" || toks.size() != 3)
      throw InputError(where + ": expected 'map <name> <name>'");
    VertexId from = g.vertex(toks[1]);
    if (assigned[from.value])
      throw InputError(where + ": vertex '" + toks[1] + "' mapped twice");
    assigned[from.value] = true;
    fwd[from.value] = g.vertex(toks[2]);
  }
  for (VertexId v : g.vertices())
    if (!assigned[v.value])
      throw InputError(source + ": vertex '" + g.name(v) + "' has no map line");
  return GraphAutomorphism::from_images(g, std::move(fwd));
}

std::string serialize_automorphism(const SimpleGraph& g, const GraphAutomorphism& a) {
  std::ostringstream out;
  for (VertexId v : g.vertices())
    out << "map " << g.name(v) << " " << g.name(a.apply(v)) << "\n";
  return out.str();
}

int slim_delta(const SimpleGraph& g, BudgetMeter& meter) {
  if (!g.connected()) throw InputError("slim_delta requires a connected graph");
  const auto verts = g.vertices();
  int best = 0;
  auto side_slack = [&](const PathSeq& side, const PathSeq& o1, const PathSeq& o2) {
    int worst = 0;
    for (VertexId v : side.verts) {
      int near = g.vertex_count();
      for (VertexId w : o1.verts) near = std::min(near, g.distance(v, w));
      for (VertexId w : o2.verts) near = std::min(near, g.distance(v, w));
      worst = std::max(worst, near);
    }
    return worst;
  };
  try {
    for (size_t i = 0; i < verts.size(); ++i)
      for (size_t j = i + 1; j < verts.size(); ++j)
        for (size_t k = j + 1; k < verts.size(); ++k) {
          auto gab = g.all_geodesics(verts[i], verts[j], meter.limit() < 0 ? 1 << 20 : meter.limit());
          auto gbc = g.all_geodesics(verts[j], verts[k], meter.limit() < 0 ? 1 << 20 : meter.limit());
          auto gac = g.all_geodesics(verts[i], verts[k], meter.limit() < 0 ? 1 << 20 : meter.limit());
          for (const auto& ab : gab)
            for (const auto& bc : gbc)
              for (const auto& ac : gac) {
                meter.tick();
                best = std::max(best, side_slack(ab, bc, ac));
                best = std::max(best, side_slack(bc, ab, ac));
                best = std::max(best, side_slack(ac, ab, bc));
              }
        }
  } catch (const BudgetError& e) {
    throw BudgetError(std::string("slim_delta: ") + e.what(), {}, best);
  }
  return best;
}

std::vector<GraphAutomorphism> all_automorphisms(const SimpleGraph& g, long long cap) {
  const int n = g.vertex_count();
  std::vector<GraphAutomorphism> out;
  std::vector<int> image(n, -1);
  std::vector<bool> used(n, false);
  std::vector<int> degree(n);
  for (int v = 0; v < n; ++v)
    degree[v] = static_cast<int>(g.neighbors(VertexId{(std::uint32_t)v}).size());

  std::function<void(int)> place = [&](int v) {
    if (v == n) {
      std::vector<VertexId> fwd(n);
      for (int i = 0; i < n; ++i) fwd[i] = VertexId{(std::uint32_t)image[i]};
      if (static_cast<long long>(out.size()) >= cap)
        throw BudgetError("all_automorphisms: more than " + std::to_string(cap) + " maps");
      out.push_back(GraphAutomorphism::from_images(g, std::move(fwd)));
      return;
    }
    for (int w = 0; w < n; ++w) {
      if (used[w] || degree[w] != degree[v]) continue;
      bool ok = true;
      for (int u = 0; u < v && ok; ++u) {
        bool e1 = g.adjacent(VertexId{(std::uint32_t)v}, VertexId{(std::uint32_t)u});
        bool e2 = g.adjacent(VertexId{(std::uint32_t)w}, VertexId{(std::uint32_t)image[u]});
        ok = (e1 == e2);
      }
      if (!ok) continue;
      image[v] = w;
      used[w] = true;
      place(v + 1);
      used[w] = false;
      image[v] = -1;
    }
  };
  place(0);
  return out;
}

SimpleGraph path_graph(int n) {
  if (n < 1) throw InputError("path_graph needs n >= 1");
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  for (int i = 0; i + 1 < n; ++i) edges.push_back({names[i], names[i + 1]});
  return SimpleGraph(std::move(names), std::move(edges));
}

SimpleGraph cycle_graph(int n) {
  if (n < 3) throw InputError("cycle_graph needs n >= 3");
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  for (int i = 0; i < n; ++i) edges.push_back({names[i], names[(i + 1) % n]});
  return SimpleGraph(std::move(names), std::move(edges));
}

SimpleGraph grid_graph(int rows, int cols) {
  if (rows < 1 || cols < 1) throw InputError("grid_graph needs positive dimensions");
  auto nm = [&](int r, int c) { return "g" + std::to_string(r) + "_" + std::to_string(c); };
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) names.push_back(nm(r, c));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({nm(r, c), nm(r, c + 1)});
      if (r + 1 < rows) edges.push_back({nm(r, c), nm(r + 1, c)});
    }
  return SimpleGraph(std::move(names), std::move(edges));
}

SimpleGraph spider_graph(const std::vector<int>& leg_lengths) {
  std::vector<std::string> names{"o"};
  std::vector<std::pair<std::string, std::string>> edges;
  for (size_t leg = 0; leg < leg_lengths.size(); ++leg) {
    if (leg_lengths[leg] < 1) throw InputError("spider legs must have length >= 1");
    std::string prev = "o";
    for (int i = 1; i <= leg_lengths[leg]; ++i) {
      std::string cur = "l" + std::to_string(leg) + "_" + std::to_string(i);
      names.push_back(cur);
      edges.push_back({prev, cur});
      prev = cur;
    }
  }
  return SimpleGraph(std::move(names), std::move(edges));
}

SimpleGraph random_tree(int n, std::uint64_t seed) {
  if (n < 1) throw InputError("random_tree needs n >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  for (int i = 0; i < n; ++i) names.push_back("t" + std::to_string(i));
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(0, i - 1);
    edges.push_back({names[pick(rng)], names[i]});
  }
  return SimpleGraph(std::move(names), std::move(edges));
}

}  // namespace hypcyl
