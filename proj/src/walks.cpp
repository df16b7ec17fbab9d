#include "qamp/walks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

#include "json.hpp"

namespace qamp::walks {

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
  Graph g;
  g.n = n;
  g.adjacency.resize(n);
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw BadSupport("edge endpoint");
    if (u == v) throw BadSupport("self loop");
    auto key = std::minmax(u, v);
    if (!seen.insert({key.first, key.second}).second)
      throw BadSupport("parallel edge");
    int id = static_cast<int>(g.edges.size());
    g.edges.emplace_back(u, v);
    g.adjacency[u].emplace_back(v, id);
    g.adjacency[v].emplace_back(u, id);
  }
  return g;
}

int Graph::regular_degree() const {
  if (n == 0) return -1;
  int d = degree(0);
  for (int v = 1; v < n; ++v)
    if (degree(v) != d) return -1;
  return d;
}

std::string save_graph(const Graph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  j["edges"] = nlohmann::json::array();
  for (auto [u, v] : g.edges) j["edges"].push_back({u, v});
  return j.dump(2);
}

Graph load_graph(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges"))
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return Graph::from_edges(n, std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
}

Graph random_regular(int n, int d, std::uint64_t seed) {
  if (n <= 0 || d <= 0 || (static_cast<std::int64_t>(n) * d) % 2 != 0 ||
      d >= n)
    throw Infeasible("no d-regular simple graph with these parameters");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 5000; ++attempt) {
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * d);
    for (int v = 0; v < n; ++v)
      for (int i = 0; i < d; ++i) stubs.push_back(v);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::set<std::pair<int, int>> seen;
    std::vector<std::pair<int, int>> edges;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      auto key = std::minmax(u, v);
      if (u == v || !seen.insert({key.first, key.second}).second) {
        ok = false;
        break;
      }
      edges.emplace_back(u, v);
    }
    if (ok) return Graph::from_edges(n, std::move(edges));
  }
  throw Infeasible("pairing model rejection budget exhausted");
}

static bool is_connected(const Graph& g) {
  if (g.n == 0) return true;
  std::vector<char> seen(g.n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (auto [w, id] : g.adjacency[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        q.push(w);
      }
  }
  return count == g.n;
}

SpectralData spectral(const Graph& g) {
  int d = g.regular_degree();
  if (d <= 0) throw Infeasible("spectral data needs a regular graph");
  if (!is_connected(g)) throw Disconnected("graph is disconnected");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n, g.n);
  for (auto [u, v] : g.edges) {
    a(u, v) += 1.0;
    a(v, u) += 1.0;
  }
  a /= d;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  Eigen::VectorXd vals = solver.eigenvalues();
  SpectralData out;
  out.connected = true;
  out.spectrum = vals.reverse();
  out.bipartite = vals(0) <= -1.0 + 1e-9;
  out.lambda = std::max(std::abs(out.spectrum(1)), std::abs(vals(0)));
  return out;
}

Walk sample_walk(const Graph& g, int t, std::mt19937_64& rng) {
  Walk w;
  std::uniform_int_distribution<int> start(0, g.n - 1);
  int v = start(rng);
  w.vertices.push_back(v);
  for (int step = 0; step < t; ++step) {
    std::uniform_int_distribution<int> pick(0, g.degree(v) - 1);
    auto [next, id] = g.adjacency[v][pick(rng)];
    w.vertices.push_back(next);
    w.edges.push_back(id);
    v = next;
  }
  return w;
}

std::int64_t walk_count(const Graph& g, int t) {
  int d = g.regular_degree();
  if (d <= 0) throw Infeasible("walk count needs a regular graph");
  std::int64_t count = g.n;
  for (int i = 0; i < t; ++i) {
    if (count > kWalkCap * 64) return count;  // already far past any cap
    count *= d;
  }
  return count;
}

void enumerate_walks(const Graph& g, int t,
                     const std::function<void(const Walk&)>& visit,
                     std::int64_t cap) {
  if (walk_count(g, t) > cap)
    throw EnumerationTooLarge("walk enumeration past cap");
  Walk w;
  w.vertices.resize(t + 1);
  w.edges.resize(t);
  std::function<void(int)> rec = [&](int step) {
    if (step == t) {
      visit(w);
      return;
    }
    int v = w.vertices[step];
    for (auto [next, id] : g.adjacency[v]) {
      w.vertices[step + 1] = next;
      w.edges[step] = id;
      rec(step + 1);
    }
  };
  for (int v = 0; v < g.n; ++v) {
    w.vertices[0] = v;
    rec(0);
  }
}

double walk_avoid_probability(const Graph& g, const std::vector<char>& bad,
                              int t) {
  int d = g.regular_degree();
  if (d <= 0) throw Infeasible("avoid probability needs a regular graph");
  if (bad.size() != g.edges.size()) throw DimensionMismatch("bad-edge mask");
  Eigen::VectorXd u = Eigen::VectorXd::Constant(g.n, 1.0 / g.n);
  for (int step = 0; step < t; ++step) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(g.n);
    for (int v = 0; v < g.n; ++v)
      for (auto [w, id] : g.adjacency[v])
        if (!bad[id]) next(w) += u(v) / d;
    u = std::move(next);
  }
  return u.sum();
}

Moments walk_moments(const Graph& g, const std::vector<char>& bad, int t) {
  int d = g.regular_degree();
  if (d <= 0) throw Infeasible("moments need a regular graph");
  if (bad.size() != g.edges.size()) throw DimensionMismatch("bad-edge mask");
  int nbad = 0;
  for (char b : bad) nbad += b ? 1 : 0;
  double frac = static_cast<double>(nbad) / g.num_edges();

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(g.n, g.n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(g.n, g.n);
  for (int v = 0; v < g.n; ++v)
    for (auto [w, id] : g.adjacency[v]) {
      m(w, v) += 1.0 / d;
      if (bad[id]) b(w, v) += 1.0 / d;
    }

  Moments out;
  out.ez = t * frac;
  out.pairwise = Eigen::MatrixXd::Zero(t, t);
  // E[Z_i Z_j] for i < j depends only on the gap j - i; the uniform start is
  // stationary under the full step.
  Eigen::VectorXd u = Eigen::VectorXd::Constant(g.n, 1.0 / g.n);
  Eigen::VectorXd w0 = b * u;
  std::vector<double> by_gap(t, 0.0);
  Eigen::VectorXd cur = w0;
  for (int gap = 1; gap < t; ++gap) {
    if (gap > 1) cur = m * cur;
    by_gap[gap] = (b * cur).sum();
  }
  for (int i = 1; i <= t; ++i) {
    out.pairwise(i - 1, i - 1) = frac;  // Z_i is an indicator
    for (int j = i + 1; j <= t; ++j) {
      out.pairwise(i - 1, j - 1) = by_gap[j - i];
      out.pairwise(j - 1, i - 1) = by_gap[j - i];
    }
  }
  out.ez2 = out.pairwise.sum();
  return out;
}

}  // namespace qamp::walks
