#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "qamp/linalg.hpp"

namespace qamp::walks {

struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  // adjacency[v] = (neighbor, edge id); parallel edges and self loops are
  // rejected at construction.
  std::vector<std::vector<std::pair<int, int>>> adjacency;

  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges);

  int num_edges() const { return static_cast<int>(edges.size()); }
  int degree(int v) const { return static_cast<int>(adjacency[v].size()); }
  /// Common degree, or -1 if not regular.
  int regular_degree() const;
};

std::string save_graph(const Graph& g);
Graph load_graph(const std::string& text);

/// Uniform random d-regular simple graph via the pairing model with
/// rejection; throws Infeasible when nd is odd or after too many rejections.
Graph random_regular(int n, int d, std::uint64_t seed);

struct SpectralData {
  double lambda = 0.0;  // second-largest |eigenvalue| of A/d
  Eigen::VectorXd spectrum;  // eigenvalues of A/d, descending
  bool bipartite = false;
  bool connected = false;
};

/// Spectral data of the degree-normalized adjacency; throws Disconnected on a
/// disconnected graph and requires regularity.
SpectralData spectral(const Graph& g);

struct Walk {
  std::vector<int> vertices;  // t+1 vertices
  std::vector<int> edges;     // t edge ids
};

Walk sample_walk(const Graph& g, int t, std::mt19937_64& rng);

inline constexpr std::int64_t kWalkCap = 1'000'000;

/// Number of directed t-step walks, n * d^t.
std::int64_t walk_count(const Graph& g, int t);

/// Visits every directed t-step walk; throws EnumerationTooLarge past cap.
void enumerate_walks(const Graph& g, int t,
                     const std::function<void(const Walk&)>& visit,
                     std::int64_t cap = kWalkCap);

/// Exact probability that a uniform t-step walk avoids every marked edge,
/// by the distribution recursion u'(w) = sum over good (v,w) of u(v)/d.
double walk_avoid_probability(const Graph& g, const std::vector<char>& bad,
                              int t);

/// Exact first and second moments of Z = number of marked-edge steps in a
/// uniform t-step walk, via operator products of the bad-edge step and the
/// full transition step.
struct Moments {
  double ez = 0.0;
  double ez2 = 0.0;
  Eigen::MatrixXd pairwise;  // E[Z_i Z_j], 1-based steps stored at (i-1, j-1)
};

Moments walk_moments(const Graph& g, const std::vector<char>& bad, int t);

}  // namespace qamp::walks
