#include "qamp/corpus.hpp"

#include <cmath>
#include <random>

namespace qamp::corpus {

qsat::QSatSystem angle_system(double a) {
  qsat::QSatSystem sys;
  sys.dims = {2};
  Vector v0(2), va(2);
  v0 << 1, 0;
  va << std::cos(a), std::sin(a);
  qsat::Constraint c0{0, {0}, v0 * v0.adjoint()};
  qsat::Constraint c1{1, {0}, va * va.adjoint()};
  sys.constraints = {c0, c1};
  sys.layers = {{0}, {1}};
  return sys;
}

qsat::QSatSystem rank1_chain(int n, bool cycle, std::uint64_t seed) {
  if (cycle && n % 2 != 0) throw Infeasible("two layers need an even cycle");
  qsat::QSatSystem sys;
  sys.dims.assign(n, 2);
  int m = cycle ? n : n - 1;
  for (int e = 0; e < m; ++e) {
    Vector phi = linalg::random_state(4, linalg::split_seed(seed, e));
    qsat::Constraint c{e, {e, (e + 1) % n}, phi * phi.adjoint()};
    sys.constraints.push_back(std::move(c));
  }
  sys.layers = qsat::compute_layers(sys);
  return sys;
}

walks::Graph k4() {
  return walks::Graph::from_edges(
      4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}

walks::Graph prism() {
  return walks::Graph::from_edges(6, {{0, 1},
                                      {1, 2},
                                      {2, 0},
                                      {3, 4},
                                      {4, 5},
                                      {5, 3},
                                      {0, 3},
                                      {1, 4},
                                      {2, 5}});
}

amp::QuantumWalkSystem diagonal_neq_system(const walks::Graph& g, int q) {
  Eigen::Index local = static_cast<Eigen::Index>(q) * q;
  Matrix p = Matrix::Zero(local, local);
  for (int a = 0; a < q; ++a) {
    Eigen::Index idx = a + static_cast<Eigen::Index>(q) * a;
    p(idx, idx) = 1.0;
  }
  std::vector<Matrix> projs(g.edges.size(), p);
  return amp::make_walk_system(g, q, std::move(projs));
}

amp::ClassicalCSP neq_csp(const walks::Graph& g, int alphabet) {
  amp::ClassicalCSP csp;
  csp.graph = g;
  csp.alphabet = alphabet;
  std::vector<char> table(static_cast<std::size_t>(alphabet) * alphabet, 1);
  for (int a = 0; a < alphabet; ++a) table[a * alphabet + a] = 0;
  csp.tables.assign(g.edges.size(), table);
  return csp;
}

amp::ClassicalCSP random_csp(const walks::Graph& g, int alphabet,
                             std::uint64_t seed) {
  amp::ClassicalCSP csp;
  csp.graph = g;
  csp.alphabet = alphabet;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    std::vector<char> table(static_cast<std::size_t>(alphabet) * alphabet);
    for (;;) {
      int allowed = 0;
      for (auto& cell : table) {
        cell = coin(rng) ? 1 : 0;
        allowed += cell;
      }
      if (allowed > 0 && allowed < static_cast<int>(table.size())) break;
    }
    csp.tables.push_back(std::move(table));
  }
  return csp;
}

static Matrix haar_unitary2(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 2; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

amp::QuantumWalkSystem rank1_entangled_system(const walks::Graph& g, double a,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Matrix> projs;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    Vector phi = Vector::Zero(4);
    // |01> = qudit0 in 0, qudit1 in 1; qudit0 (edge.first) least significant.
    phi(2) = std::cos(a);
    phi(1) = std::sin(a);
    // Random local frames keep the entanglement angle but avoid a shared
    // satisfying product state.
    Matrix u = haar_unitary2(rng), v = haar_unitary2(rng);
    Matrix uv = Matrix::Zero(4, 4);
    for (int r0 = 0; r0 < 2; ++r0)
      for (int c0 = 0; c0 < 2; ++c0)
        for (int r1 = 0; r1 < 2; ++r1)
          for (int c1 = 0; c1 < 2; ++c1)
            uv(r0 + 2 * r1, c0 + 2 * c1) = u(r0, c0) * v(r1, c1);
    phi = uv * phi;
    projs.push_back(phi * phi.adjoint());
  }
  return amp::make_walk_system(g, 2, std::move(projs));
}

}  // namespace qamp::corpus
