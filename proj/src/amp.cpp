#include "qamp/amp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace qamp::amp {

bool edge_satisfied(const ClassicalCSP& csp, int edge, const Assignment& a) {
  auto [u, v] = csp.graph.edges[edge];
  return csp.tables[edge][a[u] * csp.alphabet + a[v]] != 0;
}

std::vector<char> violated_edges(const ClassicalCSP& csp, const Assignment& a) {
  std::vector<char> bad(csp.graph.edges.size(), 0);
  for (int e = 0; e < csp.graph.num_edges(); ++e)
    bad[e] = edge_satisfied(csp, e, a) ? 0 : 1;
  return bad;
}

double unsat(const ClassicalCSP& csp, const Assignment& a) {
  auto bad = violated_edges(csp, a);
  int nbad = 0;
  for (char b : bad) nbad += b;
  return static_cast<double>(nbad) / csp.graph.num_edges();
}

double unsat_t(const ClassicalCSP& csp, const Assignment& a, int t) {
  return 1.0 - walks::walk_avoid_probability(csp.graph, violated_edges(csp, a),
                                             t);
}

double c_of_lambda(double lambda) {
  if (lambda < 0 || lambda >= 1.0) throw InvalidLambda("lambda outside [0,1)");
  return 1.0 / (2.0 + 2.0 / (1.0 - lambda));
}

ClassicalAmpReport verify_classical_amp(const ClassicalCSP& csp,
                                        const Assignment& a, int t) {
  ClassicalAmpReport rep;
  rep.lambda = walks::spectral(csp.graph).lambda;
  double c = c_of_lambda(rep.lambda);
  rep.unsat_g = unsat(csp, a);
  rep.unsat_gt = unsat_t(csp, a, t);
  rep.rhs = std::min(t * c * rep.unsat_g, c);
  rep.pass = rep.unsat_gt >= rep.rhs - 1e-10;
  return rep;
}

MomentReport verify_moments(const walks::Graph& g, const std::vector<char>& bad,
                            int t) {
  MomentReport rep;
  double lambda = walks::spectral(g).lambda;
  int nbad = 0;
  for (char b : bad) nbad += b;
  double q = static_cast<double>(nbad) / g.num_edges();
  auto mom = walks::walk_moments(g, bad, t);
  rep.pr_hit = 1.0 - walks::walk_avoid_probability(g, bad, t);
  if (mom.ez2 > 0) {
    rep.second_moment_lb = mom.ez * mom.ez / mom.ez2;
    rep.lb_pass = rep.pr_hit >= rep.second_moment_lb - 1e-10;
  } else {
    rep.second_moment_lb = 0.0;
    rep.lb_pass = true;
  }
  rep.worst_pair_margin = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= t; ++i)
    for (int j = i + 1; j <= t; ++j) {
      double cap = q * (q + std::pow(lambda, j - i - 1));
      rep.worst_pair_margin =
          std::min(rep.worst_pair_margin, cap - mom.pairwise(i - 1, j - 1));
    }
  if (t < 2) rep.worst_pair_margin = 0.0;
  rep.pair_pass = rep.worst_pair_margin >= -1e-12;
  return rep;
}

QuantumWalkSystem make_walk_system(walks::Graph graph, int q,
                                   std::vector<Matrix> edge_projectors) {
  if (edge_projectors.size() != graph.edges.size())
    throw DimensionMismatch("one projector per edge");
  QuantumWalkSystem qws;
  qws.q = q;
  qws.base.dims.assign(graph.n, q);
  for (int e = 0; e < graph.num_edges(); ++e) {
    qsat::Constraint c;
    c.id = e;
    c.support = {graph.edges[e].first, graph.edges[e].second};
    c.projector = std::move(edge_projectors[e]);
    qws.base.constraints.push_back(std::move(c));
  }
  qws.base.layers = qsat::compute_layers(qws.base);
  qws.graph = std::move(graph);
  return qws;
}

qsat::Constraint build_walk_projector(const QuantumWalkSystem& qws,
                                      const walks::Walk& walk) {
  std::set<int> vs(walk.vertices.begin(), walk.vertices.end());
  std::vector<int> support(vs.begin(), vs.end());
  std::vector<int> dims(support.size(), qws.q);
  std::vector<int> pos(qws.graph.n, -1);
  for (std::size_t i = 0; i < support.size(); ++i) pos[support[i]] = (int)i;

  Eigen::Index d = linalg::total_dim(dims);
  Matrix sum = Matrix::Zero(d, d);
  std::set<int> edge_ids(walk.edges.begin(), walk.edges.end());
  for (int e : edge_ids) {
    const auto& c = qws.base.constraints[e];
    std::vector<int> local_support = {pos[c.support[0]], pos[c.support[1]]};
    sum += linalg::lift_local(c.projector, local_support, dims);
  }
  auto ker = linalg::kernel(sum);
  qsat::Constraint out;
  out.id = -1;
  out.support = std::move(support);
  out.projector = Matrix::Identity(d, d) - ker.projector();
  return out;
}

Matrix walk_hamiltonian(const QuantumWalkSystem& qws, int t) {
  Eigen::Index d = qws.base.total_dim();
  if (d > kDenseCap) throw DimensionTooLarge("walk Hamiltonian past cap");
  Matrix h = Matrix::Zero(d, d);
  // Walks with the same edge set share Q_e; cache the lifted projector.
  std::map<std::vector<int>, std::pair<Matrix, std::int64_t>> cache;
  walks::enumerate_walks(qws.graph, t, [&](const walks::Walk& w) {
    std::set<int> ids(w.edges.begin(), w.edges.end());
    std::vector<int> key(ids.begin(), ids.end());
    auto it = cache.find(key);
    if (it == cache.end()) {
      auto c = build_walk_projector(qws, w);
      Matrix lifted = linalg::lift_local(c.projector, c.support, qws.base.dims);
      cache.emplace(std::move(key), std::make_pair(std::move(lifted), 1));
    } else {
      ++it->second.second;
    }
  });
  std::int64_t total = 0;
  for (auto& [key, entry] : cache) {
    h += static_cast<double>(entry.second) * entry.first;
    total += entry.second;
  }
  if (total == 0) throw EnumerationTooLarge("no walks");
  return h / static_cast<double>(total);
}

double qunsat(const QuantumWalkSystem& qws, const Vector& psi) {
  return qsat::energy(qws.base, psi) / qws.graph.num_edges();
}

double qunsat_ground(const QuantumWalkSystem& qws) {
  return std::max(0.0, qsat::ground_energy(qws.base)) / qws.graph.num_edges();
}

double qunsat_ground_t(const QuantumWalkSystem& qws, int t) {
  auto [vals, vecs] = linalg::hermitian_eig(walk_hamiltonian(qws, t));
  return std::max(0.0, vals(0));
}

QuantumAmpReport verify_quantum_amp(const QuantumWalkSystem& qws, int t,
                                    double k_eff) {
  QuantumAmpReport rep;
  rep.lambda = walks::spectral(qws.graph).lambda;
  rep.k_eff = k_eff;
  double c = c_of_lambda(rep.lambda);
  const int m = qws.graph.num_edges();

  double eps0 = std::max(0.0, qsat::ground_energy(qws.base));
  rep.qunsat_g = eps0 / m;

  Matrix h = walk_hamiltonian(qws, t);
  auto [vals, vecs] = linalg::hermitian_eig(h);
  rep.qunsat_gt = std::max(0.0, vals(0));
  Vector psi = vecs.vectors.col(0);

  rep.rhs = c * k_eff * std::min(t * rep.qunsat_g, 1.0);
  rep.amp_pass = rep.qunsat_gt >= rep.rhs - 1e-7;

  rep.worst_combination_margin = std::numeric_limits<double>::infinity();
  if (eps0 <= 1e-10) {
    rep.notes.push_back("satisfiable instance; combination bound vacuous");
    rep.worst_combination_margin = 0.0;
    rep.combination_pass = true;
    return rep;
  }
  for (int li = 0; li < qws.base.num_layers(); ++li) {
    auto spec = qsat::violation_spectrum(qws.base, li, psi);
    double rhs = 0;
    for (Eigen::Index j = 1; j < spec.weights.size(); ++j)
      rhs += c * spec.weights(j) *
             std::min(static_cast<double>(t) * j, static_cast<double>(m)) / m;
    rep.worst_combination_margin =
        std::min(rep.worst_combination_margin, rep.qunsat_gt + 1e-7 - rhs);
  }
  rep.combination_pass = rep.worst_combination_margin >= 0;
  return rep;
}

SectorReport verify_sector_reduction(const QuantumWalkSystem& qws, int layer,
                                     int t) {
  if (layer < 0 || layer >= qws.base.num_layers())
    throw LayerOutOfRange(std::to_string(layer));
  const int q = qws.q;
  std::set<int> layer_edges(qws.base.layers[layer].begin(),
                            qws.base.layers[layer].end());
  for (int e : layer_edges) {
    const Matrix& p = qws.base.constraints[e].projector;
    Matrix off = p - Matrix(p.diagonal().asDiagonal());
    if (off.norm() > 1e-9)
      throw BadSector("sector reduction needs diagonal constraints");
  }

  // Single-layer quantum system: the other edges become null constraints.
  QuantumWalkSystem aux = qws;
  Eigen::Index local = static_cast<Eigen::Index>(q) * q;
  for (auto& c : aux.base.constraints)
    if (!layer_edges.count(c.id)) c.projector = Matrix::Zero(local, local);
  Matrix h = walk_hamiltonian(aux, t);

  ClassicalCSP csp;
  csp.graph = qws.graph;
  csp.alphabet = q;
  csp.tables.resize(qws.graph.edges.size(),
                    std::vector<char>(static_cast<std::size_t>(q) * q, 1));
  for (int e : layer_edges) {
    const Matrix& p = qws.base.constraints[e].projector;
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        // Constraint support order is (edge.first, edge.second) with the
        // first qudit least significant.
        Eigen::Index idx = a + static_cast<Eigen::Index>(q) * b;
        csp.tables[e][a * q + b] = std::real(p(idx, idx)) < 0.5 ? 1 : 0;
      }
  }

  double lambda = walks::spectral(qws.graph).lambda;
  double c = c_of_lambda(lambda);
  const int m = qws.graph.num_edges();

  SectorReport rep;
  rep.worst_bound_margin = std::numeric_limits<double>::infinity();
  Eigen::Index dim = qws.base.total_dim();
  for (Eigen::Index sigma = 0; sigma < dim; ++sigma) {
    Assignment a(qws.graph.n);
    Eigen::Index rest = sigma;
    for (int v = 0; v < qws.graph.n; ++v) {
      a[v] = static_cast<int>(rest % q);
      rest /= q;
    }
    double quantum = std::real(h(sigma, sigma));
    double classical = unsat_t(csp, a, t);
    rep.worst_eq_error =
        std::max(rep.worst_eq_error, std::abs(quantum - classical));
    int j = 0;
    for (int e : layer_edges)
      if (!edge_satisfied(csp, e, a)) ++j;
    double bound = std::min(static_cast<double>(t) * c * j / m, c);
    rep.worst_bound_margin = std::min(rep.worst_bound_margin, quantum - bound);
    ++rep.states;
  }
  rep.pass = rep.worst_eq_error <= 1e-9 && rep.worst_bound_margin >= -1e-9;
  return rep;
}

}  // namespace qamp::amp
