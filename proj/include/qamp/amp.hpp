#pragma once

#include <string>
#include <vector>

#include "qamp/detect.hpp"
#include "qamp/walks.hpp"

namespace qamp::amp {

/// A 2-CSP over a graph: one allowed-pair table per edge, indexed as
/// table[a * alphabet + b] for the assignment (a at edge.first, b at
/// edge.second).
struct ClassicalCSP {
  walks::Graph graph;
  int alphabet = 2;
  std::vector<std::vector<char>> tables;  // per edge id
};

using Assignment = std::vector<int>;

bool edge_satisfied(const ClassicalCSP& csp, int edge, const Assignment& a);

/// Fraction of violated edges.
double unsat(const ClassicalCSP& csp, const Assignment& a);

std::vector<char> violated_edges(const ClassicalCSP& csp, const Assignment& a);

/// Fraction of violated t-step walk constraints under the same assignment,
/// computed exactly from the walk distribution.
double unsat_t(const ClassicalCSP& csp, const Assignment& a, int t);

/// c(lambda) = 1 / (2 + 2/(1 - lambda)).
double c_of_lambda(double lambda);

struct ClassicalAmpReport {
  double lambda = 0.0;
  double unsat_g = 0.0;
  double unsat_gt = 0.0;
  double rhs = 0.0;  // min(t c(lambda) unsat_g, c(lambda))
  bool pass = false;
};

ClassicalAmpReport verify_classical_amp(const ClassicalCSP& csp,
                                        const Assignment& a, int t);

/// Second-moment lower bound Pr[Z > 0] >= E[Z]^2 / E[Z^2] and the pairwise
/// moment cap E[Z_i Z_j] <= q (q + lambda^(j-i-1)) with q = |F|/|E|.
struct MomentReport {
  double pr_hit = 0.0;       // exact 1 - avoid probability
  double second_moment_lb = 0.0;
  bool lb_pass = false;
  double worst_pair_margin = 0.0;
  bool pair_pass = false;
};

MomentReport verify_moments(const walks::Graph& g, const std::vector<char>& bad,
                            int t);

/// One projection constraint per edge on equal-dimension qudits; constraint
/// ids align with edge ids.
struct QuantumWalkSystem {
  walks::Graph graph;
  qsat::QSatSystem base;
  int q = 2;
};

QuantumWalkSystem make_walk_system(walks::Graph graph, int q,
                                   std::vector<Matrix> edge_projectors);

/// Walk constraint: projector onto the complement of the intersection of the
/// walk-edge kernels, supported on the walk's distinct vertices.
qsat::Constraint build_walk_projector(const QuantumWalkSystem& qws,
                                      const walks::Walk& walk);

/// Average of the walk constraints over all directed t-step walks, dense.
Matrix walk_hamiltonian(const QuantumWalkSystem& qws, int t);

double qunsat(const QuantumWalkSystem& qws, const Vector& psi);
double qunsat_ground(const QuantumWalkSystem& qws);
double qunsat_ground_t(const QuantumWalkSystem& qws, int t);

struct QuantumAmpReport {
  double lambda = 0.0;
  double k_eff = 0.0;
  double qunsat_g = 0.0;
  double qunsat_gt = 0.0;
  double rhs = 0.0;  // c(lambda) K_eff min(t qunsat_g, 1)
  bool amp_pass = false;
  double worst_combination_margin = 0.0;
  bool combination_pass = false;  // per-layer spectral combination bound
  std::vector<std::string> notes;
};

/// Checks the amplification inequality on the ground state of the walk
/// Hamiltonian and the per-layer spectral combination bound.
QuantumAmpReport verify_quantum_amp(const QuantumWalkSystem& qws, int t,
                                    double k_eff);

struct SectorReport {
  int states = 0;
  double worst_eq_error = 0.0;   // |quantum - classical| over basis states
  double worst_bound_margin = 0.0;
  bool pass = false;
};

/// For a diagonal system: on every computational basis state the walk
/// Hamiltonian restricted to one layer's constraints reproduces the classical
/// t-walk UNSAT of the induced assignment, and obeys the single-layer
/// amplification bound.
SectorReport verify_sector_reduction(const QuantumWalkSystem& qws, int layer,
                                     int t);

}  // namespace qamp::amp
