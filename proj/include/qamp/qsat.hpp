#pragma once

#include <string>
#include <vector>

#include "qamp/linalg.hpp"

namespace qamp::qsat {

/// A local projection constraint Q_i acting on `support`.
struct Constraint {
  int id = 0;
  std::vector<int> support;
  Matrix projector;  // on the product space of the support qudits
};

/// A system of qudits with a Hamiltonian H = sum_i Q_i and an optional
/// partition of the constraints into layers of pairwise-disjoint supports.
struct QSatSystem {
  std::vector<int> dims;
  std::vector<Constraint> constraints;
  std::vector<std::vector<int>> layers;  // empty until computed/supplied

  int num_qudits() const { return static_cast<int>(dims.size()); }
  int num_constraints() const { return static_cast<int>(constraints.size()); }
  Eigen::Index total_dim() const { return linalg::total_dim(dims); }
  bool has_layers() const { return !layers.empty(); }
  int num_layers() const { return static_cast<int>(layers.size()); }
  /// Max support size k.
  int locality() const;
};

/// Lists every violated invariant; empty iff valid.
std::vector<std::string> validate(const QSatSystem& sys);

/// Greedy proper coloring of the constraint-intersection graph, in id order,
/// lowest available color.
std::vector<std::vector<int>> compute_layers(const QSatSystem& sys);

Vector apply_constraint(const QSatSystem& sys, int id, const Vector& v);
Vector apply_hamiltonian(const QSatSystem& sys, const Vector& v);
Matrix dense_hamiltonian(const QSatSystem& sys);

double energy(const QSatSystem& sys, const Vector& psi);

/// Ground energy eps0. Dense diagonalization below the dense cap, matrix-free
/// Lanczos above it.
double ground_energy(const QSatSystem& sys);

/// Weights (and optionally components) of psi over the exactly-j-violations
/// sectors of one layer.
struct ViolationSpectrum {
  int layer = 0;
  RealVector weights;              // alpha_j^2, j = 0..layer size
  std::vector<Vector> components;  // unnormalized P_j psi when kept
};

ViolationSpectrum violation_spectrum(const QSatSystem& sys, int layer,
                                     const Vector& psi,
                                     bool keep_components = false);

/// Count-indexed sweep over an arbitrary constraint subset: returns v_c with
/// v_c = (projection of psi onto exactly c violations among `ids`).
std::vector<Vector> count_sweep(const QSatSystem& sys,
                                const std::vector<int>& ids, const Vector& psi);

std::string save_instance(const QSatSystem& sys);
QSatSystem load_instance(const std::string& text);

}  // namespace qamp::qsat
