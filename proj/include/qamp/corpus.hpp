#pragma once

#include "qamp/amp.hpp"

namespace qamp::corpus {

/// One qubit, two rank-1 projectors: |0><0| in layer 1 and |a><a| with
/// |a> = cos(a)|0> + sin(a)|1> in layer 2.
qsat::QSatSystem angle_system(double a);

/// Path (or even cycle) of n qubits with a Haar-random rank-1 two-qubit
/// projector per edge; two layers.
qsat::QSatSystem rank1_chain(int n, bool cycle, std::uint64_t seed);

walks::Graph k4();
walks::Graph prism();

/// Diagonal anti-agreement system: per edge the projector onto equal
/// assignments of two q-dimensional qudits.
amp::QuantumWalkSystem diagonal_neq_system(const walks::Graph& g, int q);

amp::ClassicalCSP neq_csp(const walks::Graph& g, int alphabet);

/// Per-edge random allowed-pair tables (each pair allowed with prob 1/2,
/// resampled to keep every table non-trivial).
amp::ClassicalCSP random_csp(const walks::Graph& g, int alphabet,
                             std::uint64_t seed);

/// Each edge a rank-1 projector onto cos(a)|01> + e^{i phase} sin(a)|10>
/// with a seeded per-edge phase.
amp::QuantumWalkSystem rank1_entangled_system(const walks::Graph& g, double a,
                                              std::uint64_t seed);

}  // namespace qamp::corpus
