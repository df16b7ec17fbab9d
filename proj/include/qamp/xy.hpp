#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qamp/qsat.hpp"

namespace qamp::xy {

using qsat::QSatSystem;

/// Closure of a layer-1 apex constraint downward through the layers by
/// support intersection.
struct Pyramid {
  int apex = -1;
  std::vector<std::vector<int>> members;  // constraint ids per layer
  std::vector<int> support;               // sorted qudit indices
  Eigen::Index local_dim = 0;

  std::vector<int> all_members() const;
  std::vector<int> local_dims(const QSatSystem& sys) const;
  /// Position of each support qudit within the pyramid-local index.
  int local_index(int qudit) const;
};

/// Per-pyramid X_b / Y splitting of the pyramid-local space.
struct PyramidSpaces {
  std::vector<std::pair<std::vector<int>, SubspaceBasis>> x_spaces;
  SubspaceBasis y_space;
  Matrix p_y;  // dense projector onto Y, on the pyramid-local space
  double theta = 0.0;
  bool theta_exact = true;
};

struct XYDecomposition {
  std::vector<Pyramid> pyramids;
  std::vector<PyramidSpaces> spaces;

  double theta() const;       // max over pyramids
  bool theta_exact() const;   // all pyramids exact
};

/// Sector label per pyramid: kY for the Y space, else an x_spaces index.
inline constexpr int kY = -1;

Pyramid build_pyramid(const QSatSystem& sys, int apex);

/// Greedy maximal disjoint family in apex_priority order (skeleton only;
/// spaces/theta are filled by decompose / compute_theta).
XYDecomposition build_pyramids(const QSatSystem& sys,
                               const std::vector<int>& apex_priority);

/// X_b = kernel of sum (Q - b_Q I)^2 on the pyramid space; Y = complement.
PyramidSpaces xy_decompose(const Pyramid& pyr, const QSatSystem& sys);

/// Member constraint matrices lifted to the pyramid-local space.
std::vector<Matrix> pyramid_constraints(const Pyramid& pyr,
                                        const QSatSystem& sys);

enum class ThetaMode { exact, sampled };

inline constexpr std::int64_t kThetaCap = 10'000'000;

/// Max over all signed ordered products of ||P_Y Q~_0...Q~_N P_Y||.
/// Exact enumeration when (N+1)! 2^(N+1) <= cap, otherwise seeded sampling
/// with the exactness flag cleared.
std::pair<double, bool> compute_theta(const Pyramid& pyr,
                                      const PyramidSpaces& spaces,
                                      const QSatSystem& sys,
                                      ThetaMode mode = ThetaMode::exact,
                                      std::int64_t cap = kThetaCap,
                                      std::uint64_t seed = 0,
                                      int samples = 20000);

/// Enumeration core on explicit local matrices (exposed for oracle tests).
double theta_enumerate(const std::vector<Matrix>& constraints,
                       const Matrix& y_basis, std::int64_t cap);
double theta_sampled(const std::vector<Matrix>& constraints,
                     const Matrix& y_basis, int samples, std::uint64_t seed);

/// Builds skeleton, spaces and theta in one go.
XYDecomposition decompose(const QSatSystem& sys,
                          const std::vector<int>& apex_priority,
                          std::int64_t theta_cap = kThetaCap,
                          std::uint64_t seed = 0);

/// Applies a dense pyramid-local operator to a full-space state.
Vector apply_pyramid_op(const XYDecomposition& dec, std::size_t p,
                        const QSatSystem& sys, const Matrix& local_op,
                        const Vector& v);

/// P_nu for a per-pyramid label assignment (kY or an x_spaces index).
Vector apply_sector(const XYDecomposition& dec, const QSatSystem& sys,
                    const std::vector<int>& labels, const Vector& v);

/// P_s psi for s = 0..#pyramids (s counts Y labels).
std::vector<Vector> coarse_components(const XYDecomposition& dec,
                                      const QSatSystem& sys, const Vector& psi);
RealVector coarse_weights(const XYDecomposition& dec, const QSatSystem& sys,
                          const Vector& psi);

/// Projection onto <= ell violations in one layer.
Vector project_le(const QSatSystem& sys, int layer, int ell, const Vector& psi);

/// Layer-i constraint ids inside / outside the decomposition's pyramids.
std::vector<int> inside_ids(const XYDecomposition& dec, const QSatSystem& sys,
                            int layer);
std::vector<int> outside_ids(const XYDecomposition& dec, const QSatSystem& sys,
                             int layer);

/// Pi^pyr_{i,j}: exactly j violations among the inside constraints of layer i.
Vector project_exact_inside(const XYDecomposition& dec, const QSatSystem& sys,
                            int layer, int j, const Vector& psi);
/// Pi^rest_{i,m}: <= m violations among the outside constraints of layer i.
Vector project_le_outside(const XYDecomposition& dec, const QSatSystem& sys,
                          int layer, int m, const Vector& psi);

}  // namespace qamp::xy
