#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "qamp/errors.hpp"

namespace qamp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using MatVec = std::function<Vector(const Vector&)>;

inline constexpr double kRankTol = 1e-8;
inline constexpr Eigen::Index kDenseCap = 4096;

/// Orthonormal basis of a subspace, stored as columns.
struct SubspaceBasis {
  Eigen::Index ambient_dim = 0;
  Matrix vectors;  // ambient_dim x count, orthonormal columns

  Eigen::Index count() const { return vectors.cols(); }
  bool empty() const { return vectors.cols() == 0; }
  Matrix projector() const;
};

namespace linalg {

/// Full eigendecomposition of a Hermitian matrix, eigenvalues ascending.
std::pair<RealVector, SubspaceBasis> hermitian_eig(const Matrix& m,
                                                   double tol = 1e-8);

/// Smallest eigenvalue of a Hermitian PSD operator given only its action.
/// Lanczos with full reorthogonalization; deterministic for a fixed seed.
double lowest_eigenvalue(const MatVec& matvec, Eigen::Index dim,
                         double tol = 1e-8, std::uint64_t seed = 0,
                         int max_matvecs = 5000);

/// Orthonormal basis of the eigenvalue-<=tol eigenspace of a Hermitian PSD m.
SubspaceBasis kernel(const Matrix& m, double tol = kRankTol);

/// span(a) `intersect` span(b), via the kernel of (I-P_a) + (I-P_b).
SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b,
                        double tol = kRankTol);

/// Largest singular value of the cross-Gram matrix a^dag b (= cos of the
/// smallest principal angle between the subspaces).
double principal_cos(const SubspaceBasis& a, const SubspaceBasis& b);

/// Largest singular value.
double operator_norm(const Matrix& m);

/// Applies (op on `support`) tensor (identity elsewhere) to v.
/// Qudit 0 is least significant in the flattened index; the first entry of
/// `support` is least significant within op's index.
Vector apply_local(const Matrix& op, const std::vector<int>& support,
                   const std::vector<int>& dims, const Vector& v);

/// Dense embedding of a local operator into the full space (oracle/helper).
Matrix lift_local(const Matrix& op, const std::vector<int>& support,
                  const std::vector<int>& dims);

/// Total dimension prod(dims); throws DimensionTooLarge past 2^62.
Eigen::Index total_dim(const std::vector<int>& dims);

/// Seeded Haar-random normalized state.
Vector random_state(Eigen::Index dim, std::uint64_t seed);

/// Derives an independent stream seed from (seed, task index).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace linalg
}  // namespace qamp
