#include "qamp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qamp {

Matrix SubspaceBasis::projector() const {
  if (vectors.cols() == 0) return Matrix::Zero(ambient_dim, ambient_dim);
  return vectors * vectors.adjoint();
}

namespace linalg {

std::pair<RealVector, SubspaceBasis> hermitian_eig(const Matrix& m,
                                                   double tol) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("hermitian_eig needs a square matrix");
  if (m.rows() > kDenseCap)
    throw DimensionTooLarge("dim " + std::to_string(m.rows()));
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).norm() > tol * scale)
    throw NotHermitian("asymmetry " + std::to_string((m - m.adjoint()).norm()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw NoConvergence("dense eigensolver failed");
  SubspaceBasis basis{m.rows(), es.eigenvectors()};
  return {es.eigenvalues(), std::move(basis)};
}

double lowest_eigenvalue(const MatVec& matvec, Eigen::Index dim, double tol,
                         std::uint64_t seed, int max_matvecs) {
  if (dim < 1) throw DimensionMismatch("dim must be >= 1");
  if (dim == 1) {
    Vector e0 = Vector::Unit(1, 0);
    return matvec(e0)(0).real();
  }

  int used = 0;
  auto apply = [&](const Vector& v) {
    if (++used > max_matvecs)
      throw NoConvergence("matvec budget exhausted");
    return matvec(v);
  };

  std::mt19937_64 rng(seed ^ 0x5DEECE66Dull);
  std::normal_distribution<double> gauss;
  Vector v0(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v0(i) = Complex(gauss(rng), gauss(rng));
  v0.normalize();

  double best = 0.0;
  bool have_best = false;
  const int max_steps = static_cast<int>(std::min<Eigen::Index>(dim, 400));

  for (int restart = 0; restart < 50; ++restart) {
    std::vector<Vector> basis;
    basis.reserve(max_steps + 1);
    basis.push_back(v0);
    std::vector<double> alpha, beta;
    Vector w;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    bool converged = false;

    for (int j = 0; j < max_steps; ++j) {
      w = apply(basis[j]);
      double a = std::real(basis[j].dot(w));
      alpha.push_back(a);
      w -= a * basis[j];
      if (j > 0) w -= beta[j - 1] * basis[j - 1];
      for (const auto& u : basis) w -= u.dot(w) * u;  // full reorth
      double b = w.norm();

      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(j + 1, j + 1);
      for (int i = 0; i <= j; ++i) T(i, i) = alpha[i];
      for (int i = 0; i + 1 <= j; ++i) T(i, i + 1) = T(i + 1, i) = beta[i];
      tri.compute(T);
      double ritz = tri.eigenvalues()(0);
      double resid = b * std::abs(tri.eigenvectors()(j, 0));
      if (resid <= tol || b < 1e-14 || j + 1 == static_cast<int>(dim)) {
        best = ritz;
        have_best = true;
        converged = resid <= tol || b < 1e-14 || j + 1 == static_cast<int>(dim);
        if (converged) break;
      }
      if (b < 1e-14) break;
      beta.push_back(b);
      basis.push_back(w / b);
      if (used >= max_matvecs - 1) break;
    }
    if (converged && have_best) return best;

    // restart from the current Ritz vector
    if (!basis.empty() && !alpha.empty()) {
      Eigen::VectorXd y = tri.eigenvectors().col(0);
      Vector r = Vector::Zero(dim);
      for (int i = 0; i < y.size(); ++i) r += y(i) * basis[i];
      double n = r.norm();
      if (n > 1e-14) v0 = r / n;
    }
  }
  throw NoConvergence("lanczos did not converge");
}

SubspaceBasis kernel(const Matrix& m, double tol) {
  auto [vals, basis] = hermitian_eig(m);
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  Eigen::Index cnt = 0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) <= tol * scale) ++cnt;
  SubspaceBasis out{m.rows(), basis.vectors.leftCols(cnt)};
  return out;
}

SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b,
                        double tol) {
  if (a.ambient_dim != b.ambient_dim)
    throw DimensionMismatch("ambient dims differ");
  const Eigen::Index d = a.ambient_dim;
  Matrix m = 2.0 * Matrix::Identity(d, d) - a.projector() - b.projector();
  return kernel(m, tol);
}

double principal_cos(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.empty() || b.empty()) throw EmptySubspace("principal_cos");
  if (a.ambient_dim != b.ambient_dim)
    throw DimensionMismatch("ambient dims differ");
  Matrix gram = a.vectors.adjoint() * b.vectors;
  double c = operator_norm(gram);
  return std::min(c, 1.0);
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  // sqrt of the largest eigenvalue of m^dag m; exact and deterministic
  const Matrix& a = m;
  Matrix gram = (a.rows() <= a.cols()) ? Matrix(a * a.adjoint())
                                       : Matrix(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, top));
}

Eigen::Index total_dim(const std::vector<int>& dims) {
  Eigen::Index d = 1;
  for (int q : dims) {
    if (q < 1) throw BadSupport("qudit dimension < 1");
    if (d > (Eigen::Index(1) << 60) / q)
      throw DimensionTooLarge("total dimension overflow");
    d *= q;
  }
  return d;
}

Vector apply_local(const Matrix& op, const std::vector<int>& support,
                   const std::vector<int>& dims, const Vector& v) {
  const int n = static_cast<int>(dims.size());
  Eigen::Index full = total_dim(dims);
  if (v.size() != full) throw DimensionMismatch("state dim mismatch");

  Eigen::Index local = 1;
  std::vector<Eigen::Index> sup_stride(support.size());
  std::vector<char> in_support(n, 0);
  for (std::size_t j = 0; j < support.size(); ++j) {
    int q = support[j];
    if (q < 0 || q >= n) throw BadSupport("index out of range");
    if (in_support[q]) throw BadSupport("repeated index");
    in_support[q] = 1;
    local *= dims[q];
  }
  if (op.rows() != local || op.cols() != local)
    throw BadSupport("operator dim does not match support dims");

  std::vector<Eigen::Index> stride(n);
  Eigen::Index s = 1;
  for (int q = 0; q < n; ++q) {
    stride[q] = s;
    s *= dims[q];
  }
  Eigen::Index lstride = 1;
  for (std::size_t j = 0; j < support.size(); ++j) {
    sup_stride[j] = lstride;
    lstride *= dims[support[j]];
  }

  // rest-space qudits and their strides
  std::vector<int> rest;
  for (int q = 0; q < n; ++q)
    if (!in_support[q]) rest.push_back(q);
  Eigen::Index rest_dim = full / local;

  Vector out = Vector::Zero(full);
  Vector sub(local), subo(local);
  std::vector<int> rdig(rest.size(), 0);
  for (Eigen::Index r = 0; r < rest_dim; ++r) {
    Eigen::Index base = 0;
    for (std::size_t j = 0; j < rest.size(); ++j)
      base += Eigen::Index(rdig[j]) * stride[rest[j]];
    // gather
    for (Eigen::Index x = 0; x < local; ++x) {
      Eigen::Index idx = base, xx = x;
      for (std::size_t j = 0; j < support.size(); ++j) {
        idx += (xx % dims[support[j]]) * stride[support[j]];
        xx /= dims[support[j]];
      }
      sub(x) = v(idx);
    }
    subo.noalias() = op * sub;
    for (Eigen::Index x = 0; x < local; ++x) {
      Eigen::Index idx = base, xx = x;
      for (std::size_t j = 0; j < support.size(); ++j) {
        idx += (xx % dims[support[j]]) * stride[support[j]];
        xx /= dims[support[j]];
      }
      out(idx) = subo(x);
    }
    // increment rest digits
    for (std::size_t j = 0; j < rest.size(); ++j) {
      if (++rdig[j] < dims[rest[j]]) break;
      rdig[j] = 0;
    }
  }
  return out;
}

Matrix lift_local(const Matrix& op, const std::vector<int>& support,
                  const std::vector<int>& dims) {
  Eigen::Index full = total_dim(dims);
  if (full > kDenseCap) throw DimensionTooLarge("lift_local past dense cap");
  Matrix out(full, full);
  for (Eigen::Index c = 0; c < full; ++c)
    out.col(c) = apply_local(op, support, dims, Vector::Unit(full, c));
  return out;
}

Vector random_state(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  v.normalize();
  return v;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace linalg
}  // namespace qamp
