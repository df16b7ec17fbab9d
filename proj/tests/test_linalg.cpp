#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "qamp/linalg.hpp"

using namespace qamp;

namespace {

Matrix random_hermitian(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
  return (m + m.adjoint()) / 2.0;
}

Matrix random_projector(Eigen::Index d, Eigen::Index rank, std::uint64_t seed) {
  Matrix p = Matrix::Zero(d, d);
  Matrix basis(d, rank);
  for (Eigen::Index j = 0; j < rank; ++j)
    basis.col(j) = linalg::random_state(d, linalg::split_seed(seed, j));
  Eigen::HouseholderQR<Matrix> qr(basis);
  Matrix q = Matrix(qr.householderQ()).leftCols(rank);
  return q * q.adjoint();
}

}  // namespace

TEST_CASE("hermitian_eig identity and diagonal") {
  auto [vals, vecs] = linalg::hermitian_eig(Matrix::Identity(4, 4));
  for (int i = 0; i < 4; ++i) CHECK(vals(i) == doctest::Approx(1.0));
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  auto [zvals, zvecs] = linalg::hermitian_eig(z);
  CHECK(zvals(0) == doctest::Approx(-1.0));
  CHECK(zvals(1) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig residuals on random matrix") {
  Matrix m = random_hermitian(32, 11);
  auto [vals, vecs] = linalg::hermitian_eig(m);
  double scale = m.norm();
  for (Eigen::Index i = 0; i < 32; ++i) {
    Vector v = vecs.vectors.col(i);
    CHECK((m * v - vals(i) * v).norm() <= 1e-8 * scale);
  }
  CHECK((vecs.vectors.adjoint() * vecs.vectors - Matrix::Identity(32, 32))
            .norm() <= 1e-8);
}

TEST_CASE("hermitian_eig rejects non-Hermitian") {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(linalg::hermitian_eig(m), NotHermitian);
}

TEST_CASE("lowest_eigenvalue simple operators") {
  // |11><11| on 2 qubits has a nontrivial kernel.
  Matrix p = Matrix::Zero(4, 4);
  p(3, 3) = 1;
  double lo = linalg::lowest_eigenvalue(
      [&](const Vector& v) { return Vector(p * v); }, 4);
  CHECK(lo == doctest::Approx(0.0).epsilon(1e-8));
  // |0><0| + |1><1| on one qubit is the identity.
  Matrix id2 = Matrix::Identity(2, 2);
  double one = linalg::lowest_eigenvalue(
      [&](const Vector& v) { return Vector(id2 * v); }, 2);
  CHECK(one == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("lowest_eigenvalue matches dense on a random projector sum") {
  const Eigen::Index d = 64;  // six qubits
  Matrix sum = Matrix::Zero(d, d);
  for (int i = 0; i < 5; ++i) sum += random_projector(d, 20, 100 + i);
  auto [vals, vecs] = linalg::hermitian_eig(sum);
  double lo = linalg::lowest_eigenvalue(
      [&](const Vector& v) { return Vector(sum * v); }, d, 1e-10, 3);
  CHECK(std::abs(lo - vals(0)) <= 1e-8);
}

TEST_CASE("kernel of rank-1 projector and identity") {
  Matrix p = Matrix::Zero(4, 4);
  p(3, 3) = 1;
  auto ker = linalg::kernel(p);
  CHECK(ker.count() == 3);
  for (Eigen::Index j = 0; j < 3; ++j)
    CHECK(std::abs(ker.vectors(3, j)) <= 1e-10);
  CHECK(linalg::kernel(Matrix::Identity(3, 3)).empty());
}

TEST_CASE("kernel matches brute-force common eigenvectors for diagonal sums") {
  // Diagonal penalties: kernel = basis states where every penalty is zero.
  const Eigen::Index d = 16;
  std::mt19937_64 rng(5);
  Eigen::VectorXd pen = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < d; ++i) pen(i) = (rng() % 3 == 0) ? 0.0 : 1.0 + double(rng() % 5);
  Matrix m = pen.cast<Complex>().asDiagonal();
  auto ker = linalg::kernel(m);
  int expect = 0;
  for (Eigen::Index i = 0; i < d; ++i)
    if (pen(i) == 0.0) ++expect;
  CHECK(ker.count() == expect);
}

TEST_CASE("intersect of subspaces") {
  Matrix a(4, 2), b(4, 2);
  a.setZero();
  b.setZero();
  a(0, 0) = 1;  // |00>
  a(1, 1) = 1;  // |01>
  b(0, 0) = 1;  // |00>
  b(2, 1) = 1;  // |10>
  SubspaceBasis sa{4, a}, sb{4, b};
  auto inter = linalg::intersect(sa, sb);
  REQUIRE(inter.count() == 1);
  CHECK(std::abs(std::abs(inter.vectors(0, 0)) - 1.0) <= 1e-9);

  Matrix oa(2, 1), ob(2, 1);
  oa << 1, 0;
  ob << 0, 1;
  CHECK(linalg::intersect(SubspaceBasis{2, oa}, SubspaceBasis{2, ob}).empty());
}

TEST_CASE("intersect matches rank computation on random subspaces") {
  const Eigen::Index d = 8;
  for (int trial = 0; trial < 5; ++trial) {
    Matrix pa = random_projector(d, 5, 40 + trial);
    Matrix pb = random_projector(d, 5, 60 + trial);
    auto ka = linalg::kernel(Matrix(Matrix::Identity(d, d) - pa));
    auto kb = linalg::kernel(Matrix(Matrix::Identity(d, d) - pb));
    auto inter = linalg::intersect(ka, kb);
    // dim(A cap B) = dim A + dim B - rank([P_a stacked P_b range]) via
    // rank(P_a + P_b penalties): compare with eigen count of (I-Pa)+(I-Pb).
    Matrix pen = (Matrix::Identity(d, d) - pa) + (Matrix::Identity(d, d) - pb);
    auto [vals, vecs] = linalg::hermitian_eig(pen);
    int zero = 0;
    for (Eigen::Index i = 0; i < d; ++i)
      if (vals(i) <= 1e-8) ++zero;
    CHECK(inter.count() == zero);
    // Containment: each intersection vector lies in both spans.
    for (Eigen::Index j = 0; j < inter.count(); ++j) {
      Vector v = inter.vectors.col(j);
      CHECK((pa * v - v).norm() <= 1e-8);
      CHECK((pb * v - v).norm() <= 1e-8);
    }
  }
}

TEST_CASE("principal_cos basics") {
  double a = M_PI / 6;
  Matrix u(2, 1), w(2, 1);
  u << 1, 0;
  w << std::cos(a), std::sin(a);
  SubspaceBasis su{2, u}, sw{2, w};
  CHECK(linalg::principal_cos(su, sw) == doctest::Approx(std::cos(a)));
  CHECK(linalg::principal_cos(su, su) == doctest::Approx(1.0));
  CHECK(std::abs(linalg::principal_cos(su, sw) -
                 linalg::principal_cos(sw, su)) <= 1e-12);
  CHECK_THROWS_AS(linalg::principal_cos(SubspaceBasis{2, Matrix(2, 0)}, su),
                  EmptySubspace);
}

TEST_CASE("principal_cos matches dense SVD on random subspaces") {
  const Eigen::Index d = 8;
  Matrix pa = random_projector(d, 3, 70);
  Matrix pb = random_projector(d, 4, 71);
  auto ka = linalg::kernel(Matrix(Matrix::Identity(d, d) - pa));
  auto kb = linalg::kernel(Matrix(Matrix::Identity(d, d) - pb));
  Matrix cross = ka.vectors.adjoint() * kb.vectors;
  Eigen::JacobiSVD<Matrix> svd(cross);
  CHECK(linalg::principal_cos(ka, kb) ==
        doctest::Approx(svd.singularValues()(0)).epsilon(1e-10));
}

TEST_CASE("operator_norm basics") {
  Matrix p = random_projector(6, 3, 80);
  CHECK(linalg::operator_norm(p) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(linalg::operator_norm(Matrix::Zero(3, 3)) == doctest::Approx(0.0));
  // Product of two rank-1 projectors at angle pi/4.
  double a = M_PI / 4;
  Matrix q0(2, 2), q1(2, 2);
  q0 << 1, 0, 0, 0;
  Vector va(2);
  va << std::cos(a), std::sin(a);
  q1 = va * va.adjoint();
  CHECK(linalg::operator_norm(Matrix(q0 * q1)) ==
        doctest::Approx(std::cos(a)).epsilon(1e-10));
}

TEST_CASE("apply_local matches Kronecker construction") {
  std::vector<int> dims = {2, 2, 2, 2};
  Matrix op = random_hermitian(4, 90);
  std::vector<int> support = {2, 0};
  Matrix lifted = linalg::lift_local(op, support, dims);
  Vector v = linalg::random_state(16, 91);
  Vector via_apply = linalg::apply_local(op, support, dims, v);
  CHECK((lifted * v - via_apply).norm() <= 1e-10);

  // Identity op leaves the state alone.
  CHECK((linalg::apply_local(Matrix::Identity(4, 4), support, dims, v) - v)
            .norm() <= 1e-12);
}

TEST_CASE("apply_local little-endian convention") {
  // |1><1| on qudit 0 annihilates |10> (qudit 0 least significant => index 1
  // is qudit0=1, qudit1=0).
  std::vector<int> dims = {2, 2};
  Vector v = Vector::Zero(4);
  v(2) = 1;  // qudit0 = 0, qudit1 = 1
  Matrix p1(2, 2);
  p1 << 0, 0, 0, 1;
  Vector out = linalg::apply_local(p1, {0}, dims, v);
  CHECK(out.norm() <= 1e-12);
  v.setZero();
  v(1) = 1;  // qudit0 = 1
  out = linalg::apply_local(p1, {0}, dims, v);
  CHECK((out - v).norm() <= 1e-12);
}

TEST_CASE("apply_local rejects bad support") {
  std::vector<int> dims = {2, 2};
  Vector v = Vector::Zero(4);
  CHECK_THROWS_AS(
      linalg::apply_local(Matrix::Identity(2, 2), {5}, dims, v), BadSupport);
  CHECK_THROWS_AS(
      linalg::apply_local(Matrix::Identity(4, 4), {0, 0}, dims, v), BadSupport);
}

TEST_CASE("random_state is normalized and deterministic") {
  Vector a = linalg::random_state(32, 7);
  Vector b = linalg::random_state(32, 7);
  Vector c = linalg::random_state(32, 8);
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((a - b).norm() <= 1e-15);
  CHECK((a - c).norm() > 1e-3);
}

TEST_CASE("projector invariants for produced projectors") {
  for (int i = 0; i < 3; ++i) {
    Matrix p = random_projector(8, 3 + i, 200 + i);
    CHECK((p * p - p).norm() <= 1e-8);
    CHECK((p - p.adjoint()).norm() <= 1e-8);
  }
}
