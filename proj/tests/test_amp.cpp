#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "qamp/amp.hpp"
#include "qamp/corpus.hpp"

using namespace qamp;

namespace {

walks::Graph c4() {
  return walks::Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

double brute_force_min_unsat_t(const amp::ClassicalCSP& csp, int t) {
  int n = csp.graph.n;
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) total *= csp.alphabet;
  double best = 1.0;
  for (std::int64_t code = 0; code < total; ++code) {
    amp::Assignment a(n);
    std::int64_t rest = code;
    for (int i = 0; i < n; ++i) {
      a[i] = static_cast<int>(rest % csp.alphabet);
      rest /= csp.alphabet;
    }
    best = std::min(best, t == 0 ? amp::unsat(csp, a)
                                 : amp::unsat_t(csp, a, t));
  }
  return best;
}

double k_eff_for(const amp::QuantumWalkSystem& qws) {
  auto cover = detect::cover_count(qws.base);
  auto p = detect::system_params(qws.base, cover, 0);
  double lambda = walks::spectral(qws.graph).lambda;
  return detect::k_branch_constants(p, lambda).K_eff;
}

}  // namespace

TEST_CASE("unsat on K4 inequality constraints") {
  auto csp = corpus::neq_csp(corpus::k4(), 2);
  amp::Assignment bipart = {0, 0, 1, 1};
  CHECK(amp::unsat(csp, bipart) == doctest::Approx(1.0 / 3.0));
  CHECK(brute_force_min_unsat_t(csp, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(brute_force_min_unsat_t(csp, 0) >= 1.0 / 6.0);
  // Proper 4-coloring satisfies everything.
  auto csp4 = corpus::neq_csp(corpus::k4(), 4);
  amp::Assignment proper = {0, 1, 2, 3};
  CHECK(amp::unsat(csp4, proper) == 0.0);
  CHECK(amp::violated_edges(csp4, proper) == std::vector<char>(6, 0));
}

TEST_CASE("unsat matches a naive edge loop on random instances") {
  auto g = walks::random_regular(10, 3, 4);
  auto csp = corpus::random_csp(g, 3, 5);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    amp::Assignment a(g.n);
    for (auto& v : a) v = static_cast<int>(rng() % 3);
    int bad = 0;
    for (int e = 0; e < g.num_edges(); ++e)
      if (!csp.tables[e][a[g.edges[e].first] * 3 + a[g.edges[e].second]]) ++bad;
    CHECK(amp::unsat(csp, a) ==
          doctest::Approx(double(bad) / g.num_edges()).epsilon(1e-12));
  }
}

TEST_CASE("unsat_t basics and enumeration oracle") {
  auto csp = corpus::neq_csp(c4(), 2);
  amp::Assignment proper = {0, 1, 0, 1};
  for (int t = 1; t <= 4; ++t) CHECK(amp::unsat_t(csp, proper, t) == 0.0);

  amp::Assignment one_bad = {0, 1, 0, 0};  // only edge (2,3) fails
  CHECK(amp::unsat_t(csp, one_bad, 1) ==
        doctest::Approx(amp::unsat(csp, one_bad)).epsilon(1e-12));
  // t=2: count violating walks among the 16 directly.
  auto bad = amp::violated_edges(csp, one_bad);
  std::int64_t viol = 0, total = 0;
  walks::enumerate_walks(c4(), 2, [&](const walks::Walk& w) {
    ++total;
    bool hit = false;
    for (int e : w.edges) hit |= bad[e];
    viol += hit ? 1 : 0;
  });
  CHECK(total == 16);
  CHECK(amp::unsat_t(csp, one_bad, 2) ==
        doctest::Approx(double(viol) / total).epsilon(1e-12));
}

TEST_CASE("c_of_lambda values and domain") {
  CHECK(amp::c_of_lambda(0.0) == doctest::Approx(0.25));
  CHECK(amp::c_of_lambda(0.5) == doctest::Approx(1.0 / 6.0));
  CHECK(amp::c_of_lambda(1.0 / 3.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(amp::c_of_lambda(1.0), InvalidLambda);
  CHECK_THROWS_AS(amp::c_of_lambda(-0.1), InvalidLambda);
}

TEST_CASE("verify_classical_amp on K4 colorings") {
  auto csp = corpus::neq_csp(corpus::k4(), 2);
  amp::Assignment best = {0, 0, 1, 1};
  for (int t = 2; t <= 6; ++t) {
    auto rep = amp::verify_classical_amp(csp, best, t);
    CHECK(rep.pass);
    CHECK(rep.lambda == doctest::Approx(1.0 / 3.0));
    CHECK(rep.unsat_g == doctest::Approx(1.0 / 3.0));
    CHECK(rep.unsat_gt >= rep.rhs - 1e-10);
  }
  // Satisfied assignment: both sides zero.
  auto csp4 = corpus::neq_csp(corpus::k4(), 4);
  auto rep = amp::verify_classical_amp(csp4, {0, 1, 2, 3}, 3);
  CHECK(rep.pass);
  CHECK(rep.unsat_gt == 0.0);
  CHECK(rep.rhs == 0.0);
}

TEST_CASE("verify_classical_amp rejects bipartite graphs") {
  auto csp = corpus::neq_csp(c4(), 2);
  CHECK_THROWS_AS(amp::verify_classical_amp(csp, {0, 0, 0, 0}, 2),
                  InvalidLambda);
}

TEST_CASE("verify_classical_amp on random regular instances") {
  auto g = walks::random_regular(20, 3, 17);
  if (walks::spectral(g).bipartite) return;  // seed chosen non-bipartite
  auto csp = corpus::random_csp(g, 2, 18);
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    amp::Assignment a(g.n);
    for (auto& v : a) v = static_cast<int>(rng() % 2);
    for (int t : {1, 2, 4, 8}) {
      auto rep = amp::verify_classical_amp(csp, a, t);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("verify_moments on corpus masks") {
  auto g = corpus::k4();
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<char> bad(g.num_edges());
    int nbad = 0;
    for (auto& b : bad) {
      b = (rng() % 4 == 0) ? 1 : 0;
      nbad += b;
    }
    if (nbad == 0) bad[trial % 6] = 1;
    for (int t : {2, 4, 6}) {
      auto rep = amp::verify_moments(g, bad, t);
      CHECK(rep.lb_pass);
      CHECK(rep.pair_pass);
      CHECK(rep.pr_hit >= rep.second_moment_lb - 1e-10);
    }
  }
}

TEST_CASE("build_walk_projector worked example on a path") {
  auto path = walks::Graph::from_edges(3, {{0, 1}, {1, 2}});
  Matrix q = Matrix::Zero(4, 4);
  q(3, 3) = 1;  // |11><11|
  auto qws = amp::make_walk_system(path, 2, {q, q});
  walks::Walk w;
  w.vertices = {0, 1, 2};
  w.edges = {0, 1};
  auto proj = amp::build_walk_projector(qws, w);
  CHECK(proj.support == std::vector<int>{0, 1, 2});
  CHECK(proj.projector.rows() == 8);
  CHECK((proj.projector * proj.projector - proj.projector).norm() <= 1e-9);
  // Accepting space excludes exactly {110, 011, 111} patterns: rank 3.
  CHECK(std::lround(proj.projector.trace().real()) == 3);
}

TEST_CASE("build_walk_projector edge cases") {
  auto g = corpus::k4();
  // Zero projectors: every walk constraint is zero.
  std::vector<Matrix> zeros(6, Matrix::Zero(4, 4));
  auto sat = amp::make_walk_system(g, 2, zeros);
  std::mt19937_64 rng(2);
  auto w = walks::sample_walk(g, 2, rng);
  CHECK(amp::build_walk_projector(sat, w).projector.norm() <= 1e-12);
  // t=1 walk reproduces the base edge projector.
  auto ent = corpus::rank1_entangled_system(g, M_PI / 4, 9);
  walks::Walk w1;
  auto [u, v] = g.edges[0];
  w1.vertices = {u, v};
  w1.edges = {0};
  auto p1 = amp::build_walk_projector(ent, w1);
  CHECK((p1.projector - ent.base.constraints[0].projector).norm() <= 1e-9);
}

TEST_CASE("walk projector kernel equals intersection of edge kernels") {
  auto ent = corpus::rank1_entangled_system(corpus::k4(), M_PI / 4, 29);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    auto w = walks::sample_walk(ent.graph, 3, rng);
    auto proj = amp::build_walk_projector(ent, w);
    Eigen::Index d = proj.projector.rows();
    // Kernel of Q_e within the walk support.
    Matrix acc = Matrix::Identity(d, d) - proj.projector;
    // Sum of walk-edge projectors restricted to the same support.
    std::vector<int> dims(proj.support.size(), 2);
    Matrix sum = Matrix::Zero(d, d);
    for (int e : w.edges) {
      const auto& c = ent.base.constraints[e];
      std::vector<int> local;
      for (int qd : c.support) {
        auto it = std::find(proj.support.begin(), proj.support.end(), qd);
        REQUIRE(it != proj.support.end());
        local.push_back(static_cast<int>(it - proj.support.begin()));
      }
      sum += linalg::lift_local(c.projector, local, dims);
    }
    // Double inclusion: acc range annihilated by every edge projector, and
    // the joint kernel is contained in the accepting range.
    CHECK((sum * acc).norm() <= 1e-8);
    auto ker = linalg::kernel(sum);
    for (Eigen::Index j = 0; j < ker.count(); ++j) {
      Vector x = ker.vectors.col(j);
      CHECK((acc * x - x).norm() <= 1e-8);
    }
  }
}

TEST_CASE("diagonal quantum systems reduce to classical minima") {
  auto qws = corpus::diagonal_neq_system(corpus::k4(), 2);
  auto csp = corpus::neq_csp(corpus::k4(), 2);
  for (int t = 1; t <= 2; ++t) {
    double quantum = amp::qunsat_ground_t(qws, t);
    double classical = brute_force_min_unsat_t(csp, t);
    CHECK(quantum == doctest::Approx(classical).epsilon(1e-8));
  }
  // Basis states embed classical assignments exactly.
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    amp::Assignment a(4);
    for (auto& v : a) v = static_cast<int>(rng() % 2);
    Vector psi = Vector::Zero(qws.base.total_dim());
    Eigen::Index idx = 0;
    for (int i = 3; i >= 0; --i) idx = idx * 2 + a[i];
    psi(idx) = 1;
    CHECK(amp::qunsat(qws, psi) ==
          doctest::Approx(amp::unsat(csp, a)).epsilon(1e-12));
  }
}

TEST_CASE("qunsat_ground_t is monotone in t") {
  auto ent = corpus::rank1_entangled_system(corpus::k4(), M_PI / 4, 41);
  double prev = -1;
  for (int t = 1; t <= 3; ++t) {
    double g = amp::qunsat_ground_t(ent, t);
    CHECK(g >= prev - 1e-8);
    prev = g;
  }
}

TEST_CASE("satisfiable systems have zero amplified QUNSAT") {
  // |11><11| penalties on K4 edges: all-zeros satisfies everything.
  Matrix q = Matrix::Zero(4, 4);
  q(3, 3) = 1;
  auto sat = amp::make_walk_system(corpus::k4(), 2, std::vector<Matrix>(6, q));
  for (int t = 1; t <= 2; ++t)
    CHECK(amp::qunsat_ground_t(sat, t) <= 1e-9);
  auto rep = amp::verify_quantum_amp(sat, 2, 1.0 / 64.0);
  CHECK(rep.amp_pass);
  CHECK(rep.combination_pass);
}

TEST_CASE("verify_quantum_amp on the diagonal and entangled toys") {
  auto diag = corpus::diagonal_neq_system(corpus::k4(), 2);
  double kd = k_eff_for(diag);
  double prev = -1;
  for (int t = 1; t <= 3; ++t) {
    auto rep = amp::verify_quantum_amp(diag, t, kd);
    CHECK(rep.amp_pass);
    CHECK(rep.combination_pass);
    CHECK(rep.qunsat_gt >= prev - 1e-8);
    prev = rep.qunsat_gt;
  }

  auto ent = corpus::rank1_entangled_system(corpus::k4(), M_PI / 4, 43);
  double ke = k_eff_for(ent);
  for (int t = 1; t <= 2; ++t) {
    auto rep = amp::verify_quantum_amp(ent, t, ke);
    CHECK(rep.amp_pass);
    CHECK(rep.combination_pass);
    CHECK(rep.qunsat_g > 0);  // frustrated toy
  }
}

TEST_CASE("sector reduction on diagonal instances") {
  auto diag = corpus::diagonal_neq_system(corpus::k4(), 2);
  for (int layer = 0; layer < diag.base.num_layers(); ++layer) {
    for (int t = 1; t <= 2; ++t) {
      auto rep = amp::verify_sector_reduction(diag, layer, t);
      CHECK(rep.pass);
      CHECK(rep.states == 16);
      CHECK(rep.worst_eq_error <= 1e-9);
    }
  }
  auto ent = corpus::rank1_entangled_system(corpus::k4(), M_PI / 4, 47);
  CHECK_THROWS_AS(amp::verify_sector_reduction(ent, 0, 1), BadSector);
}
