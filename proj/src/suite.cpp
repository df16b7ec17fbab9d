#include "qamp/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace qamp::suite {

namespace {

struct PreparedSystem {
  std::string name;
  qsat::QSatSystem sys;
  detect::Cover cover;
  detect::BoundParams p0;
  double angle = -1.0;  // set for the single-qubit angle family
};

struct PreparedToy {
  std::string name;
  amp::QuantumWalkSystem qws;
  detect::Cover cover;
  detect::BoundParams p0;
  double lambda = 0.0;
  bool diagonal = false;
};

struct Corpus {
  std::vector<PreparedSystem> two_layer;
  std::vector<PreparedToy> toys;
  std::vector<walks::Graph> regular_graphs;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

PreparedSystem prepare_system(std::string name, qsat::QSatSystem sys,
                              std::uint64_t seed) {
  PreparedSystem ps;
  ps.name = std::move(name);
  ps.sys = std::move(sys);
  ps.cover = detect::cover_count(ps.sys, xy::kThetaCap, seed);
  ps.p0 = detect::system_params(ps.sys, ps.cover, 0);
  return ps;
}

PreparedToy prepare_toy(std::string name, amp::QuantumWalkSystem qws,
                        bool diagonal, std::uint64_t seed) {
  PreparedToy toy;
  toy.name = std::move(name);
  toy.qws = std::move(qws);
  toy.diagonal = diagonal;
  toy.cover = detect::cover_count(toy.qws.base, xy::kThetaCap, seed);
  toy.p0 = detect::system_params(toy.qws.base, toy.cover, 0);
  toy.lambda = walks::spectral(toy.qws.graph).lambda;
  return toy;
}

walks::Graph usable_regular(int n, int d, std::uint64_t seed) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    walks::Graph g = walks::random_regular(n, d, linalg::split_seed(seed, i));
    try {
      auto sp = walks::spectral(g);
      if (!sp.bipartite && sp.lambda < 1.0 - 1e-9) return g;
    } catch (const Disconnected&) {
    }
  }
  throw Infeasible("no usable regular graph found");
}

Corpus prepare(const Options& opt, std::ostream* log) {
  Corpus c;
  auto note = [&](const std::string& s) {
    if (log) *log << "  [prepare] " << s << std::endl;
  };
  const double angles[] = {M_PI / 6, M_PI / 4, M_PI / 3};
  const char* angle_names[] = {"angle-pi6", "angle-pi4", "angle-pi3"};
  for (int i = 0; i < 3; ++i) {
    note(angle_names[i]);
    auto ps = prepare_system(angle_names[i], corpus::angle_system(angles[i]),
                             linalg::split_seed(opt.seed, 100 + i));
    ps.angle = angles[i];
    c.two_layer.push_back(std::move(ps));
  }
  for (int n : {4, 6, 8}) {
    note("path-" + std::to_string(n));
    c.two_layer.push_back(prepare_system(
        "path-" + std::to_string(n),
        corpus::rank1_chain(n, false, linalg::split_seed(opt.seed, 200 + n)),
        linalg::split_seed(opt.seed, 210 + n)));
    note("cycle-" + std::to_string(n));
    c.two_layer.push_back(prepare_system(
        "cycle-" + std::to_string(n),
        corpus::rank1_chain(n, true, linalg::split_seed(opt.seed, 220 + n)),
        linalg::split_seed(opt.seed, 230 + n)));
  }
  note("k4-diag");
  c.toys.push_back(prepare_toy("k4-diag",
                               corpus::diagonal_neq_system(corpus::k4(), 2),
                               true, linalg::split_seed(opt.seed, 300)));
  note("prism-diag");
  c.toys.push_back(prepare_toy("prism-diag",
                               corpus::diagonal_neq_system(corpus::prism(), 2),
                               true, linalg::split_seed(opt.seed, 301)));
  note("k4-ent");
  c.toys.push_back(prepare_toy(
      "k4-ent",
      corpus::rank1_entangled_system(corpus::k4(), M_PI / 4,
                                     linalg::split_seed(opt.seed, 310)),
      false, linalg::split_seed(opt.seed, 311)));
  note("prism-ent (theta enumeration, slow)");
  c.toys.push_back(prepare_toy(
      "prism-ent",
      corpus::rank1_entangled_system(corpus::prism(), M_PI / 4,
                                     linalg::split_seed(opt.seed, 320)),
      false, linalg::split_seed(opt.seed, 321)));
  for (int n : {20, 50, 200}) {
    note("3-regular n=" + std::to_string(n));
    c.regular_graphs.push_back(
        usable_regular(n, 3, linalg::split_seed(opt.seed, 400 + n)));
  }
  return c;
}

struct Accumulator {
  int checked = 0;
  int skipped = 0;
  int failures = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::string first_failure;

  void add(bool ok, double margin, const std::string& what) {
    ++checked;
    worst = std::min(worst, margin);
    if (!ok && ++failures == 1) first_failure = what;
  }
  void add(const detect::CheckReport& rep, const std::string& ctx) {
    checked += rep.trials;
    worst = std::min(worst, rep.worst_margin);
    if (!rep.passed()) {
      failures += static_cast<int>(rep.failures.size());
      if (first_failure.empty())
        first_failure = ctx + ": " + rep.failures.front();
    }
  }
  std::string summary() const {
    std::ostringstream os;
    os << "checks=" << checked;
    if (skipped) os << " skipped=" << skipped;
    if (std::isfinite(worst)) os << " worst_margin=" << worst;
    if (failures) os << " failures=" << failures << " first=" << first_failure;
    return os.str();
  }
};

using CriterionBody = std::function<void(bool&, std::string&)>;

Criterion run_criterion(int index, const std::string& name,
                        const CriterionBody& body, std::ostream* log) {
  Criterion c;
  c.index = index;
  c.name = name;
  double t0 = now_seconds();
  try {
    body(c.pass, c.detail);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = std::string("exception: ") + e.what();
  }
  c.seconds = now_seconds() - t0;
  if (log)
    *log << "[" << index << "] " << (c.pass ? "PASS" : "FAIL") << " " << name
         << " (" << c.detail << ") [" << c.seconds << "s]" << std::endl;
  return c;
}

std::vector<Vector> haar_states(Eigen::Index dim, int count,
                                std::uint64_t seed) {
  std::vector<Vector> out;
  for (int i = 0; i < count; ++i)
    out.push_back(linalg::random_state(dim, linalg::split_seed(seed, i)));
  return out;
}

detect::BoundParams with_dec_theta(const detect::BoundParams& p,
                                   const xy::XYDecomposition& dec) {
  detect::BoundParams q = p;
  q.theta = dec.theta();
  q.theta_exact = dec.theta_exact();
  return q;
}

}  // namespace

std::vector<Criterion> run_all(const Options& opt, std::ostream* log) {
  Corpus c = prepare(opt, log);
  std::vector<Criterion> results;

  // 1: layer-projection norm bound, two-layer corpus.
  results.push_back(run_criterion(
      1, "layer projection bound (ell=0)",
      [&](bool& pass, std::string& detail) {
        Accumulator acc;
        for (const auto& ps : c.two_layer) {
          auto trials = haar_states(ps.sys.total_dim(), opt.aux_states,
                                    linalg::split_seed(opt.seed, 1000));
          acc.add(detect::verify_aux(ps.sys, ps.p0, trials), ps.name);
        }
        pass = acc.failures == 0 && acc.checked > 0;
        detail = acc.summary();
      },
      log));

  // 2: exponential decay of sector weights.
  results.push_back(run_criterion(
      2, "sector weight decay",
      [&](bool& pass, std::string& detail) {
        Accumulator acc;
        auto run_decay = [&](const qsat::QSatSystem& sys,
                             const detect::Cover& cover,
                             const detect::BoundParams& p0, int ell,
                             int states, const std::string& name,
                             std::uint64_t salt) {
          for (std::size_t di = 0; di < cover.decompositions.size(); ++di) {
            const auto& dec = cover.decompositions[di];
            auto pd = with_dec_theta(p0, dec);
            for (int i = 0; i < states; ++i) {
              Vector psi = linalg::random_state(
                  sys.total_dim(),
                  linalg::split_seed(opt.seed, salt + 97 * di + i));
              try {
                auto spec = detect::decay_spectrum(sys, dec, ell, psi);
                acc.add(detect::verify_decay(spec, pd),
                        name + " ell=" + std::to_string(ell));
              } catch (const AllProjectedOut&) {
                ++acc.skipped;
              }
            }
          }
        };
        for (const auto& ps : c.two_layer)
          run_decay(ps.sys, ps.cover, ps.p0, 0, opt.decay_states, ps.name,
                    2000);
        for (const auto& toy : c.toys)
          for (int ell = 0; ell <= 2; ++ell)
            run_decay(toy.qws.base, toy.cover, toy.p0, ell,
                      opt.decay_states_g3, toy.name, 2500 + 7 * ell);
        pass = acc.failures == 0 && acc.checked > 0;
        detail = acc.summary();
      },
      log));

  // 3: energy claims in the coarse sectors.
  results.push_back(run_criterion(
      3, "sector energy claims",
      [&](bool& pass, std::string& detail) {
        Accumulator acc;
        auto run_energy = [&](const qsat::QSatSystem& sys,
                              const detect::Cover& cover,
                              const detect::BoundParams& p0, int ell,
                              const std::string& name, std::uint64_t salt) {
          for (std::size_t di = 0; di < cover.decompositions.size(); ++di) {
            const auto& dec = cover.decompositions[di];
            auto pd = with_dec_theta(p0, dec);
            for (int i = 0; i < opt.energy_states; ++i) {
              Vector psi = linalg::random_state(
                  sys.total_dim(),
                  linalg::split_seed(opt.seed, salt + 97 * di + i));
              try {
                acc.add(detect::verify_energy_claims(sys, dec, pd, ell, psi),
                        name + " ell=" + std::to_string(ell));
              } catch (const AllProjectedOut&) {
                ++acc.skipped;
              }
            }
          }
        };
        for (const auto& ps : c.two_layer)
          run_energy(ps.sys, ps.cover, ps.p0, 0, ps.name, 3000);
        for (const auto& toy : c.toys)
          for (int ell = 0; ell <= 2; ++ell)
            run_energy(toy.qws.base, toy.cover, toy.p0, ell, toy.name,
                       3500 + 7 * ell);
        pass = acc.failures == 0 && acc.checked > 0;
        detail = acc.summary();
      },
      log));

  // 4: detectability over all valid-regime (instance, ell) pairs.
  results.push_back(run_criterion(
      4, "detectability",
      [&](bool& pass, std::string& detail) {
        Accumulator acc;
        int valid_pairs = 0;
        auto run_detect = [&](const qsat::QSatSystem& sys,
                              const detect::BoundParams& p0,
                              const std::string& name, std::uint64_t salt) {
          for (int ell = 0; ell <= 2; ++ell) {
            detect::BoundParams pl = p0;
            pl.ell = ell;
            if (!detect::regime_valid(pl)) continue;
            ++valid_pairs;
            for (int i = 0; i < opt.detect_states; ++i) {
              Vector psi = linalg::random_state(
                  sys.total_dim(), linalg::split_seed(opt.seed, salt + i));
              auto res = detect::verify_detectability(sys, pl, ell, psi);
              std::ostringstream what;
              what << name << " ell=" << ell << " best=" << res.best
                   << " threshold=" << res.threshold;
              acc.add(res.pass, res.best - res.threshold, what.str());
            }
          }
        };
        std::uint64_t salt = 4000;
        for (const auto& ps : c.two_layer) run_detect(ps.sys, ps.p0, ps.name, salt += 131);
        for (const auto& toy : c.toys)
          run_detect(toy.qws.base, toy.p0, toy.name, salt += 131);
        pass = acc.failures == 0 && valid_pairs > 0;
        detail = acc.summary() + " valid_pairs=" + std::to_string(valid_pairs);
      },
      log));

  // 5: two-sided kernel-angle chain.
  results.push_back(run_criterion(
      5, "kernel angle chain",
      [&](bool& pass, std::string& detail) {
        Accumulator acc;
        double worst_eq = 0;
        for (const auto& ps : c.two_layer) {
          auto rep = detect::kitaev_check(ps.sys, ps.p0);
          std::ostringstream what;
          what << ps.name << " cos_alpha=" << rep.cos_alpha
               << " eps0=" << rep.eps0 << " delta0=" << rep.delta0;
          acc.add(rep.pass, std::min(rep.margin_lower, rep.margin_upper),
                  what.str());
          if (ps.angle >= 0) {
            double eq = std::abs(rep.eps0 - (1.0 - rep.cos_alpha));
            worst_eq = std::max(worst_eq, eq);
            acc.add(eq <= 1e-9, 1e-9 - eq, ps.name + " upper equality");
          }
        }
        pass = acc.failures == 0;
        std::ostringstream os;
        os << acc.summary() << " worst_equality_error=" << worst_eq;
        detail = os.str();
      },
      log));

  // 6: classical amplification plus moment bounds.
  results.push_back(run_criterion(
      6, "classical amplification",
      [&](bool& pass, std::string& detail) {
        Accumulator acc;
        std::mt19937_64 rng(linalg::split_seed(opt.seed, 6000));
        auto run_csp = [&](const amp::ClassicalCSP& csp,
                           const std::string& name) {
          std::uniform_int_distribution<int> pick(0, csp.alphabet - 1);
          for (int t : {1, 2, 4, 8})
            for (int i = 0; i < opt.camp_assignments; ++i) {
              amp::Assignment a(csp.graph.n);
              for (auto& v : a) v = pick(rng);
              auto rep = amp::verify_classical_amp(csp, a, t);
              std::ostringstream what;
              what << name << " t=" << t << " lhs=" << rep.unsat_gt
                   << " rhs=" << rep.rhs;
              acc.add(rep.pass, rep.unsat_gt - rep.rhs, what.str());
            }
        };
        run_csp(corpus::neq_csp(corpus::k4(), 2), "k4-neq");
        for (std::size_t gi = 0; gi < c.regular_graphs.size(); ++gi)
          run_csp(corpus::random_csp(c.regular_graphs[gi], 2,
                                     linalg::split_seed(opt.seed, 6100 + gi)),
                  "3reg-" + std::to_string(c.regular_graphs[gi].n));

        // Moment caps and the second-moment hitting bound on enumerable sizes.
        auto run_moments = [&](const amp::ClassicalCSP& csp,
                               const std::string& name) {
          std::uniform_int_distribution<int> pick(0, csp.alphabet - 1);
          for (int t : {2, 4, 6})
            for (int i = 0; i < 5; ++i) {
              amp::Assignment a(csp.graph.n);
              for (auto& v : a) v = pick(rng);
              auto bad = amp::violated_edges(csp, a);
              auto rep = amp::verify_moments(csp.graph, bad, t);
              acc.add(rep.lb_pass, rep.pr_hit - rep.second_moment_lb,
                      name + " second-moment t=" + std::to_string(t));
              acc.add(rep.pair_pass, rep.worst_pair_margin,
                      name + " pair cap t=" + std::to_string(t));
            }
        };
        run_moments(corpus::neq_csp(corpus::k4(), 2), "k4-neq");
        run_moments(corpus::random_csp(c.regular_graphs[0], 2,
                                       linalg::split_seed(opt.seed, 6200)),
                    "3reg-20");
        pass = acc.failures == 0;
        detail = acc.summary();
      },
      log));

  // 7: quantum amplification on the walk toys.
  results.push_back(run_criterion(
      7, "quantum amplification",
      [&](bool& pass, std::string& detail) {
        Accumulator acc;
        std::ostringstream ratios;
        for (const auto& toy : c.toys) {
          auto kb = detect::k_branch_constants(toy.p0, toy.lambda);
          double prev = -1.0;
          for (int t : {1, 2, 3}) {
            auto rep = amp::verify_quantum_amp(toy.qws, t, kb.K_eff);
            std::ostringstream ctx;
            ctx << toy.name << " t=" << t;
            acc.add(rep.qunsat_gt + 1e-8 >= prev, rep.qunsat_gt + 1e-8 - prev,
                    ctx.str() + " monotonicity");
            acc.add(rep.amp_pass, rep.qunsat_gt - rep.rhs,
                    ctx.str() + " amplification bound");
            acc.add(rep.combination_pass, rep.worst_combination_margin,
                    ctx.str() + " combination bound");
            if (toy.diagonal) {
              auto sec = amp::verify_sector_reduction(toy.qws, 0, t);
              acc.add(sec.pass,
                      std::min(1e-9 - sec.worst_eq_error,
                               sec.worst_bound_margin + 1e-9),
                      ctx.str() + " sector reduction");
            }
            prev = rep.qunsat_gt;
            if (t == 3 && rep.qunsat_g > 0)
              ratios << " " << toy.name
                     << ":ratio=" << rep.qunsat_gt / rep.qunsat_g;
          }
        }
        pass = acc.failures == 0;
        detail = acc.summary() + ratios.str();
      },
      log));

  // 8: closed-form constants.
  results.push_back(run_criterion(
      8, "constants",
      [&](bool& pass, std::string& detail) {
        Accumulator acc;
        int r = detect::find_r(0.5, 2, 2);
        acc.add(r == 48, 0, "find_r(0.5,2,2)=" + std::to_string(r));
        auto lhs = [](int rr, int g, int k) {
          return (2.0 * g + 1) * std::log(double(rr)) / rr +
                 (4.0 * g + 2.0 * g * g * std::log(double(k))) / rr;
        };
        acc.add(lhs(47, 2, 2) >= std::log(2.0), 0, "boundary r=47");
        acc.add(lhs(48, 2, 2) < std::log(2.0), 0, "boundary r=48");
        acc.add(std::abs(amp::c_of_lambda(0.0) - 0.25) == 0.0, 0, "c(0)");
        acc.add(std::abs(amp::c_of_lambda(1.0 / 3.0) - 0.2) <= 1e-15, 0,
                "c(1/3)");
        double lam = walks::spectral(corpus::k4()).lambda;
        acc.add(std::abs(lam - 1.0 / 3.0) <= 1e-10, 1e-10 - std::abs(lam - 1.0 / 3.0),
                "lambda(k4)");
        pass = acc.failures == 0;
        detail = acc.summary();
      },
      log));

  // 9: solver and enumeration cross-checks.
  results.push_back(run_criterion(
      9, "oracle equivalence",
      [&](bool& pass, std::string& detail) {
        Accumulator acc;
        auto cross = [&](const qsat::QSatSystem& sys, const std::string& name,
                         std::uint64_t salt) {
          if (sys.total_dim() > 1024) return;
          auto [vals, vecs] = linalg::hermitian_eig(qsat::dense_hamiltonian(sys));
          double dense = vals(0);
          double lz = linalg::lowest_eigenvalue(
              [&](const Vector& v) { return qsat::apply_hamiltonian(sys, v); },
              sys.total_dim(), 1e-10, linalg::split_seed(opt.seed, salt));
          acc.add(std::abs(dense - lz) <= 1e-8, 1e-8 - std::abs(dense - lz),
                  name + " ground energy dense vs iterative");
        };
        std::uint64_t salt = 9000;
        for (const auto& ps : c.two_layer) cross(ps.sys, ps.name, salt += 7);
        for (const auto& toy : c.toys) cross(toy.qws.base, toy.name, salt += 7);

        std::mt19937_64 rng(linalg::split_seed(opt.seed, 9500));
        auto shuffle_check = [&](const detect::Cover& cover,
                                 const qsat::QSatSystem& sys,
                                 const std::string& name) {
          if (cover.decompositions.empty()) return;
          const auto& dec = cover.decompositions[0];
          for (std::size_t p = 0; p < dec.pyramids.size(); ++p) {
            if (dec.spaces[p].y_space.empty()) continue;
            auto qs = xy::pyramid_constraints(dec.pyramids[p], sys);
            if (qs.size() > 5) continue;  // keep the double enumeration cheap
            const Matrix& y = dec.spaces[p].y_space.vectors;
            double t1 = xy::theta_enumerate(qs, y, xy::kThetaCap);
            std::shuffle(qs.begin(), qs.end(), rng);
            double t2 = xy::theta_enumerate(qs, y, xy::kThetaCap);
            acc.add(std::abs(t1 - t2) <= 1e-12, 1e-12 - std::abs(t1 - t2),
                    name + " theta shuffle stability");
          }
        };
        for (const auto& ps : c.two_layer)
          shuffle_check(ps.cover, ps.sys, ps.name);
        shuffle_check(c.toys[2].cover, c.toys[2].qws.base, c.toys[2].name);
        pass = acc.failures == 0 && acc.checked > 0;
        detail = acc.summary();
      },
      log));

  return results;
}

bool all_passed(const std::vector<Criterion>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

std::string to_json(const std::vector<Criterion>& results) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : results)
    j.push_back({{"index", r.index},
                 {"name", r.name},
                 {"pass", r.pass},
                 {"detail", r.detail},
                 {"seconds", r.seconds}});
  return j.dump(2);
}

}  // namespace qamp::suite
