#include "qamp/detect.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qamp::detect {

static double clamp_energy(double e) {
  if (e < 0 && e >= -1e-8) return 0.0;
  return e;
}

bool regime_valid(const BoundParams& p) {
  if (p.ell == 0) return true;
  if (p.theta >= 1.0) return false;
  return p.epsilon0 / p.f - static_cast<double>(p.r) * p.ell >
         1.0 / (1.0 - p.theta);
}

double delta_sq(const BoundParams& p) {
  double eps0 = clamp_energy(p.epsilon0);
  if (eps0 < 0) throw InvalidRegime("negative ground energy");
  if (p.theta < 0 || p.theta >= 1.0) throw InvalidRegime("theta outside [0,1)");
  if (p.f <= 0) throw InvalidRegime("f must be positive");
  if (p.ell == 0) {
    if (p.theta == 0.0) return eps0 > 0 ? 1.0 : 0.0;
    double c = std::pow(1.0 - p.theta * p.theta, 3) / (p.theta * p.theta);
    return 1.0 - 1.0 / ((eps0 / p.f) * c + 1.0);
  }
  double denom = eps0 / p.f - static_cast<double>(p.r) * p.ell;
  if (!(denom > 1.0 / (1.0 - p.theta)))
    throw InvalidRegime("eps0/f - r*ell must exceed 1/(1-theta)");
  return 1.0 - (1.0 / (1.0 - p.theta)) / denom;
}

int find_r(double theta, int k, int g) {
  if (theta < 0 || theta >= 1.0) throw InvalidRegime("theta outside [0,1)");
  if (theta == 0.0) return 4;
  double target = std::log(1.0 / theta);
  double gd = g;
  for (int r = 4;; ++r) {
    double lhs = (2 * gd + 1) * std::log(static_cast<double>(r)) / r +
                 (4 * gd + 2 * gd * gd * std::log(static_cast<double>(k))) / r;
    if (lhs < target) return r;
    if (r > 1'000'000'000) throw NoConvergence("find_r scan exhausted");
  }
}

double Cover::theta() const {
  double t = 0;
  for (const auto& d : decompositions) t = std::max(t, d.theta());
  return t;
}

bool Cover::theta_exact() const {
  for (const auto& d : decompositions)
    if (!d.theta_exact()) return false;
  return true;
}

Cover cover_count(const QSatSystem& sys, std::int64_t theta_cap,
                  std::uint64_t seed) {
  if (!sys.has_layers()) throw NoLayers("cover_count");
  Cover cover;
  const auto& layer1 = sys.layers[0];
  std::set<int> uncovered(layer1.begin(), layer1.end());
  std::uint64_t iter = 0;
  while (!uncovered.empty()) {
    std::vector<int> priority;
    for (int id : layer1)
      if (uncovered.count(id)) priority.push_back(id);
    for (int id : layer1)
      if (!uncovered.count(id)) priority.push_back(id);
    auto dec =
        xy::decompose(sys, priority, theta_cap, linalg::split_seed(seed, iter));
    for (const auto& pyr : dec.pyramids) uncovered.erase(pyr.apex);
    cover.decompositions.push_back(std::move(dec));
    ++iter;
  }
  cover.f1 = static_cast<int>(cover.decompositions.size());
  return cover;
}

BoundParams system_params(const QSatSystem& sys, const Cover& cover, int ell) {
  BoundParams p;
  p.epsilon0 = clamp_energy(qsat::ground_energy(sys));
  p.theta = cover.theta();
  p.theta_exact = cover.theta_exact();
  p.k = sys.locality();
  p.g = sys.num_layers();
  p.f1 = cover.f1;
  p.f = p.g * p.f1;
  p.r = find_r(p.theta, p.k, p.g) + 1;
  p.ell = ell;
  return p;
}

DecaySpectrum decay_spectrum(const QSatSystem& sys,
                             const xy::XYDecomposition& dec, int ell,
                             const Vector& psi) {
  if (ell < 0) throw InvalidRegime("ell must be nonnegative");
  Vector w = psi;
  for (int li = 0; li < sys.num_layers(); ++li)
    w = xy::project_le(sys, li, ell, w);
  double x = w.norm();
  if (x <= 1e-12) throw AllProjectedOut("layer projections annihilate state");
  Vector omega = w / x;

  DecaySpectrum spec;
  spec.x = x;
  spec.ell = ell;
  RealVector weights = xy::coarse_weights(dec, sys, omega);
  spec.lambda = weights.cwiseMax(0.0).cwiseSqrt();

  const int g = sys.num_layers();
  const std::size_t nsec = static_cast<std::size_t>(spec.lambda.size());
  RealVector eta_sq = RealVector::Zero(spec.lambda.size());
  std::vector<int> j(g, 0);
  std::int64_t count = 0;
  for (;;) {
    Vector phi = psi;
    for (int li = 0; li < g; ++li)
      phi = xy::project_le_outside(dec, sys, li, ell - j[li], phi);
    RealVector wts = xy::coarse_weights(dec, sys, phi);
    for (std::size_t s = 0; s < nsec; ++s) eta_sq(s) += wts(s);
    ++count;
    int pos = 0;
    while (pos < g && j[pos] == ell) j[pos++] = 0;
    if (pos == g) break;
    ++j[pos];
  }
  spec.eta = (eta_sq / static_cast<double>(count)).cwiseMax(0.0).cwiseSqrt();
  return spec;
}

void CheckReport::record(bool ok, double margin, const std::string& what) {
  ++trials;
  worst_margin = std::min(worst_margin, margin);
  if (!ok) failures.push_back(what);
}

static double log_factorial(int n) { return std::lgamma(n + 1.0); }

CheckReport verify_decay(const DecaySpectrum& spec, const BoundParams& p) {
  if (!p.theta_exact)
    throw InexactTheta("decay verification needs exact theta");
  CheckReport rep;
  rep.check = "decay";
  const int ell = spec.ell;
  const int g = p.g;
  double log_prefactor = 0.0;
  if (ell > 0)
    log_prefactor =
        static_cast<double>(g) * g * ell * std::log(static_cast<double>(p.k)) +
        g * (std::log(ell + 1.0) - log_factorial(ell));
  for (Eigen::Index s = ell; s < spec.lambda.size(); ++s) {
    double log_poly =
        (ell > 0 && s > 0)
            ? static_cast<double>(g) * ell * std::log(static_cast<double>(s))
            : 0.0;
    double bound = (1.0 / spec.x) * std::exp(log_prefactor + log_poly) *
                   std::pow(p.theta, static_cast<double>(s)) * spec.eta(s);
    double margin = bound + kSlack * std::max(1.0, bound) - spec.lambda(s);
    std::ostringstream msg;
    msg << "s=" << s << ": lambda_s=" << spec.lambda(s) << " bound=" << bound;
    rep.record(margin >= 0, margin, msg.str());
  }
  return rep;
}

CheckReport verify_aux(const QSatSystem& sys, const BoundParams& p,
                       const std::vector<Vector>& trials) {
  CheckReport rep;
  rep.check = "aux";
  if (!regime_valid(p)) {
    rep.notes.push_back("regime invalid for ell=" + std::to_string(p.ell) +
                        "; nothing to check");
    return rep;
  }
  double bound = 1.0 - delta_sq(p) + kSlack;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    Vector w = trials[i];
    for (int li = 0; li < sys.num_layers(); ++li)
      w = xy::project_le(sys, li, p.ell, w);
    double x_sq = w.squaredNorm();
    double margin = bound - x_sq;
    std::ostringstream msg;
    msg << "trial " << i << ": x^2=" << x_sq << " bound=" << bound - kSlack;
    rep.record(margin >= 0, margin, msg.str());
  }
  return rep;
}

DetectResult verify_detectability(const QSatSystem& sys, const BoundParams& p,
                                  int ell, const Vector& psi) {
  BoundParams pl = p;
  pl.ell = ell;
  if (!regime_valid(pl)) throw InvalidRegime("detectability regime");
  DetectResult res;
  res.threshold = delta_sq(pl) / (4.0 * p.g * p.g) - kSlack;
  for (int li = 0; li < sys.num_layers(); ++li) {
    Vector v = xy::project_le(sys, li, ell, psi);
    double above = psi.squaredNorm() - v.squaredNorm();
    if (above > res.best) {
      res.best = above;
      res.witness_layer = li;
    }
  }
  res.pass = res.best >= res.threshold;
  return res;
}

CheckReport verify_energy_claims(const QSatSystem& sys,
                                 const xy::XYDecomposition& dec,
                                 const BoundParams& p, int ell,
                                 const Vector& psi) {
  if (sys.total_dim() > kDenseCap)
    throw DimensionTooLarge("energy claims need the dense path");
  CheckReport rep;
  rep.check = "energy";

  Vector w = psi;
  for (int li = 0; li < sys.num_layers(); ++li)
    w = xy::project_le(sys, li, ell, w);
  double x = w.norm();
  if (x <= 1e-12) throw AllProjectedOut("layer projections annihilate state");
  Vector omega = w / x;

  auto comps = xy::coarse_components(dec, sys, omega);
  for (std::size_t s = 0; s < comps.size(); ++s) {
    double wt = comps[s].squaredNorm();
    if (wt <= 1e-12) continue;
    double e_top = 0;
    for (const auto& pyr : dec.pyramids)
      e_top += std::real(
          comps[s].dot(qsat::apply_constraint(sys, pyr.apex, comps[s])));
    double expect = e_top / wt;
    double limit = (ell == 0) ? static_cast<double>(s)
                              : static_cast<double>(ell) + s;
    double margin = limit + kSlack * std::max(1.0, limit) - expect;
    std::ostringstream msg;
    msg << "s=" << s << ": <E^top>=" << expect << " limit=" << limit;
    rep.record(margin >= 0, margin, msg.str());
  }

  if (ell == 0) {
    auto spec = decay_spectrum(sys, dec, 0, psi);
    double cap = (1.0 - spec.x * spec.x) / (1.0 - p.theta * p.theta);
    for (Eigen::Index s = 1; s < spec.eta.size(); ++s) {
      double eta_sq = spec.eta(s) * spec.eta(s);
      double margin = cap + kSlack * std::max(1.0, cap) - eta_sq;
      std::ostringstream msg;
      msg << "eta bound s=" << s << ": eta^2=" << eta_sq << " cap=" << cap;
      rep.record(margin >= 0, margin, msg.str());
    }
  }
  return rep;
}

KitaevReport kitaev_check(const QSatSystem& sys, const BoundParams& p) {
  if (sys.num_layers() != 2) throw NotTwoLayers("kitaev_check");
  if (sys.total_dim() > kDenseCap)
    throw DimensionTooLarge("kitaev_check needs the dense path");
  KitaevReport rep;
  Eigen::Index d = sys.total_dim();
  std::vector<SubspaceBasis> kernels;
  for (int li = 0; li < 2; ++li) {
    Matrix h = Matrix::Zero(d, d);
    for (int id : sys.layers[li]) {
      const auto& c = sys.constraints[id];
      h += linalg::lift_local(c.projector, c.support, sys.dims);
    }
    kernels.push_back(linalg::kernel(h));
  }
  rep.eps0 = std::max(0.0, clamp_energy(qsat::ground_energy(sys)));
  if (kernels[0].empty() || kernels[1].empty()) {
    rep.degenerate = true;
    rep.cos_alpha = 0.0;
  } else {
    rep.cos_alpha = linalg::principal_cos(kernels[0], kernels[1]);
    rep.degenerate = rep.cos_alpha >= 1.0 - 1e-9;
  }
  BoundParams p0 = p;
  p0.ell = 0;
  rep.delta0 = delta_sq(p0);
  rep.margin_lower = (1.0 - rep.cos_alpha) - rep.delta0;
  rep.margin_upper = rep.eps0 - (1.0 - rep.cos_alpha);
  rep.pass = rep.margin_lower >= -kSlack && rep.margin_upper >= -kSlack;
  return rep;
}

KBranch k_branch_constants(const BoundParams& p, double lambda) {
  if (p.theta < 0 || p.theta >= 1.0)
    throw InvalidRegime("K constants need theta in [0,1)");
  if (lambda < 0 || lambda >= 1.0) throw InvalidLambda("lambda outside [0,1)");
  KBranch k;
  double g = p.g;
  double f = p.f;
  double r = p.r;
  k.K2 = 1.0 / (2.0 * f * r * 16.0 * g * g);
  k.K3 = 1.0 / (16.0 * g * g);
  double eps_max = f * (2.0 * r + 4.0 / (1.0 - p.theta));
  if (p.theta == 0.0) {
    k.K1 = 1.0 / eps_max / (4.0 * g * g);  // c' -> infinity limit
  } else {
    double c_prime = std::pow(1.0 - p.theta * p.theta, 3) / (p.theta * p.theta);
    k.K1 = (c_prime / f) / (eps_max * c_prime / f + 1.0) / (4.0 * g * g);
  }
  k.K_eff = std::min({k.K1, k.K2, k.K3});
  return k;
}

}  // namespace qamp::detect
