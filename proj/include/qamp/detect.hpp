#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qamp/xy.hpp"

namespace qamp::detect {

using qsat::QSatSystem;

/// Parameters entering the bound formulas.
struct BoundParams {
  double epsilon0 = 0.0;
  double theta = 0.0;
  int k = 2;
  int g = 2;
  int f1 = 1;
  int f = 2;
  int r = 4;
  int ell = 0;
  bool theta_exact = true;
};

/// Delta^2(ell); the ell=0 branch for ell=0, the 1/(1-theta) branch otherwise.
double delta_sq(const BoundParams& p);

/// Whether the ell>0 branch precondition (eps0/f - r*ell) > 1/(1-theta) holds
/// (always true for ell=0).
bool regime_valid(const BoundParams& p);

/// Minimal integer r > 3 with
/// (2g+1) log(r)/r + (4g + 2 g^2 log(k))/r < log(1/theta).
int find_r(double theta, int k, int g);

/// Greedy family of XY decompositions covering every layer-1 constraint as a
/// pyramid apex; f1 = family size, f = g*f1.
struct Cover {
  int f1 = 0;
  std::vector<xy::XYDecomposition> decompositions;

  double theta() const;  // max over decompositions
  bool theta_exact() const;
};

Cover cover_count(const QSatSystem& sys,
                  std::int64_t theta_cap = xy::kThetaCap,
                  std::uint64_t seed = 0);

/// Resolves eps0, theta, k, g, f and r for a system. r is the scanned value
/// plus one (the bound proofs re-index r by one).
BoundParams system_params(const QSatSystem& sys, const Cover& cover,
                          int ell = 0);

/// Norm and weight sequences of the layer-projected state Omega.
struct DecaySpectrum {
  double x = 0.0;
  RealVector lambda;  // lambda_s = ||P_s Omega||
  RealVector eta;     // weight sequence of the outside-projected states
  int ell = 0;
};

DecaySpectrum decay_spectrum(const QSatSystem& sys,
                             const xy::XYDecomposition& dec, int ell,
                             const Vector& psi);

/// Pass/fail accumulator shared by the verification harnesses.
struct CheckReport {
  std::string check;
  int trials = 0;
  std::vector<std::string> failures;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<std::string> notes;

  bool passed() const { return failures.empty(); }
  void record(bool ok, double margin, const std::string& what);
};

inline constexpr double kSlack = 1e-7;

/// lambda_s <= (1/x) k^(g^2 ell) ((ell+1)/ell!)^g s^(g ell) theta^s eta_s
/// for every s >= ell. Refuses sampled theta.
CheckReport verify_decay(const DecaySpectrum& spec, const BoundParams& p);

/// x^2 <= 1 - Delta^2(ell) for each trial state.
CheckReport verify_aux(const QSatSystem& sys, const BoundParams& p,
                       const std::vector<Vector>& trials);

struct DetectResult {
  int witness_layer = -1;
  double best = 0.0;       // max over layers of ||Pi^{>ell}_i psi||^2
  double threshold = 0.0;  // Delta^2(ell)/(2g)^2
  bool pass = false;
};

DetectResult verify_detectability(const QSatSystem& sys, const BoundParams& p,
                                  int ell, const Vector& psi);

/// <Omega_s|E^top|Omega_s> <= s (ell=0) or <= ell+s (ell>0), and
/// eta_s^2 <= (1-x^2)/(1-theta^2) for s >= 1 at ell=0.
CheckReport verify_energy_claims(const QSatSystem& sys,
                                 const xy::XYDecomposition& dec,
                                 const BoundParams& p, int ell,
                                 const Vector& psi);

struct KitaevReport {
  double cos_alpha = 1.0;
  double eps0 = 0.0;
  double delta0 = 0.0;
  bool degenerate = false;
  bool pass = false;
  double margin_lower = 0.0;  // (1 - cos a) - Delta^2(0)
  double margin_upper = 0.0;  // eps0 - (1 - cos a)
};

/// Delta^2(0) <= 1 - cos(alpha) <= eps0 for a two-layer system; alpha is the
/// principal angle between the layer-Hamiltonian kernels.
KitaevReport kitaev_check(const QSatSystem& sys, const BoundParams& p);

struct KBranch {
  double K1 = 0, K2 = 0, K3 = 0, K_eff = 0;
};

KBranch k_branch_constants(const BoundParams& p, double lambda);

}  // namespace qamp::detect
