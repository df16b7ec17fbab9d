#include "qamp/xy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace qamp::xy {

std::vector<int> Pyramid::all_members() const {
  std::vector<int> out;
  for (const auto& layer : members) out.insert(out.end(), layer.begin(), layer.end());
  return out;
}

std::vector<int> Pyramid::local_dims(const QSatSystem& sys) const {
  std::vector<int> d;
  d.reserve(support.size());
  for (int q : support) d.push_back(sys.dims[q]);
  return d;
}

int Pyramid::local_index(int qudit) const {
  auto it = std::lower_bound(support.begin(), support.end(), qudit);
  if (it == support.end() || *it != qudit) throw BadSupport("qudit not in pyramid");
  return static_cast<int>(it - support.begin());
}

double XYDecomposition::theta() const {
  double t = 0;
  for (const auto& s : spaces) t = std::max(t, s.theta);
  return t;
}

bool XYDecomposition::theta_exact() const {
  for (const auto& s : spaces)
    if (!s.theta_exact) return false;
  return true;
}

static bool intersects(const std::vector<int>& sorted_support,
                       const std::vector<int>& other) {
  for (int q : other)
    if (std::binary_search(sorted_support.begin(), sorted_support.end(), q))
      return true;
  return false;
}

Pyramid build_pyramid(const QSatSystem& sys, int apex) {
  if (!sys.has_layers()) throw NoLayers("build_pyramid");
  Pyramid pyr;
  pyr.apex = apex;
  pyr.members.resize(sys.num_layers());
  pyr.members[0] = {apex};
  std::set<int> sup(sys.constraints[apex].support.begin(),
                    sys.constraints[apex].support.end());
  for (int li = 1; li < sys.num_layers(); ++li) {
    std::vector<int> cur(sup.begin(), sup.end());
    std::vector<int> picked;
    for (int id : sys.layers[li])
      if (intersects(cur, sys.constraints[id].support)) picked.push_back(id);
    for (int id : picked)
      sup.insert(sys.constraints[id].support.begin(),
                 sys.constraints[id].support.end());
    pyr.members[li] = std::move(picked);
  }
  pyr.support.assign(sup.begin(), sup.end());
  pyr.local_dim = 1;
  for (int q : pyr.support) pyr.local_dim *= sys.dims[q];
  return pyr;
}

XYDecomposition build_pyramids(const QSatSystem& sys,
                               const std::vector<int>& apex_priority) {
  if (!sys.has_layers()) throw NoLayers("build_pyramids");
  XYDecomposition dec;
  std::vector<int> taken;  // sorted union of kept supports
  for (int apex : apex_priority) {
    Pyramid pyr = build_pyramid(sys, apex);
    if (intersects(taken, pyr.support)) continue;
    taken.insert(taken.end(), pyr.support.begin(), pyr.support.end());
    std::sort(taken.begin(), taken.end());
    dec.pyramids.push_back(std::move(pyr));
  }
  return dec;
}

std::vector<Matrix> pyramid_constraints(const Pyramid& pyr,
                                        const QSatSystem& sys) {
  auto ldims = pyr.local_dims(sys);
  std::vector<Matrix> out;
  for (int id : pyr.all_members()) {
    const auto& c = sys.constraints[id];
    std::vector<int> lsup;
    for (int q : c.support) lsup.push_back(pyr.local_index(q));
    out.push_back(linalg::lift_local(c.projector, lsup, ldims));
  }
  return out;
}

PyramidSpaces xy_decompose(const Pyramid& pyr, const QSatSystem& sys) {
  if (pyr.local_dim > kDenseCap)
    throw DimensionTooLarge("pyramid local dim " + std::to_string(pyr.local_dim));
  auto qs = pyramid_constraints(pyr, sys);
  const Eigen::Index d = pyr.local_dim;
  const int m = static_cast<int>(qs.size());
  PyramidSpaces out;
  Matrix sum_x = Matrix::Zero(d, d);
  for (std::int64_t b = 0; b < (std::int64_t(1) << m); ++b) {
    Matrix pen = Matrix::Zero(d, d);
    std::vector<int> bits(m);
    for (int i = 0; i < m; ++i) {
      bits[i] = static_cast<int>((b >> i) & 1);
      // (Q - b I)^2 = Q for b=0, I - Q for b=1
      pen += bits[i] ? Matrix(Matrix::Identity(d, d) - qs[i]) : qs[i];
    }
    SubspaceBasis xb = linalg::kernel(pen);
    if (!xb.empty()) {
      sum_x += xb.projector();
      out.x_spaces.emplace_back(bits, std::move(xb));
    }
  }
  out.y_space = linalg::kernel(sum_x);
  out.p_y = out.y_space.projector();
  return out;
}

double theta_enumerate(const std::vector<Matrix>& constraints,
                       const Matrix& y_basis, std::int64_t cap) {
  const int m = static_cast<int>(constraints.size());
  if (y_basis.cols() == 0) return 0.0;
  double fact = 1;
  for (int i = 2; i <= m; ++i) fact *= i;
  if (fact * std::pow(2.0, m) > static_cast<double>(cap))
    throw EnumerationTooLarge("theta enumeration");
  const Eigen::Index d = constraints.empty() ? y_basis.rows() : constraints[0].rows();
  // Precompute Q and I-Q for each constraint.
  std::vector<Matrix> pos = constraints, neg;
  for (const auto& q : constraints) neg.push_back(Matrix::Identity(d, d) - q);

  double best = 0;
  std::vector<char> used(m, 0);
  // DFS over orderings and complement choices; prefix = Y^dag * product so far
  std::function<void(const Matrix&, int)> dfs = [&](const Matrix& prefix,
                                                    int depth) {
    if (depth == m) {
      best = std::max(best, linalg::operator_norm(Matrix(prefix * y_basis)));
      return;
    }
    for (int i = 0; i < m; ++i) {
      if (used[i]) continue;
      used[i] = 1;
      dfs(Matrix(prefix * pos[i]), depth + 1);
      dfs(Matrix(prefix * neg[i]), depth + 1);
      used[i] = 0;
    }
  };
  dfs(Matrix(y_basis.adjoint()), 0);
  return best;
}

double theta_sampled(const std::vector<Matrix>& constraints,
                     const Matrix& y_basis, int samples, std::uint64_t seed) {
  const int m = static_cast<int>(constraints.size());
  if (y_basis.cols() == 0) return 0.0;
  const Eigen::Index d = constraints[0].rows();
  std::mt19937_64 rng(seed);
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  double best = 0;
  for (int s = 0; s < samples; ++s) {
    std::shuffle(order.begin(), order.end(), rng);
    Matrix prod = y_basis.adjoint();
    for (int i : order) {
      if (rng() & 1)
        prod = prod * Matrix(Matrix::Identity(d, d) - constraints[i]);
      else
        prod = prod * constraints[i];
    }
    best = std::max(best, linalg::operator_norm(Matrix(prod * y_basis)));
  }
  return best;
}

std::pair<double, bool> compute_theta(const Pyramid& pyr,
                                      const PyramidSpaces& spaces,
                                      const QSatSystem& sys, ThetaMode mode,
                                      std::int64_t cap, std::uint64_t seed,
                                      int samples) {
  if (spaces.y_space.empty()) return {0.0, true};
  auto qs = pyramid_constraints(pyr, sys);
  if (mode == ThetaMode::exact) {
    try {
      return {theta_enumerate(qs, spaces.y_space.vectors, cap), true};
    } catch (const EnumerationTooLarge&) {
      // fall through to sampling
    }
  }
  return {theta_sampled(qs, spaces.y_space.vectors, samples, seed), false};
}

XYDecomposition decompose(const QSatSystem& sys,
                          const std::vector<int>& apex_priority,
                          std::int64_t theta_cap, std::uint64_t seed) {
  XYDecomposition dec = build_pyramids(sys, apex_priority);
  for (std::size_t p = 0; p < dec.pyramids.size(); ++p) {
    PyramidSpaces sp = xy_decompose(dec.pyramids[p], sys);
    auto [theta, exact] =
        compute_theta(dec.pyramids[p], sp, sys, ThetaMode::exact, theta_cap,
                      linalg::split_seed(seed, p));
    sp.theta = theta;
    sp.theta_exact = exact;
    dec.spaces.push_back(std::move(sp));
  }
  return dec;
}

Vector apply_pyramid_op(const XYDecomposition& dec, std::size_t p,
                        const QSatSystem& sys, const Matrix& local_op,
                        const Vector& v) {
  return linalg::apply_local(local_op, dec.pyramids[p].support, sys.dims, v);
}

Vector apply_sector(const XYDecomposition& dec, const QSatSystem& sys,
                    const std::vector<int>& labels, const Vector& v) {
  if (labels.size() != dec.pyramids.size()) throw BadSector("label count");
  Vector out = v;
  for (std::size_t p = 0; p < labels.size(); ++p) {
    const auto& sp = dec.spaces[p];
    if (labels[p] == kY) {
      out = apply_pyramid_op(dec, p, sys, sp.p_y, out);
    } else {
      if (labels[p] < 0 || labels[p] >= static_cast<int>(sp.x_spaces.size()))
        throw BadSector("x label out of range");
      out = apply_pyramid_op(dec, p, sys,
                             sp.x_spaces[labels[p]].second.projector(), out);
    }
  }
  return out;
}

std::vector<Vector> coarse_components(const XYDecomposition& dec,
                                      const QSatSystem& sys,
                                      const Vector& psi) {
  std::vector<Vector> v{psi};
  for (std::size_t p = 0; p < dec.pyramids.size(); ++p) {
    std::vector<Vector> next(v.size() + 1, Vector::Zero(psi.size()));
    for (std::size_t c = 0; c < v.size(); ++c) {
      Vector y = apply_pyramid_op(dec, p, sys, dec.spaces[p].p_y, v[c]);
      next[c] += v[c] - y;
      next[c + 1] += y;
    }
    v = std::move(next);
  }
  return v;
}

RealVector coarse_weights(const XYDecomposition& dec, const QSatSystem& sys,
                          const Vector& psi) {
  auto comps = coarse_components(dec, sys, psi);
  RealVector w(comps.size());
  for (std::size_t s = 0; s < comps.size(); ++s) w(s) = comps[s].squaredNorm();
  return w;
}

Vector project_le(const QSatSystem& sys, int layer, int ell,
                  const Vector& psi) {
  if (!sys.has_layers()) throw NoLayers("project_le");
  if (layer < 0 || layer >= sys.num_layers())
    throw LayerOutOfRange(std::to_string(layer));
  const auto& ids = sys.layers[layer];
  if (ell < 0) throw LayerOutOfRange("ell negative");
  if (ell >= static_cast<int>(ids.size())) return psi;
  auto comps = qsat::count_sweep(sys, ids, psi);
  Vector out = Vector::Zero(psi.size());
  for (int c = 0; c <= ell; ++c) out += comps[c];
  return out;
}

std::vector<int> inside_ids(const XYDecomposition& dec, const QSatSystem& sys,
                            int layer) {
  std::set<int> in;
  for (const auto& pyr : dec.pyramids)
    for (int id : pyr.members[layer]) in.insert(id);
  std::vector<int> out;
  for (int id : sys.layers.at(layer))
    if (in.count(id)) out.push_back(id);
  return out;
}

std::vector<int> outside_ids(const XYDecomposition& dec, const QSatSystem& sys,
                             int layer) {
  std::set<int> in;
  for (const auto& pyr : dec.pyramids)
    for (int id : pyr.members[layer]) in.insert(id);
  std::vector<int> out;
  for (int id : sys.layers.at(layer))
    if (!in.count(id)) out.push_back(id);
  return out;
}

Vector project_exact_inside(const XYDecomposition& dec, const QSatSystem& sys,
                            int layer, int j, const Vector& psi) {
  auto ids = inside_ids(dec, sys, layer);
  if (j > static_cast<int>(ids.size())) return Vector::Zero(psi.size());
  auto comps = qsat::count_sweep(sys, ids, psi);
  return comps[j];
}

Vector project_le_outside(const XYDecomposition& dec, const QSatSystem& sys,
                          int layer, int m, const Vector& psi) {
  auto ids = outside_ids(dec, sys, layer);
  auto comps = qsat::count_sweep(sys, ids, psi);
  Vector out = Vector::Zero(psi.size());
  int top = std::min<int>(m, static_cast<int>(comps.size()) - 1);
  for (int c = 0; c <= top; ++c) out += comps[c];
  return out;
}

}  // namespace qamp::xy
