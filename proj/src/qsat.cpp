#include "qamp/qsat.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qamp::qsat {

using nlohmann::json;

int QSatSystem::locality() const {
  int k = 0;
  for (const auto& c : constraints)
    k = std::max(k, static_cast<int>(c.support.size()));
  return k;
}

static bool supports_intersect(const std::vector<int>& a,
                               const std::vector<int>& b) {
  for (int x : a)
    for (int y : b)
      if (x == y) return true;
  return false;
}

std::vector<std::string> validate(const QSatSystem& sys) {
  std::vector<std::string> issues;
  const int n = sys.num_qudits();
  for (const auto& c : sys.constraints) {
    std::set<int> seen;
    Eigen::Index local = 1;
    bool bad_index = false;
    for (int q : c.support) {
      if (q < 0 || q >= n) {
        issues.push_back("constraint " + std::to_string(c.id) +
                         ": support index out of range");
        bad_index = true;
        break;
      }
      if (!seen.insert(q).second) {
        issues.push_back("constraint " + std::to_string(c.id) +
                         ": repeated support index");
        bad_index = true;
        break;
      }
      local *= sys.dims[q];
    }
    if (bad_index) continue;
    if (c.projector.rows() != local || c.projector.cols() != local) {
      issues.push_back("constraint " + std::to_string(c.id) +
                       ": projector dim mismatch");
      continue;
    }
    if ((c.projector - c.projector.adjoint()).norm() > 1e-8)
      issues.push_back("constraint " + std::to_string(c.id) +
                       ": projector not Hermitian");
    if ((c.projector * c.projector - c.projector).norm() > 1e-8)
      issues.push_back("constraint " + std::to_string(c.id) +
                       ": projector not idempotent");
  }
  if (sys.has_layers()) {
    std::vector<int> assigned(sys.constraints.size(), 0);
    for (std::size_t li = 0; li < sys.layers.size(); ++li) {
      const auto& layer = sys.layers[li];
      for (std::size_t i = 0; i < layer.size(); ++i) {
        int id = layer[i];
        if (id < 0 || id >= sys.num_constraints()) {
          issues.push_back("layer " + std::to_string(li) + ": bad id");
          continue;
        }
        ++assigned[id];
        for (std::size_t j = i + 1; j < layer.size(); ++j) {
          int id2 = layer[j];
          if (id2 < 0 || id2 >= sys.num_constraints()) continue;
          if (supports_intersect(sys.constraints[id].support,
                                 sys.constraints[id2].support))
            issues.push_back("layer " + std::to_string(li) +
                             ": overlapping supports of constraints " +
                             std::to_string(id) + " and " +
                             std::to_string(id2));
        }
      }
    }
    for (std::size_t id = 0; id < assigned.size(); ++id)
      if (assigned[id] != 1)
        issues.push_back("constraint " + std::to_string(id) + " appears in " +
                         std::to_string(assigned[id]) + " layers");
  }
  return issues;
}

std::vector<std::vector<int>> compute_layers(const QSatSystem& sys) {
  const int m = sys.num_constraints();
  std::vector<int> color(m, -1);
  int max_color = -1;
  for (int i = 0; i < m; ++i) {
    std::set<int> used;
    for (int j = 0; j < i; ++j)
      if (supports_intersect(sys.constraints[i].support,
                             sys.constraints[j].support))
        used.insert(color[j]);
    int c = 0;
    while (used.count(c)) ++c;
    color[i] = c;
    max_color = std::max(max_color, c);
  }
  std::vector<std::vector<int>> layers(max_color + 1);
  for (int i = 0; i < m; ++i) layers[color[i]].push_back(i);
  return layers;
}

Vector apply_constraint(const QSatSystem& sys, int id, const Vector& v) {
  const auto& c = sys.constraints.at(id);
  return linalg::apply_local(c.projector, c.support, sys.dims, v);
}

Vector apply_hamiltonian(const QSatSystem& sys, const Vector& v) {
  Vector out = Vector::Zero(v.size());
  for (const auto& c : sys.constraints)
    out += linalg::apply_local(c.projector, c.support, sys.dims, v);
  return out;
}

Matrix dense_hamiltonian(const QSatSystem& sys) {
  Eigen::Index d = sys.total_dim();
  if (d > kDenseCap) throw DimensionTooLarge("dense H past cap");
  Matrix h = Matrix::Zero(d, d);
  for (const auto& c : sys.constraints)
    h += linalg::lift_local(c.projector, c.support, sys.dims);
  return h;
}

double energy(const QSatSystem& sys, const Vector& psi) {
  if (psi.size() != sys.total_dim())
    throw DimensionMismatch("state dim mismatch");
  double e = 0;
  for (const auto& c : sys.constraints)
    e += std::real(psi.dot(apply_constraint(sys, c.id, psi)));
  return e;
}

double ground_energy(const QSatSystem& sys) {
  Eigen::Index d = sys.total_dim();
  double e0;
  if (d <= kDenseCap) {
    auto [vals, vecs] = linalg::hermitian_eig(dense_hamiltonian(sys));
    e0 = vals(0);
  } else {
    e0 = linalg::lowest_eigenvalue(
        [&](const Vector& v) { return apply_hamiltonian(sys, v); }, d);
  }
  // Satisfiable systems report exactly zero.
  return std::abs(e0) <= 1e-8 ? 0.0 : e0;
}

std::vector<Vector> count_sweep(const QSatSystem& sys,
                                const std::vector<int>& ids,
                                const Vector& psi) {
  std::vector<Vector> v;
  v.push_back(psi);
  for (std::size_t step = 0; step < ids.size(); ++step) {
    int id = ids[step];
    std::vector<Vector> next(step + 2, Vector::Zero(psi.size()));
    for (std::size_t c = 0; c <= step; ++c) {
      Vector q = apply_constraint(sys, id, v[c]);
      next[c] += v[c] - q;
      next[c + 1] += q;
    }
    v = std::move(next);
  }
  return v;
}

ViolationSpectrum violation_spectrum(const QSatSystem& sys, int layer,
                                     const Vector& psi, bool keep_components) {
  if (!sys.has_layers()) throw NoLayers("violation_spectrum");
  if (layer < 0 || layer >= sys.num_layers())
    throw LayerOutOfRange(std::to_string(layer));
  if (psi.size() != sys.total_dim())
    throw DimensionMismatch("state dim mismatch");
  auto comps = count_sweep(sys, sys.layers[layer], psi);
  ViolationSpectrum out;
  out.layer = layer;
  out.weights.resize(comps.size());
  for (std::size_t j = 0; j < comps.size(); ++j)
    out.weights(j) = comps[j].squaredNorm();
  if (keep_components) out.components = std::move(comps);
  return out;
}

std::string save_instance(const QSatSystem& sys) {
  json j;
  j["dims"] = sys.dims;
  j["constraints"] = json::array();
  for (const auto& c : sys.constraints) {
    json entries = json::array();
    for (Eigen::Index r = 0; r < c.projector.rows(); ++r)
      for (Eigen::Index cc = 0; cc < c.projector.cols(); ++cc)
        entries.push_back({c.projector(r, cc).real(), c.projector(r, cc).imag()});
    j["constraints"].push_back({{"support", c.support},
                                {"projector",
                                 {{"dim", c.projector.rows()},
                                  {"entries", entries}}}});
  }
  if (sys.has_layers()) j["layers"] = sys.layers;
  return j.dump(2);
}

QSatSystem load_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  try {
    QSatSystem sys;
    sys.dims = j.at("dims").get<std::vector<int>>();
    int id = 0;
    for (const auto& cj : j.at("constraints")) {
      Constraint c;
      c.id = id++;
      c.support = cj.at("support").get<std::vector<int>>();
      const auto& pj = cj.at("projector");
      Eigen::Index dim = pj.at("dim").get<Eigen::Index>();
      const auto& entries = pj.at("entries");
      if (static_cast<Eigen::Index>(entries.size()) != dim * dim)
        throw ParseError("projector entry count != dim^2");
      c.projector.resize(dim, dim);
      Eigen::Index idx = 0;
      for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index cc = 0; cc < dim; ++cc, ++idx)
          c.projector(r, cc) = Complex(entries[idx][0].get<double>(),
                                       entries[idx][1].get<double>());
      sys.constraints.push_back(std::move(c));
    }
    if (j.contains("layers"))
      sys.layers = j["layers"].get<std::vector<std::vector<int>>>();
    return sys;
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

}  // namespace qamp::qsat
