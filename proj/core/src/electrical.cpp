/*
   Copyright 2026 The critwalk Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "critwalk/electrical.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "critwalk/errors.hpp"

namespace critwalk {
namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using CgSolver =
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>;

// Laplacian restricted to the vertices with keep[x] >= 0 (keep[x] is the row
// index); the removed vertices act as grounded nodes.
SparseMatrix restricted_laplacian(const Component& c, const std::vector<std::int64_t>& keep,
                                  std::size_t rows) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(rows + 2 * c.edge_count());
  for (LocalId x = 0; x < c.size(); ++x) {
    if (keep[x] >= 0) {
      triplets.emplace_back(keep[x], keep[x], static_cast<double>(c.degree(x)));
    }
  }
  for (const LocalEdge& e : c.edges()) {
    if (keep[e.a] >= 0 && keep[e.b] >= 0) {
      triplets.emplace_back(keep[e.a], keep[e.b], -1.0);
      triplets.emplace_back(keep[e.b], keep[e.a], -1.0);
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Eigen::VectorXd solve_restricted(const SparseMatrix& m, const Eigen::VectorXd& rhs, bool dense) {
  if (m.rows() == 0) {
    return Eigen::VectorXd(0);
  }
  if (dense) {
    const Eigen::MatrixXd dense_m(m);
    Eigen::LLT<Eigen::MatrixXd> llt(dense_m);
    if (llt.info() != Eigen::Success) {
      throw SolverError("grounded Laplacian is not positive definite (disconnected network?)");
    }
    return llt.solve(rhs);
  }
  CgSolver cg;
  cg.setTolerance(kIterativeTolerance);
  cg.setMaxIterations(std::max<Eigen::Index>(1000, 20 * m.rows()));
  cg.compute(m);
  Eigen::VectorXd x = cg.solve(rhs);
  if (cg.info() != Eigen::Success) {
    throw SolverError("conjugate gradients did not reach tolerance (error " +
                      std::to_string(cg.error()) + ")");
  }
  return x;
}

}  // namespace

struct ResistanceNetwork::Cache {
  std::once_flag dense_once;
  Eigen::LLT<Eigen::MatrixXd> llt;
  std::once_flag sparse_once;
  SparseMatrix grounded;
  CgSolver cg;
  std::once_flag resistance_once;
  Eigen::MatrixXd resistance;
};

ResistanceNetwork::ResistanceNetwork(Component component, std::size_t dense_cap)
    : component_(std::move(component)), dense_cap_(dense_cap), cache_(std::make_unique<Cache>()) {
  if (component_.size() == 0) {
    throw ValidationError("resistance network needs at least one vertex");
  }
}

ResistanceNetwork::~ResistanceNetwork() = default;
ResistanceNetwork::ResistanceNetwork(ResistanceNetwork&&) noexcept = default;
ResistanceNetwork& ResistanceNetwork::operator=(ResistanceNetwork&&) noexcept = default;

Eigen::VectorXd ResistanceNetwork::potentials(const Eigen::VectorXd& injection) const {
  const auto n = static_cast<Eigen::Index>(size());
  if (injection.size() != n) {
    throw ValidationError("injection vector has the wrong length");
  }
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
  if (n == 1) {
    return phi;
  }
  std::vector<std::int64_t> keep(size());
  for (std::size_t x = 0; x < size(); ++x) {
    keep[x] = static_cast<std::int64_t>(x) - 1;
  }
  const Eigen::VectorXd rhs = injection.tail(n - 1);
  if (uses_dense_solver()) {
    std::call_once(cache_->dense_once, [&] {
      const SparseMatrix m = restricted_laplacian(component_, keep, size() - 1);
      cache_->llt.compute(Eigen::MatrixXd(m));
      if (cache_->llt.info() != Eigen::Success) {
        throw SolverError("grounded Laplacian is not positive definite (disconnected network?)");
      }
    });
    phi.tail(n - 1) = cache_->llt.solve(rhs);
  } else {
    std::call_once(cache_->sparse_once, [&] {
      cache_->grounded = restricted_laplacian(component_, keep, size() - 1);
      cache_->cg.setTolerance(kIterativeTolerance);
      cache_->cg.setMaxIterations(std::max<Eigen::Index>(1000, 20 * n));
      cache_->cg.compute(cache_->grounded);
    });
    phi.tail(n - 1) = cache_->cg.solve(rhs);
    if (cache_->cg.info() != Eigen::Success) {
      throw SolverError("conjugate gradients did not reach tolerance");
    }
  }
  return phi;
}

const Eigen::MatrixXd& ResistanceNetwork::resistance_matrix() const {
  if (!uses_dense_solver()) {
    throw CapExceeded("resistance_matrix", size(), dense_cap_);
  }
  std::call_once(cache_->resistance_once, [&] {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd green = Eigen::MatrixXd::Zero(n, n);
    if (n > 1) {
      // Prime the factorization, then invert the grounded block.
      potentials(Eigen::VectorXd::Zero(n));
      green.bottomRightCorner(n - 1, n - 1) =
          cache_->llt.solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
    }
    const Eigen::VectorXd diag = green.diagonal();
    Eigen::MatrixXd r = -2.0 * green;
    r.colwise() += diag;
    r.rowwise() += diag.transpose();
    r.diagonal().setZero();
    // Symmetrize away rounding so R(x,y) == R(y,x) bit for bit.
    cache_->resistance = 0.5 * (r + r.transpose());
  });
  return cache_->resistance;
}

double effective_resistance(const ResistanceNetwork& net, LocalId x, LocalId y) {
  const std::size_t n = net.size();
  if (x >= n || y >= n) {
    throw ValidationError("effective_resistance: vertex is not in the component");
  }
  if (x == y) {
    return 0.0;
  }
  Eigen::VectorXd injection = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  injection[x] = 1.0;
  injection[y] = -1.0;
  const Eigen::VectorXd phi = net.potentials(injection);
  return std::max(0.0, phi[x] - phi[y]);
}

double effective_resistance_to_set(const ResistanceNetwork& net, LocalId v,
                                   const std::vector<LocalId>& targets) {
  const Component& c = net.component();
  if (v >= c.size()) {
    throw ValidationError("effective_resistance_to_set: v is not in the component");
  }
  if (targets.empty()) {
    throw ValidationError("effective_resistance_to_set: target set is empty");
  }
  std::vector<std::int64_t> keep(c.size(), 0);
  for (LocalId u : targets) {
    if (u >= c.size()) {
      throw ValidationError("effective_resistance_to_set: target is not in the component");
    }
    if (u == v) {
      throw ValidationError("effective_resistance_to_set: v belongs to the target set");
    }
    keep[u] = -1;
  }
  std::size_t rows = 0;
  for (auto& k : keep) {
    if (k >= 0) {
      k = static_cast<std::int64_t>(rows++);
    }
  }
  const SparseMatrix m = restricted_laplacian(c, keep, rows);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
  rhs[keep[v]] = 1.0;
  const Eigen::VectorXd phi = solve_restricted(m, rhs, rows <= kDenseSolverCap);
  return phi[keep[v]];
}

void validate_cutsets(const Component& c, const CutsetFamily& family) {
  if (family.source >= c.size()) {
    throw ValidationError("cut-set family: source is not in the component");
  }
  if (family.targets.empty()) {
    throw ValidationError("cut-set family: target set is empty");
  }
  std::vector<char> is_target(c.size(), 0);
  for (LocalId u : family.targets) {
    if (u >= c.size()) {
      throw ValidationError("cut-set family: target is not in the component");
    }
    is_target[u] = 1;
  }
  if (is_target[family.source]) {
    throw ValidationError("cut-set family: source belongs to the target set");
  }
  std::set<std::pair<LocalId, LocalId>> component_edges;
  for (const LocalEdge& e : c.edges()) {
    component_edges.emplace(e.a, e.b);
  }
  std::set<std::pair<LocalId, LocalId>> used;
  for (std::size_t j = 0; j < family.cutsets.size(); ++j) {
    std::set<std::pair<LocalId, LocalId>> removed;
    for (const LocalEdge& e : family.cutsets[j]) {
      const auto key = std::minmax(e.a, e.b);
      if (!component_edges.count(key)) {
        throw ValidationError("cut-set " + std::to_string(j) + " contains a non-edge");
      }
      if (!used.insert(key).second) {
        throw ValidationError("cut-set " + std::to_string(j) + " is not disjoint from the others");
      }
      removed.insert(key);
    }
    // BFS from the source in the component minus this cut-set.
    std::vector<char> seen(c.size(), 0);
    std::vector<LocalId> stack{family.source};
    seen[family.source] = 1;
    while (!stack.empty()) {
      const LocalId x = stack.back();
      stack.pop_back();
      if (is_target[x]) {
        throw ValidationError("cut-set " + std::to_string(j) +
                              " does not separate the source from the targets");
      }
      for (LocalId y : c.neighbors(x)) {
        if (!seen[y] && !removed.count(std::minmax(x, y))) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
  }
}

double nash_williams_bound(const Component& c, const CutsetFamily& family) {
  validate_cutsets(c, family);
  double bound = 0.0;
  for (const auto& cut : family.cutsets) {
    bound += 1.0 / static_cast<double>(cut.size());
  }
  return bound;
}

double hitting_time_tetali(const ResistanceNetwork& net, LocalId v, LocalId z) {
  const Component& c = net.component();
  const auto n = static_cast<Eigen::Index>(c.size());
  if (v >= c.size() || z >= c.size()) {
    throw ValidationError("hitting_time_tetali: vertex is not in the component");
  }
  if (v == z) {
    return 0.0;
  }
  Eigen::VectorXd degree(n);
  for (LocalId x = 0; x < c.size(); ++x) {
    degree[x] = c.degree(x);
  }
  if (net.uses_dense_solver()) {
    const Eigen::MatrixXd& r = net.resistance_matrix();
    double total = 0.0;
    for (Eigen::Index u = 0; u < n; ++u) {
      total += degree[u] * (r(v, z) + r(z, u) - r(u, v));
    }
    return total;
  }
  // With G the grounded Green function, sum_u deg(u) [R(z,u) - R(u,v)]
  // collapses to 2|E| (G_zz - G_vv) - 2 deg^T G (e_z - e_v).
  Eigen::VectorXd ez = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd ev = Eigen::VectorXd::Zero(n);
  ez[z] = 1.0;
  ev[v] = 1.0;
  const Eigen::VectorXd gz = net.potentials(ez);
  const Eigen::VectorXd gv = net.potentials(ev);
  const double two_m = 2.0 * static_cast<double>(c.edge_count());
  const double r_vz = gz[z] + gv[v] - 2.0 * gz[v];
  return two_m * r_vz + two_m * (gz[z] - gv[v]) - 2.0 * degree.dot(gz - gv);
}

Eigen::MatrixXd hitting_time_matrix(const ResistanceNetwork& net) {
  const Component& c = net.component();
  const Eigen::MatrixXd& r = net.resistance_matrix();
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::VectorXd degree(n);
  for (LocalId x = 0; x < c.size(); ++x) {
    degree[x] = c.degree(x);
  }
  // s(x) = sum_u deg(u) R(x,u); H(v,z) = 2|E| R(v,z) + s(z) - s(v).
  const Eigen::VectorXd s = r * degree;
  const double two_m = 2.0 * static_cast<double>(c.edge_count());
  Eigen::MatrixXd h = two_m * r;
  h.rowwise() += s.transpose();
  h.colwise() -= s;
  h.diagonal().setZero();
  return h;
}

double commute_identity_check(const ResistanceNetwork& net, LocalId x, LocalId y) {
  if (x == y) {
    return 0.0;
  }
  const double lhs = hitting_time_tetali(net, x, y) + hitting_time_tetali(net, y, x);
  const double rhs = 4.0 * static_cast<double>(net.component().edge_count()) *
                     effective_resistance(net, x, y);
  return std::abs(lhs - rhs) / rhs;
}

}  // namespace critwalk
