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

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "critwalk/components.hpp"

namespace critwalk {

// Components up to this size use a dense Cholesky factorization of the
// grounded Laplacian; larger ones use Jacobi-preconditioned conjugate
// gradients at relative tolerance kIterativeTolerance.
inline constexpr std::size_t kDenseSolverCap = 2000;
inline constexpr double kIterativeTolerance = 1e-10;

// A connected component seen as an electrical network with unit conductance
// on every edge. Factorizations are built on first use behind std::call_once,
// so one network may be queried from several threads.
class ResistanceNetwork {
 public:
  explicit ResistanceNetwork(Component component, std::size_t dense_cap = kDenseSolverCap);
  ~ResistanceNetwork();
  ResistanceNetwork(ResistanceNetwork&&) noexcept;
  ResistanceNetwork& operator=(ResistanceNetwork&&) noexcept;

  const Component& component() const { return component_; }
  std::size_t size() const { return component_.size(); }
  bool uses_dense_solver() const { return component_.size() <= dense_cap_; }

  // Node potentials for the given current injection with local vertex 0
  // grounded. Injections need not sum to zero; the excess leaves at ground.
  Eigen::VectorXd potentials(const Eigen::VectorXd& injection) const;

  // All-pairs effective resistances (dense solver only).
  const Eigen::MatrixXd& resistance_matrix() const;

 private:
  struct Cache;
  Component component_;
  std::size_t dense_cap_;
  std::unique_ptr<Cache> cache_;
};

double effective_resistance(const ResistanceNetwork& net, LocalId x, LocalId y);

// Resistance between v and the set U glued into a single node. Computed by
// holding every vertex of U at potential zero.
double effective_resistance_to_set(const ResistanceNetwork& net, LocalId v,
                                   const std::vector<LocalId>& targets);

// Disjoint edge cut-sets, each separating `source` from every vertex of
// `targets`.
struct CutsetFamily {
  LocalId source = 0;
  std::vector<LocalId> targets;
  std::vector<std::vector<LocalEdge>> cutsets;
};

// Throws ValidationError unless the cut-sets are pairwise disjoint, consist
// of component edges, and each one separates source from targets.
void validate_cutsets(const Component& c, const CutsetFamily& family);

// Sum over cut-sets of 1/|cut-set|, after validation.
double nash_williams_bound(const Component& c, const CutsetFamily& family);

// Expected lazy-walk hitting time E_v(tau_z) from the resistance identity
//   sum_u deg(u) [R(v,z) + R(z,u) - R(u,v)].
double hitting_time_tetali(const ResistanceNetwork& net, LocalId v, LocalId z);

// H(v, z) = E_v(tau_z) for all ordered pairs (dense solver only).
Eigen::MatrixXd hitting_time_matrix(const ResistanceNetwork& net);

// |E_x(tau_y) + E_y(tau_x) - 4|E| R(x,y)| / (4|E| R(x,y)); 0 when x == y.
double commute_identity_check(const ResistanceNetwork& net, LocalId x, LocalId y);

}  // namespace critwalk
