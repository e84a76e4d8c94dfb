#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "swapquad/geometry.hpp"
#include "swapquad/polefind.hpp"
#include "swapquad/potentials.hpp"

namespace swapquad {

struct BIEProblem {
  PiecewiseBoundary boundary;
  Pde pde = Pde::laplace;
  double kappa = 0.0;
  bool interior = true;
  Layer representation = Layer::double_layer;
  std::function<Complex(Complex)> dirichlet_data;
  int n = 32;  // per piece; each piece carries 2n nodes
};

struct NystromSystem {
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd rhs;
  std::vector<PieceSamples> samples;  // references problem.boundary pieces
  int n = 0;
  std::vector<bool> corner_row;  // identity rows pinning graded joints
};

struct SolvedDensity {
  std::vector<DensityGrid> per_piece;
  double residual = 0.0;
  double rcond = 1.0;
};

// Kress-type self blocks, swapped close-evaluation cross blocks near joints,
// plain rule otherwise; the problem must outlive the returned system.
NystromSystem assemble(const BIEProblem& problem);

// Dense LU; throws on condition estimate beyond 1e14.
SolvedDensity solve(const NystromSystem& system);

struct FieldOptions {
  Strategy strategy = Strategy::swapped;
  bool auto_subtraction = true;  // near-node trigger for the double layer
  bool correction = false;
  int newton_steps = 1;
  int threads = 1;
};

struct TargetReport {
  Complex value{};
  Strategy used = Strategy::swapped;
  double est_error = 0.0;
  bool near_node = false;
  bool on_surface = false;
  bool inside = false;
  Complex pole_t0{};
  int nearest_piece = -1;
};

std::vector<TargetReport> evaluate_field(const BIEProblem& problem,
                                         const NystromSystem& system,
                                         const SolvedDensity& density,
                                         std::span<const Complex> targets,
                                         const FieldOptions& options = {});

struct CornerProfile {
  std::vector<std::pair<double, double>> samples;  // (arc distance, |phi|)
  double exponent = 0.0;
  bool fit_ok = false;
};

// Density versus arc distance from the joint preceding piece `joint`, with a
// log-log least-squares slope over [r_min, r_max]. subtract_limit removes the
// double-layer constant, estimated from the node nearest the corner.
CornerProfile corner_density_profile(const NystromSystem& system,
                                     const SolvedDensity& density, int joint,
                                     bool subtract_limit, double r_min = 1e-4,
                                     double r_max = 0.2);

}  // namespace swapquad
