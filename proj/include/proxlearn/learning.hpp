#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "proxlearn/admm.hpp"
#include "proxlearn/signal_model.hpp"

namespace proxlearn {

struct GradientResult {
  std::vector<double> grad;
  double loss = 0.0;
  // False when K < 2: the final shrinkage does not influence x^{(K)} and no
  // gradient terms exist; grad is then all zeros.
  bool has_gradient = true;
};

// Coefficient polyhedron 0 <= c_m - c_{m-1} <= delta over the full sequence
// (with the implicit c_0 = 0 pair in antisymmetric mode).
struct ConstraintSet {
  double delta = 0.0;
  int m_half = 0;
  SplineMode mode = SplineMode::Antisymmetric;
};

enum class TrainMode { Unconstrained, Constrained };
enum class InitKind { IdentityLine, Custom };

struct TrainConfig {
  double gamma = 2e-4;        // learning rate
  int outer_iterations = 1000;
  AdmmConfig admm;
  InitKind init = InitKind::IdentityLine;
  std::vector<double> init_coeffs;  // used when init == Custom
  TrainMode mode = TrainMode::Constrained;

  // Spline hyperparameters; delta <= 0 selects sigma_train/2 and m_half <= 0
  // selects knot_range_from_data on the training batch.
  int kernel_order = 3;
  double delta = 0.0;
  int m_half = 0;
  int margin_knots = 4;

  double projection_tol = 1e-12;
  int threads = 0;

  // Invoked after each update with (iteration, current spline, loss at the
  // start of the iteration); used for logging and invariant checks.
  std::function<void(int, const ShrinkageSpline&, double)> on_iteration;
};

struct TrainResult {
  ShrinkageSpline spline;
  std::vector<double> loss_history;
  double wall_time_s = 0.0;
};

// Gradient of J(c) = 1/2 ||x^{(K)}(c, y) - x||^2 by backpropagation through
// the K unrolled ADMM iterations. The forward pass stores v^{(k)}; the
// backward recursion starts from r = A (x^{(K)} - x) with A = L (I + mu
// L^T L)^{-1} and accumulates g += mu Psi^{(k)} r, r <- B^{(k)} r for
// k = K-1, ..., 1, where B^{(k)} = I - mu A L^T + (2 mu A L^T - I) D^{(k)}
// and D^{(k)} = diag(T'(v^{(k)})). A is applied through the factorization,
// never formed densely.
GradientResult backprop_gradient(const ShrinkageSpline& spline,
                                 std::span<const double> x_clean,
                                 std::span<const double> y,
                                 const AdmmConfig& admm,
                                 const TridiagFactorization& fact);

// Sum of per-signal gradients and losses, reduced in signal-index order so the
// result is independent of thread scheduling.
GradientResult batch_gradient(const ShrinkageSpline& spline,
                              const SignalBatch& batch, const AdmmConfig& admm,
                              const TridiagFactorization& fact,
                              int threads = 0);

// Euclidean projection onto the constraint set by Dykstra's alternating
// projections over the pairwise slab constraints, iterated until the change
// across a full sweep falls below tol.
std::vector<double> project_to_S(std::span<const double> z,
                                 const ConstraintSet& S, double tol = 1e-12);

bool satisfies_constraints(std::span<const double> c, const ConstraintSet& S,
                           double tol);

// (Projected) gradient descent from the identity-line initialization
// c_m = m*delta. Constrained mode trains an antisymmetric spline and projects
// after every step; unconstrained mode trains a general spline.
TrainResult train(const TrainConfig& config, const SignalBatch& batch);

// M = ceil(max_l max_i |[L y_l]_i| / delta) + margin_knots.
int knot_range_from_data(const SignalBatch& batch, double delta,
                         int margin_knots = 4);

}  // namespace proxlearn
