#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace dlab {

/// Matrix-free operator: `apply(x, y)` overwrites y with T x.
struct LinearOperator {
  std::size_t dimension = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
  bool self_adjoint = false;
  bool nonnegative = false;
};

enum class EigenMethod { PowerIteration, Lanczos };

struct SpectralOptions {
  double tol = 1e-8;
  int max_iter = 20000;  // operator applications
  std::uint64_t seed = 0;
  EigenMethod method = EigenMethod::PowerIteration;
  int krylov_dim = 32;
  /// Upper bound on doubles held in the Lanczos basis.
  std::size_t krylov_budget = std::size_t{1} << 25;
};

struct NormResult {
  double value = 0.0;
  /// ||T v - value v|| for the returned unit vector v (for the symmetrized
  /// route: the residual of the composed operator).
  double residual = 0.0;
  int applications = 0;
};

/// Largest eigenvalue of a self-adjoint nonnegative operator. The returned
/// value is a Rayleigh quotient, hence never above the true norm; convergence
/// is declared on the residual. Throws ConvergenceError or Contract.
NormResult operator_norm_self_adjoint(const LinearOperator& op, const SpectralOptions& opts);

/// ||A|| = sqrt(||A A*||), given handles for A and A*. Adjointness is checked
/// on seeded random pairs to 1e-8 before iterating.
NormResult norm_via_symmetrization(const LinearOperator& a, const LinearOperator& a_star,
                                   const SpectralOptions& opts);

/// max over `trials` random pairs of
/// |<Ax,y> - <x,By>| / (|Ax||y| + |x||By| + 1e-6 |x||y|).
double adjointness_defect(const LinearOperator& a, const LinearOperator& b, std::uint64_t seed,
                          int trials = 3);

/// Self-adjointness defect of a single operator (b = a).
double self_adjointness_defect(const LinearOperator& a, std::uint64_t seed, int trials = 3);

}  // namespace dlab
