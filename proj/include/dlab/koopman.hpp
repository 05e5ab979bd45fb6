#pragma once

#include <string>
#include <vector>

#include "dlab/action.hpp"
#include "dlab/measure.hpp"
#include "dlab/regular_norm.hpp"
#include "dlab/spectral.hpp"

namespace dlab {

/// phi -> sum_g mu(g) phi(g^-1 .) on an ActionSpace, optionally followed by
/// projection onto zero-mean vectors.
class KoopmanOperator {
 public:
  /// Throws DescriptorMismatch or Construction (non-exact atoms).
  KoopmanOperator(ActionSpace space, Measure mu);

  const ActionSpace& space() const noexcept { return space_; }
  const Measure& measure() const noexcept { return mu_; }
  std::size_t dimension() const noexcept { return space_.size(); }

  void apply_full(std::span<const double> in, std::span<double> out) const;
  /// Zero-mean projection, averaging, projection again.
  void apply(std::span<const double> in, std::span<double> out) const;

  LinearOperator handle() const;
  /// Handle of pi_0(mu^*) = pi_0(mu)^*.
  LinearOperator adjoint_handle() const;

 private:
  ActionSpace space_;
  Measure mu_;
};

void project_zero_mean(std::span<double> v);

/// Lanczos by default; power iteration stays selectable through opts.method.
SpectralOptions default_discrepancy_options();

/// ||pi_0(mu)|| through the symmetrization route.
NormResult discrepancy_result(const ActionSpace& space, const Measure& mu,
                              const SpectralOptions& opts = default_discrepancy_options());
double discrepancy(const ActionSpace& space, const Measure& mu, double tol = 1e-8,
                   std::uint64_t seed = 0);

struct CharacterResult {
  double value = 0.0;
  std::vector<std::int64_t> argmax;
  std::size_t characters = 0;
};

/// max over nonzero characters m with |m_i| <= M (centered representatives)
/// of |sum_g mu(g) exp(-2 pi i <m, shift(g)> / N)|. M >= N/2 spans the dual.
CharacterResult character_norm(const ActionSpace& space, const Measure& mu, std::int64_t cutoff);

enum class RegularNormChoice { Auto, BergChristensen, FourierAbelian, AmenableMass };

const char* to_string(RegularNormChoice c);

struct BoundOptions {
  RegularNormChoice method = RegularNormChoice::Auto;
  double tol = 1e-6;
  double atom_threshold = 0.05;
  int n_max = 60;
  FourierOptions fourier;
  SpectralOptions spectral = default_discrepancy_options();
};

struct BoundReport {
  double delta = 0.0;
  double lambda = 0.0;
  bool inequality_holds = false;
  bool hypotheses_ok = true;
  /// True iff the hypotheses hold, so the inequality is asserted.
  bool asserted = false;
  bool pass = false;
  std::vector<std::string> warnings;
  NormResult delta_diagnostics;
  NormEstimate lambda_estimate;
  std::string space;
};

/// delta = discrepancy, lambda = chosen regular-norm estimate, and whether
/// delta >= lambda - tol. Hypothesis failures are reported, not thrown.
BoundReport verify_lower_bound(const ActionSpace& space, const Measure& mu,
                               const BoundOptions& opts = {});

}  // namespace dlab
