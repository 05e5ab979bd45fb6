#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dlab/action.hpp"
#include "dlab/measure.hpp"

namespace dlab {

/// Sorted, duplicate-free cell indices.
using CellSet = std::vector<std::size_t>;

CellSet make_cells(std::vector<std::size_t> cells);
/// {g x : g in atoms, x in cells}.
CellSet image(const ActionSpace& space, const ElementSet& atoms, const CellSet& cells);
/// S^n B computed as S(S(...(S B))).
CellSet power_image(const ActionSpace& space, const ElementSet& s, int n, const CellSet& cells);
double cell_mass(const ActionSpace& space, const CellSet& cells);
/// nu(gB intersect B) / nu(B).
double overlap_ratio(const ActionSpace& space, const Element& g, const CellSet& b);

struct ModerateGrowthSequence {
  ActionSpace space;
  ElementSet s;
  ElementSet f;
  /// sets[n-1] = B_n.
  std::vector<CellSet> sets;
  /// cores[n-1] = V_n when built by orbit_neighborhood_sequence.
  std::vector<CellSet> cores;
  int max_n = 0;

  /// Throws Precondition unless S, F are symmetric, contain e and sets.size() == max_n.
  void validate() const;
  const CellSet& at(int n) const { return sets.at(static_cast<std::size_t>(n - 1)); }
};

struct CertificateRow {
  int n = 0;
  double nu_b = 0.0;
  double nu_snb = 0.0;
  bool cond1 = false;
  bool cond2 = false;
  double ratio = 0.0;
  double ratio_root = 0.0;
  std::optional<double> rayleigh;
  std::optional<double> chain;
};

struct CertificateReport {
  std::vector<CertificateRow> rows;
  bool cond1 = false;
  bool cond2 = false;
  bool cond3 = false;
  double max_ratio_root = 0.0;
  double slack = 0.02;
  std::optional<double> norm_lower_bound;
};

CertificateReport check_moderate_growth(const ModerateGrowthSequence& seq, double slack = 0.02);

/// Greedy fill in cell order: |B| cells outside `forbidden`.
CellSet build_companion_set(const ActionSpace& space, const CellSet& b, const CellSet& forbidden);

struct RayleighValues {
  double rayleigh = 0.0;
  double chain = 0.0;
};

/// <pi_0(mu^{*n}) phi, phi> for phi = (1_B - 1_{B^-}) / norm, and the bound
/// 1/2 mu^{*n}(F) inf_{g in F} nu(gB cap B)/nu(B). mu must be symmetric with
/// support inside S.
RayleighValues rayleigh_chain(const ActionSpace& space, const Measure& mu,
                              const ModerateGrowthSequence& seq, int n);

/// <pi(nu) phi, phi> for the normalized test vector built from (B, B^-).
double rayleigh_value(const ActionSpace& space, const Measure& nu, const CellSet& b,
                      const CellSet& companion);

/// max_n <pi_0(eta^{*n}) phi_n, phi_n>^{1/2n}, eta = mu * mu^*. Fills the
/// rayleigh (and, when supp eta lies in S, chain) columns of `report` if given.
double norm_lower_bound_from_certificate(const ActionSpace& space, const Measure& mu,
                                         const ModerateGrowthSequence& seq,
                                         CertificateReport* report = nullptr);

/// B_n = S^n V_n with V_n the largest box (torus), arc (circle) or single
/// cell around x0 such that gV cap V is empty for g in S^{2n-2} \ S and
/// nu(S^{2n} V_n) < 1/2. F = S.
ModerateGrowthSequence orbit_neighborhood_sequence(const ActionSpace& space, std::size_t x0,
                                                   const ElementSet& s, int n_max);

/// Full pipeline: S = supp(mu * mu^*) plus e, sequence around x0, checks and bound.
struct CertificateRun {
  ModerateGrowthSequence sequence;
  CertificateReport report;
};
CertificateRun certify(const ActionSpace& space, const Measure& mu, std::size_t x0, int n_max,
                       double slack = 0.02);

}  // namespace dlab
