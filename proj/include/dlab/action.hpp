#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dlab/group.hpp"

namespace dlab {

enum class ActionKind { CircleRotation, TorusTranslation, BernoulliWindow, FinitePermutation };

const char* to_string(ActionKind kind);

/// Rational slope p/r and grid side chosen for an irrational line flow.
struct FlowChoice {
  std::int64_t p = 0;
  std::int64_t r = 1;
  std::int64_t cells = 0;
  double target = 0.0;
};

/// Continued-fraction convergents of x with denominator <= max_den.
std::vector<std::pair<std::int64_t, std::int64_t>> convergents(double x, std::int64_t max_den);

/// Largest convergent p/r of alpha with r*q <= target_cells; the grid side is
/// the largest multiple of r*q not above target_cells, so time atoms k/q act
/// as exact translations.
FlowChoice choose_flow(double alpha, std::int64_t target_cells, std::int64_t q);

/// Finite probability space with uniform cell weights and a group acting by
/// permutations of cells.
class ActionSpace {
 public:
  /// Circle Z/N. A lattice atom k rotates by k*step cells; a real-grid atom j
  /// (time j/q) rotates by j*N/q cells, which must be an integer.
  static ActionSpace circle_rotation(const GroupDescriptor& group, std::int64_t cells,
                                     std::int64_t step = 1);
  /// Torus (Z/N)^2 with the flow t -> t*(1, p/r). Time comes from a 1-d real
  /// grid (resolution q) or from Z (q = 1).
  static ActionSpace torus_translation(const GroupDescriptor& time, std::int64_t cells,
                                       std::int64_t p, std::int64_t r);
  /// Z acting on cyclic windows {0..alphabet-1}^(2 radius + 1) by rotation.
  static ActionSpace bernoulli_window(int radius, int alphabet);
  /// Permutations of {0..n-1}. One generator gives a Z-action, k >= 2 an F_k-action.
  static ActionSpace finite_permutation(std::vector<std::vector<std::int64_t>> generators);

  ActionKind kind() const;
  const GroupDescriptor& group() const;
  std::size_t size() const;
  double weight() const { return 1.0 / static_cast<double>(size()); }
  std::string describe() const;

  /// Grid side N for circle/torus, window length for Bernoulli, else size.
  std::int64_t side() const;
  /// 1 for the circle, 2 for the torus, 0 otherwise.
  int grid_dimension() const;
  std::vector<std::int64_t> coordinates(std::size_t x) const;
  std::size_t index(const std::vector<std::int64_t>& coords) const;
  /// Slope numerator/denominator for the torus flow.
  std::int64_t slope_num() const;
  std::int64_t slope_den() const;

  /// Whether g acts as an exact cell permutation.
  bool admits(const Element& g) const;
  /// Throws Construction listing every atom that does not act exactly.
  void require_atoms(const ElementSet& atoms) const;
  /// Cell shift of g on translation kinds (g^-1 x = x - shift).
  std::vector<std::int64_t> shift(const Element& g) const;

  /// g^-1 x.
  std::size_t act(const Element& g, std::size_t x) const;
  /// out[x] += coef * in[g^-1 x] for every cell x.
  void accumulate_pullback(const Element& g, double coef, std::span<const double> in,
                           std::span<double> out) const;
  /// out = sum over atoms of coef * in[g^-1 x]; fused per row on the torus.
  void pullback_sum(const std::vector<std::pair<Element, double>>& atoms,
                    std::span<const double> in, std::span<double> out) const;
  bool fixes_some_cell(const Element& g) const;

 private:
  struct Impl;
  explicit ActionSpace(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace dlab
