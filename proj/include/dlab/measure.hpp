#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlab/group.hpp"

namespace dlab {

inline constexpr std::size_t kDefaultSupportCap = 10'000'000;

/// Finite positive measure on a group, stored as (element, mass) atoms sorted
/// lexicographically. Grid densities are stored through their cell masses
/// (density value times Haar cell weight), so atomic and grid measures share
/// one convolution formula.
class Measure {
 public:
  using Atom = std::pair<Element, double>;

  explicit Measure(GroupDescriptor group) : group_(group) {}

  /// Merges duplicate elements, drops zero masses, rejects negative masses.
  static Measure from_atoms(GroupDescriptor group, std::vector<Atom> atoms);
  static Measure dirac(GroupDescriptor group, Element at, double mass = 1.0);
  static Measure uniform(GroupDescriptor group, const std::vector<Element>& support,
                         double total_mass = 1.0);
  /// Cell masses = density(cell) * cell_weight.
  static Measure from_density(GroupDescriptor group, const std::vector<Element>& cells,
                              const std::vector<double>& density);
  /// Normalized uniform measure on the grid cells of the interval [lo, hi] or
  /// [lo, hi) of a 1-d real grid (coordinates are real numbers, not cells).
  static Measure uniform_interval(GroupDescriptor group, double lo, double hi, bool half_open);

  const GroupDescriptor& group() const noexcept { return group_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t support_size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  double total_mass() const noexcept { return total_mass_; }
  double at(const Element& g) const;
  ElementSet support() const;

 private:
  GroupDescriptor group_;
  std::vector<Atom> atoms_;
  double total_mass_ = 0.0;
};

Measure convolve(const Measure& a, const Measure& b, std::size_t cap = kDefaultSupportCap);
/// a*(g) = a(g^-1); the modular function is identically 1 for supported kinds.
Measure involute(const Measure& a);
/// a * involute(a).
Measure symmetrize(const Measure& a, std::size_t cap = kDefaultSupportCap);
/// n-fold convolution power; n = 0 gives the Dirac mass at the identity.
Measure convolution_power(const Measure& a, int n, std::size_t cap = kDefaultSupportCap);
double mass_on_set(const Measure& a, const ElementSet& set);
/// Restriction to the closed ball of the given radius.
Measure truncate(const Measure& a, double radius);
/// a + epsilon * Haar measure restricted to the closed ball of the given radius.
Measure regularize(const Measure& a, double epsilon, double radius);
Measure scale(const Measure& a, double c);

/// Pointwise comparison with a relative tolerance scaled by the larger total mass.
bool approx_equal(const Measure& a, const Measure& b, double rel_tol);
bool is_symmetric(const Measure& a, double rel_tol = 1e-12);

/// Text serialization: header lines then one `atom (c1,...) mass` record per
/// atom in lexicographic order. Masses use 17 significant digits.
std::string serialize(const Measure& a);
Measure parse_measure(std::string_view text);
GroupDescriptor parse_group_header(std::string_view line);

}  // namespace dlab
