#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dlab {

/// A group element. For lattice and grid kinds these are integer cell
/// coordinates (real coordinate = coordinate / resolution). For free groups it
/// is a reduced word: letter +i is generator i-1, letter -i its inverse.
using Element = std::vector<std::int64_t>;

enum class GroupKind { IntegerLattice, FreeGroup, RealGrid, TorusGrid };

const char* to_string(GroupKind kind);

/// Computational stand-in for a unimodular locally compact group.
///
/// Grid kinds discretize R^d as (1/q)Z^d and T^d as (Z/N)^d; each cell carries
/// Haar weight q^-d resp. N^-d. Lattices and free groups use counting measure.
class GroupDescriptor {
 public:
  static GroupDescriptor integer_lattice(int dim);
  static GroupDescriptor free_group(int rank);
  static GroupDescriptor real_grid(int dim, std::int64_t resolution);
  static GroupDescriptor torus_grid(int dim, std::int64_t resolution);

  GroupKind kind() const noexcept { return kind_; }
  /// Dimension for lattice/grid kinds, rank for free groups.
  int dimension() const noexcept { return dim_; }
  std::int64_t resolution() const noexcept { return resolution_; }

  bool unimodular() const noexcept { return true; }
  double modular_function(const Element&) const noexcept { return 1.0; }
  bool is_abelian() const noexcept { return kind_ != GroupKind::FreeGroup || dim_ < 2; }
  bool is_amenable() const noexcept { return is_abelian(); }
  /// True for genuinely discrete groups (Z^d, F_k); grid kinds model continuous groups.
  bool is_discrete() const noexcept {
    return kind_ == GroupKind::IntegerLattice || kind_ == GroupKind::FreeGroup;
  }

  Element identity() const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  bool is_identity(const Element& a) const;
  /// Throws Precondition when the element is not in canonical form for this group.
  void validate(const Element& a) const;

  double cell_weight() const noexcept;
  /// Word length (free group) or Euclidean norm of the real coordinates.
  double radius(const Element& a) const;
  std::vector<double> real_coordinates(const Element& a) const;
  /// Every element of radius <= r, lexicographically sorted.
  std::vector<Element> ball(double r) const;

  /// Free-group generators g_1..g_k and their inverses, or the unit
  /// coordinate steps for the other kinds.
  std::vector<Element> standard_generators() const;

  std::string describe() const;

  friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;

 private:
  GroupDescriptor(GroupKind kind, int dim, std::int64_t resolution)
      : kind_(kind), dim_(dim), resolution_(resolution) {}

  GroupKind kind_;
  int dim_;
  std::int64_t resolution_;
};

std::string format_element(const Element& e);

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ e.size();
    for (auto c : e) {
      h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Finite element sets, kept sorted and unique.
using ElementSet = std::vector<Element>;

ElementSet make_set(std::vector<Element> elements);
bool set_contains(const ElementSet& set, const Element& e);
/// {a*b : a in A, b in B}; throws Resource once more than `cap` elements accumulate.
ElementSet set_product(const GroupDescriptor& g, const ElementSet& a, const ElementSet& b,
                       std::size_t cap = 10'000'000);
ElementSet set_inverse(const GroupDescriptor& g, const ElementSet& a);
/// A^n with A^0 = {e}.
ElementSet set_power(const GroupDescriptor& g, const ElementSet& a, int n,
                     std::size_t cap = 10'000'000);
bool is_symmetric(const GroupDescriptor& g, const ElementSet& a);

}  // namespace dlab
