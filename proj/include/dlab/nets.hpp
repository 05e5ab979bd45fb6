#pragma once

#include <cstddef>
#include <vector>

#include "dlab/group.hpp"

namespace dlab {

/// Haar measure of a finite cell set: |set| times the cell weight.
double haar(const GroupDescriptor& g, const ElementSet& set);

struct NetInstance {
  GroupDescriptor group;
  ElementSet a;
  ElementSet bpow;
  ElementSet net;
};

/// Greedy pass over bpow in lexicographic order, accepting p iff pA misses
/// every accepted translate. The result is a maximal A-separated net of bpow.
NetInstance greedy_maximal_net(const GroupDescriptor& g, const ElementSet& bpow,
                               const ElementSet& a);

/// n1 A and n2 A disjoint for distinct net points.
bool is_separated(const NetInstance& inst);
/// No point of bpow can be added without breaking separation.
bool is_maximal(const NetInstance& inst);

struct NetBoundsReport {
  std::size_t net_size = 0;
  double packing_lhs = 0.0;   // |N| mu(A)
  double packing_rhs = 0.0;   // mu(Bpow A)
  double covering_lhs = 0.0;  // mu(Bpow)
  double covering_rhs = 0.0;  // |N| mu(A A^-1)
  bool separated = false;
  bool maximal = false;
  bool covered = false;  // Bpow inside N A A^-1
  bool packing_ok = false;
  bool covering_ok = false;
  bool ok() const { return separated && packing_ok && (!maximal || (covered && covering_ok)); }
};

NetBoundsReport verify_net_bounds(const NetInstance& inst);

struct NetRatioRow {
  int n = 0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double ratio = 0.0;
};

struct NetRatioReport {
  std::vector<NetRatioRow> rows;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  bool contained = false;
};

/// For n in [n_lo, n_hi]: |N2|/|N1| with N1 maximal in (B^n, A1), N2 maximal
/// in (B^{n-2}, A2), against c1 = mu(A1)/(k3 k1 mu(A2 A2^-1)) and
/// c2 = k2 mu(A1 A1^-1)/mu(A2) with k1, k2, k3 measured over the range.
/// Throws Resource naming the last completed n when B^n outgrows `cap`.
NetRatioReport net_ratio_study(const GroupDescriptor& g, const ElementSet& a1,
                               const ElementSet& a2, const ElementSet& b, int n_lo, int n_hi,
                               std::size_t cap = 10'000'000);

struct CoveringWitness {
  ElementSet s;
  bool contains = false;  // B^k A inside B S
  /// For n = 1..3: B^{k+n-1} A inside B^n S, and mu(B^{n+k-1}A)/mu(B^n).
  std::vector<bool> power_contains;
  std::vector<double> growth;
};

/// Greedy cover of B^k A by translates B h, h taken from the uncovered points in order.
CoveringWitness covering_witness(const GroupDescriptor& g, const ElementSet& a,
                                 const ElementSet& b, int k);

}  // namespace dlab
