#include "dlab/nets.hpp"

#include <algorithm>
#include <unordered_set>

#include "dlab/error.hpp"

namespace dlab {

namespace {

using HashSet = std::unordered_set<Element, ElementHash>;

bool subset(const ElementSet& a, const ElementSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

double haar(const GroupDescriptor& g, const ElementSet& set) {
  return static_cast<double>(set.size()) * g.cell_weight();
}

NetInstance greedy_maximal_net(const GroupDescriptor& g, const ElementSet& bpow,
                               const ElementSet& a) {
  if (!set_contains(a, g.identity())) {
    throw Error(ErrorCode::Precondition, "A must contain the identity");
  }
  NetInstance inst{g, a, bpow, {}};
  HashSet occupied;
  std::vector<Element> translate;
  for (const auto& p : bpow) {
    translate.clear();
    bool free = true;
    for (const auto& x : a) {
      translate.push_back(g.multiply(p, x));
      if (occupied.count(translate.back())) {
        free = false;
        break;
      }
    }
    if (!free) continue;
    occupied.insert(translate.begin(), translate.end());
    inst.net.push_back(p);
  }
  return inst;
}

bool is_separated(const NetInstance& inst) {
  HashSet occupied;
  for (const auto& p : inst.net) {
    for (const auto& x : inst.a) {
      if (!occupied.insert(inst.group.multiply(p, x)).second) return false;
    }
  }
  return true;
}

bool is_maximal(const NetInstance& inst) {
  HashSet occupied;
  for (const auto& p : inst.net) {
    for (const auto& x : inst.a) occupied.insert(inst.group.multiply(p, x));
  }
  for (const auto& p : inst.bpow) {
    bool blocked = false;
    for (const auto& x : inst.a) {
      if (occupied.count(inst.group.multiply(p, x))) {
        blocked = true;
        break;
      }
    }
    if (!blocked) return false;
  }
  return true;
}

NetBoundsReport verify_net_bounds(const NetInstance& inst) {
  const auto& g = inst.group;
  NetBoundsReport r;
  r.net_size = inst.net.size();
  const double n = static_cast<double>(inst.net.size());
  const ElementSet aainv = set_product(g, inst.a, set_inverse(g, inst.a));
  r.packing_lhs = n * haar(g, inst.a);
  r.packing_rhs = haar(g, set_product(g, inst.bpow, inst.a));
  r.covering_lhs = haar(g, inst.bpow);
  r.covering_rhs = n * haar(g, aainv);
  r.separated = is_separated(inst);
  r.maximal = is_maximal(inst);
  r.covered = subset(inst.bpow, set_product(g, inst.net, aainv));
  // Both sides are integer multiples of one cell weight, so compare counts.
  r.packing_ok = inst.net.size() * inst.a.size() <= set_product(g, inst.bpow, inst.a).size();
  r.covering_ok = inst.bpow.size() <= inst.net.size() * aainv.size();
  return r;
}

NetRatioReport net_ratio_study(const GroupDescriptor& g, const ElementSet& a1,
                               const ElementSet& a2, const ElementSet& b, int n_lo, int n_hi,
                               std::size_t cap) {
  if (n_lo < 3 || n_hi < n_lo) throw Error(ErrorCode::Precondition, "need 3 <= n_lo <= n_hi");
  NetRatioReport rep;
  rep.min_ratio = 1e300;
  int last = n_lo - 1;
  try {
    std::vector<ElementSet> powers{{g.identity()}};
    for (int n = 1; n <= n_hi; ++n) powers.push_back(set_product(g, powers.back(), b, cap));
    for (int n = n_lo; n <= n_hi; ++n) {
      const auto& bn = powers[static_cast<std::size_t>(n)];
      const auto& bn2 = powers[static_cast<std::size_t>(n - 2)];
      const auto n1 = greedy_maximal_net(g, bn, a1).net.size();
      const auto n2 = greedy_maximal_net(g, bn2, a2).net.size();
      const double ratio = static_cast<double>(n2) / static_cast<double>(n1);
      rep.rows.push_back({n, n1, n2, ratio});
      rep.min_ratio = std::min(rep.min_ratio, ratio);
      rep.max_ratio = std::max(rep.max_ratio, ratio);
      const double mu_bn = haar(g, bn);
      rep.k1 = std::max(rep.k1, haar(g, set_product(g, bn, a1, cap)) / mu_bn);
      rep.k2 = std::max(rep.k2, haar(g, set_product(g, bn2, a2, cap)) / mu_bn);
      rep.k3 = std::max(rep.k3, mu_bn / haar(g, bn2));
      last = n;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Resource) throw;
    throw Error(ErrorCode::Resource,
                std::string(e.what()) + "; last completed n = " + std::to_string(last));
  }
  const double m1 = haar(g, set_product(g, a1, set_inverse(g, a1)));
  const double m2 = haar(g, set_product(g, a2, set_inverse(g, a2)));
  rep.c1 = haar(g, a1) / (rep.k3 * rep.k1 * m2);
  rep.c2 = rep.k2 * m1 / haar(g, a2);
  rep.contained = rep.min_ratio >= rep.c1 && rep.max_ratio <= rep.c2;
  return rep;
}

CoveringWitness covering_witness(const GroupDescriptor& g, const ElementSet& a,
                                 const ElementSet& b, int k) {
  if (!set_contains(b, g.identity())) {
    throw Error(ErrorCode::Precondition, "B must contain the identity");
  }
  if (k < 0) throw Error(ErrorCode::Precondition, "k must be >= 0");
  const ElementSet target = set_product(g, set_power(g, b, k), a);
  CoveringWitness w;
  HashSet covered;
  for (const auto& t : target) {
    if (covered.count(t)) continue;
    w.s.push_back(t);
    for (const auto& x : b) covered.insert(g.multiply(x, t));
  }
  w.s = make_set(std::move(w.s));
  w.contains = subset(target, set_product(g, b, w.s));
  for (int n = 1; n <= 3; ++n) {
    const ElementSet lhs = set_product(g, set_power(g, b, k + n - 1), a);
    const ElementSet bn = set_power(g, b, n);
    w.power_contains.push_back(subset(lhs, set_product(g, bn, w.s)));
    w.growth.push_back(haar(g, lhs) / haar(g, bn));
  }
  return w;
}

}  // namespace dlab
