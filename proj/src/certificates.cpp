#include "dlab/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dlab/error.hpp"

namespace dlab {

namespace {

constexpr double kChainTol = 1e-10;

std::vector<char> bitmap(const ActionSpace& space, const CellSet& cells) {
  std::vector<char> bits(space.size(), 0);
  for (auto x : cells) bits[x] = 1;
  return bits;
}

// Cells of the set image, stopping once `limit` cells are collected.
CellSet image_limited(const ActionSpace& space, const ElementSet& atoms, const CellSet& cells,
                      std::size_t limit) {
  std::vector<char> seen(space.size(), 0);
  CellSet out;
  const auto& g = space.group();
  for (const auto& a : atoms) {
    const Element inv = g.inverse(a);
    for (auto x : cells) {
      const auto y = space.act(inv, x);  // a x
      if (!seen[y]) {
        seen[y] = 1;
        out.push_back(y);
        if (out.size() >= limit) {
          std::sort(out.begin(), out.end());
          return out;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void require_symmetric_with_identity(const GroupDescriptor& g, const ElementSet& s,
                                     const char* name) {
  if (!set_contains(s, g.identity())) {
    throw Error(ErrorCode::Precondition, std::string(name) + " must contain the identity");
  }
  if (!is_symmetric(g, s)) {
    throw Error(ErrorCode::Precondition, std::string(name) + " must be symmetric");
  }
}

std::int64_t centered(std::int64_t v, std::int64_t n) {
  v %= n;
  if (v < 0) v += n;
  return v > n / 2 ? v - n : v;
}

CellSet box(const ActionSpace& space, std::size_t x0, std::int64_t w) {
  const auto c = space.coordinates(x0);
  CellSet out;
  if (space.grid_dimension() == 1) {
    for (std::int64_t a = -w; a <= w; ++a) out.push_back(space.index({c[0] + a}));
  } else {
    for (std::int64_t a = -w; a <= w; ++a) {
      for (std::int64_t b = -w; b <= w; ++b) out.push_back(space.index({c[0] + a, c[1] + b}));
    }
  }
  return make_cells(std::move(out));
}

double clean(double v, double scale) { return std::abs(v) < 1e-12 * scale ? 0.0 : v; }

}  // namespace

CellSet make_cells(std::vector<std::size_t> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

CellSet image(const ActionSpace& space, const ElementSet& atoms, const CellSet& cells) {
  return image_limited(space, atoms, cells, space.size() + 1);
}

CellSet power_image(const ActionSpace& space, const ElementSet& s, int n, const CellSet& cells) {
  return image(space, set_power(space.group(), s, n), cells);
}

double cell_mass(const ActionSpace& space, const CellSet& cells) {
  return static_cast<double>(cells.size()) * space.weight();
}

double overlap_ratio(const ActionSpace& space, const Element& g, const CellSet& b) {
  if (b.empty()) return 0.0;
  const auto bits = bitmap(space, b);
  std::size_t hits = 0;
  for (auto x : b) hits += bits[space.act(g, x)] ? 1 : 0;  // x in gB iff g^-1 x in B
  return static_cast<double>(hits) / static_cast<double>(b.size());
}

void ModerateGrowthSequence::validate() const {
  require_symmetric_with_identity(space.group(), s, "S");
  require_symmetric_with_identity(space.group(), f, "F");
  if (max_n < 1 || sets.size() != static_cast<std::size_t>(max_n)) {
    throw Error(ErrorCode::Precondition, "sequence must hold B_1..B_maxN");
  }
}

CertificateReport check_moderate_growth(const ModerateGrowthSequence& seq, double slack) {
  seq.validate();
  CertificateReport rep;
  rep.slack = slack;
  rep.cond1 = true;
  rep.cond2 = true;
  for (int n = 1; n <= seq.max_n; ++n) {
    const CellSet& b = seq.at(n);
    CertificateRow row;
    row.n = n;
    row.nu_b = cell_mass(seq.space, b);
    row.cond1 = !b.empty();
    row.nu_snb = cell_mass(seq.space, power_image(seq.space, seq.s, n, b));
    row.cond2 = row.nu_snb < 0.5;
    row.ratio = 1.0;
    for (const auto& g : seq.f) row.ratio = std::min(row.ratio, overlap_ratio(seq.space, g, b));
    if (b.empty()) row.ratio = 0.0;
    row.ratio_root = std::pow(row.ratio, 1.0 / n);
    rep.cond1 = rep.cond1 && row.cond1;
    rep.cond2 = rep.cond2 && row.cond2;
    rep.max_ratio_root = std::max(rep.max_ratio_root, row.ratio_root);
    rep.rows.push_back(row);
  }
  rep.cond3 = rep.max_ratio_root >= 1.0 - slack;
  return rep;
}

CellSet build_companion_set(const ActionSpace& space, const CellSet& b, const CellSet& forbidden) {
  const auto bits = bitmap(space, forbidden);
  CellSet out;
  out.reserve(b.size());
  for (std::size_t x = 0; x < space.size() && out.size() < b.size(); ++x) {
    if (!bits[x]) out.push_back(x);
  }
  if (out.size() < b.size()) {
    throw Error(ErrorCode::Precondition,
                "not enough mass outside the forbidden set for a companion of " +
                    std::to_string(b.size()) + " cells (condition (2) fails)");
  }
  return out;
}

double rayleigh_value(const ActionSpace& space, const Measure& nu, const CellSet& b,
                      const CellSet& companion) {
  std::vector<signed char> sign(space.size(), 0);
  for (auto x : b) sign[x] = 1;
  for (auto x : companion) {
    if (sign[x] != 0) throw Error(ErrorCode::InternalConsistency, "companion overlaps B");
    sign[x] = -1;
  }
  const double norm2 = static_cast<double>(b.size() + companion.size());
  if (norm2 == 0.0) return 0.0;
  double total = 0.0;
  for (const auto& [g, w] : nu.atoms()) {
    long long s = 0;
    for (auto x : b) s += sign[space.act(g, x)];
    for (auto x : companion) s -= sign[space.act(g, x)];
    total += w * static_cast<double>(s);
  }
  return total / norm2;
}

RayleighValues rayleigh_chain(const ActionSpace& space, const Measure& mu,
                              const ModerateGrowthSequence& seq, int n) {
  seq.validate();
  if (n < 1 || n > seq.max_n) throw Error(ErrorCode::Precondition, "index n out of range");
  if (!is_symmetric(mu)) {
    throw Error(ErrorCode::Precondition, "rayleigh_chain needs a symmetric measure");
  }
  for (const auto& [g, w] : mu.atoms()) {
    if (!set_contains(seq.s, g)) {
      throw Error(ErrorCode::Precondition, "support atom " + format_element(g) + " is not in S");
    }
  }
  const CellSet& b = seq.at(n);
  const CellSet companion = build_companion_set(space, b, power_image(space, seq.s, n, b));
  const Measure mun = convolution_power(mu, n);
  RayleighValues out;
  out.rayleigh = clean(rayleigh_value(space, mun, b, companion), mun.total_mass());
  double ratio = 1.0;
  for (const auto& g : seq.f) ratio = std::min(ratio, overlap_ratio(space, g, b));
  out.chain = 0.5 * mass_on_set(mun, seq.f) * ratio;
  if (out.rayleigh < out.chain - kChainTol) {
    std::ostringstream os;
    os.precision(12);
    os << "Rayleigh value " << out.rayleigh << " below chain bound " << out.chain << " at n = "
       << n;
    throw Error(ErrorCode::InternalConsistency, os.str());
  }
  return out;
}

double norm_lower_bound_from_certificate(const ActionSpace& space, const Measure& mu,
                                         const ModerateGrowthSequence& seq,
                                         CertificateReport* report) {
  seq.validate();
  const Measure eta = symmetrize(mu);
  bool chain_ok = true;
  for (const auto& [g, w] : eta.atoms()) chain_ok = chain_ok && set_contains(seq.s, g);

  double best = 0.0;
  Measure power = eta;
  for (int n = 1; n <= seq.max_n; ++n) {
    if (n > 1) power = convolve(power, eta);
    const CellSet& b = seq.at(n);
    if (b.empty()) continue;
    const CellSet forbidden = power_image(space, seq.s, n, b);
    if (cell_mass(space, forbidden) >= 0.5) continue;
    const CellSet companion = build_companion_set(space, b, forbidden);
    const double r = clean(rayleigh_value(space, power, b, companion), power.total_mass());
    if (r > 0.0) best = std::max(best, std::pow(r, 1.0 / (2.0 * n)));
    if (report && static_cast<std::size_t>(n) <= report->rows.size()) {
      auto& row = report->rows[static_cast<std::size_t>(n - 1)];
      row.rayleigh = r;
      if (chain_ok) {
        row.chain = 0.5 * mass_on_set(power, seq.f) * row.ratio;
        if (r < *row.chain - kChainTol) {
          throw Error(ErrorCode::InternalConsistency,
                      "Rayleigh value below chain bound at n = " + std::to_string(n));
        }
      }
    }
  }
  if (report) report->norm_lower_bound = best;
  return best;
}

ModerateGrowthSequence orbit_neighborhood_sequence(const ActionSpace& space, std::size_t x0,
                                                   const ElementSet& s_in, int n_max) {
  const auto& g = space.group();
  const ElementSet s = make_set(s_in);
  require_symmetric_with_identity(g, s, "S");
  if (n_max < 1) throw Error(ErrorCode::Precondition, "nMax must be >= 1");
  if (x0 >= space.size()) throw Error(ErrorCode::Precondition, "x0 is not a cell");
  space.require_atoms(s);

  const ElementSet far = set_power(g, s, 2 * n_max);
  for (const auto& a : far) {
    if (!g.is_identity(a) && space.act(a, x0) == x0) {
      throw Error(ErrorCode::Resolution,
                  "atom " + format_element(a) + " of S^" + std::to_string(2 * n_max) +
                      " fixes x0 on " + space.describe() + "; refine the grid");
    }
  }
  const std::size_t limit = (space.size() + 1) / 2;  // fewest cells of mass >= 1/2
  if (image_limited(space, far, {x0}, limit).size() >= limit) {
    throw Error(ErrorCode::Resolution, "orbit of x0 under S^" + std::to_string(2 * n_max) +
                                           " has mass >= 1/2; refine the grid");
  }

  ModerateGrowthSequence seq{space, s, s, {}, {}, n_max};
  const int d = space.grid_dimension();
  const std::int64_t side = space.side();
  for (int n = 1; n <= n_max; ++n) {
    const ElementSet s2n = set_power(g, s, 2 * n);
    auto small_enough = [&](const CellSet& v) {
      return image_limited(space, s2n, v, limit).size() < limit;
    };
    CellSet v{x0};
    if (d > 0) {
      std::int64_t w_max = (side - 1) / 2;
      for (const auto& a : set_power(g, s, 2 * n - 2)) {
        if (set_contains(s, a)) continue;
        std::int64_t m = 0;
        for (auto c : space.shift(a)) m = std::max(m, std::abs(centered(c, side)));
        w_max = std::min(w_max, (m - 1) / 2);
      }
      if (w_max < 0 || !small_enough(box(space, x0, 0))) {
        throw Error(ErrorCode::Resolution, "no admissible neighborhood of x0 at n = " +
                                               std::to_string(n) + "; refine the grid");
      }
      std::int64_t lo = 0, hi = w_max;
      while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo + 1) / 2;
        if (small_enough(box(space, x0, mid))) {
          lo = mid;
        } else {
          hi = mid - 1;
        }
      }
      v = box(space, x0, lo);
    } else if (!small_enough(v)) {
      throw Error(ErrorCode::Resolution, "no admissible neighborhood of x0 at n = " +
                                             std::to_string(n) + "; refine the grid");
    }
    seq.sets.push_back(image(space, set_power(g, s, n), v));
    seq.cores.push_back(std::move(v));
  }
  return seq;
}

CertificateRun certify(const ActionSpace& space, const Measure& mu, std::size_t x0, int n_max,
                       double slack) {
  const auto& g = mu.group();
  ElementSet s = symmetrize(mu).support();
  s.push_back(g.identity());
  s = make_set(std::move(s));
  CertificateRun run{orbit_neighborhood_sequence(space, x0, s, n_max), {}};
  run.report = check_moderate_growth(run.sequence, slack);
  if (run.report.cond1 && run.report.cond2) {
    norm_lower_bound_from_certificate(space, mu, run.sequence, &run.report);
  }
  return run;
}

}  // namespace dlab
