#include "dlab/regular_norm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "dlab/error.hpp"

namespace dlab {

namespace {

// log p_m for m = 0..n; -inf where the walk cannot be at e.
std::vector<double> radial_log_returns(int rank, int n) {
  if (rank < 1) throw Error(ErrorCode::Precondition, "free group rank must be >= 1");
  if (n < 0) throw Error(ErrorCode::Precondition, "step count must be >= 0");
  const double up = (2.0 * rank - 1.0) / (2.0 * rank);
  const double down = 1.0 / (2.0 * rank);
  const auto len = static_cast<std::size_t>(n) + 2;
  std::vector<double> v(len, 0.0);
  std::vector<double> next(len, 0.0);
  std::vector<double> out(static_cast<std::size_t>(n) + 1,
                          -std::numeric_limits<double>::infinity());
  v[0] = 1.0;
  out[0] = 0.0;
  double log_scale = 0.0;
  for (int step = 1; step <= n; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    const auto reach = static_cast<std::size_t>(std::min(step - 1, n));
    for (std::size_t m = 0; m <= reach; ++m) {
      if (v[m] == 0.0) continue;
      if (m == 0) {
        next[1] += v[0];
      } else {
        next[m + 1] += v[m] * up;
        next[m - 1] += v[m] * down;
      }
    }
    std::swap(v, next);
    const double peak = *std::max_element(v.begin(), v.end());
    if (peak > 0.0 && (peak < 1e-200 || peak > 1e200)) {
      for (auto& x : v) x /= peak;
      log_scale += std::log(peak);
    }
    if (v[0] > 0.0) out[static_cast<std::size_t>(step)] = std::log(v[0]) + log_scale;
  }
  return out;
}

std::int64_t free_exponent(const Element& w) {
  std::int64_t s = 0;
  for (auto l : w) s += l > 0 ? 1 : -1;
  return s;
}

std::vector<std::int64_t> lattice_coords(const GroupDescriptor& g, const Element& e) {
  if (g.kind() == GroupKind::FreeGroup) return {free_exponent(e)};
  return {e.begin(), e.end()};
}

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

std::string format_basis(const std::vector<Element>& basis) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (i) os << ", ";
    os << format_element(basis[i]);
  }
  os << "}";
  return os.str();
}

}  // namespace

const char* to_string(NormMethod m) {
  switch (m) {
    case NormMethod::BergChristensen: return "berg-christensen";
    case NormMethod::FourierAbelian: return "fourier-abelian";
    case NormMethod::AmenableMass: return "amenable-mass";
    case NormMethod::FreeRadial: return "free-radial";
  }
  return "?";
}

ElementSet default_neighborhood(const GroupDescriptor& g) {
  if (g.is_discrete()) return {g.identity()};
  return make_set(g.ball(1.0 / static_cast<double>(g.resolution()) + 1e-12));
}

std::vector<double> free_group_radial_returns(int rank, int n) {
  auto logs = radial_log_returns(rank, n);
  for (auto& x : logs) x = std::exp(x);
  return logs;
}

double free_group_radial_return(int rank, int n) {
  if (n < 0) throw Error(ErrorCode::Precondition, "step count must be >= 0");
  if (n % 2 != 0) return 0.0;
  return std::exp(radial_log_returns(rank, n).back());
}

bool is_uniform_on_free_generators(const Measure& mu) {
  const auto& g = mu.group();
  if (g.kind() != GroupKind::FreeGroup) return false;
  if (mu.support() != make_set(g.standard_generators())) return false;
  const double w = mu.atoms().front().second;
  return std::all_of(mu.atoms().begin(), mu.atoms().end(),
                     [w](const Measure::Atom& a) { return std::abs(a.second - w) <= 1e-12 * w; });
}

NormEstimate berg_christensen_estimate(const Measure& mu, const ElementSet& neighborhood,
                                       int n_max, std::size_t cap) {
  const auto& g = mu.group();
  if (neighborhood.empty()) throw Error(ErrorCode::Precondition, "neighborhood F is empty");
  const ElementSet f = make_set(neighborhood);
  if (!set_contains(f, g.identity())) {
    throw Error(ErrorCode::Precondition, "neighborhood F must contain the identity");
  }
  if (n_max < 2) throw Error(ErrorCode::Precondition, "nMax must be >= 2");

  NormEstimate est;
  if (mu.empty()) {
    for (int n = 1; n <= n_max; ++n) est.sequence.emplace_back(n, 0.0);
    return est;
  }

  if (f.size() == 1 && is_uniform_on_free_generators(mu)) {
    est.method = NormMethod::FreeRadial;
    const double c = mu.total_mass();
    const auto logs = radial_log_returns(g.dimension(), 2 * n_max);
    for (int n = 1; n <= n_max; ++n) {
      const double lp = logs[static_cast<std::size_t>(2 * n)];
      est.sequence.emplace_back(n, c * std::exp(lp / (2.0 * n)));
    }
  } else {
    const Measure eta = symmetrize(mu, cap);
    Measure power = eta;
    for (int n = 1; n <= n_max; ++n) {
      if (n > 1) {
        try {
          power = convolve(power, eta, cap);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::Resource || g.kind() != GroupKind::FreeGroup) throw;
          throw Error(ErrorCode::Resource,
                      std::string(e.what()) + " at n = " + std::to_string(n) +
                          "; for measures uniform on the free generators use the radial oracle "
                          "(free_group_radial_return); other free-group measures have no oracle");
        }
      }
      const double m = mass_on_set(power, f);
      est.sequence.emplace_back(n, m > 0.0 ? std::pow(m, 1.0 / (2.0 * n)) : 0.0);
    }
  }

  for (std::size_t i = 1; i < est.sequence.size(); ++i) {
    if (est.sequence[i].second < est.sequence[i - 1].second - 1e-10) {
      est.warnings.push_back("raw sequence decreases at n = " +
                             std::to_string(est.sequence[i].first));
      break;
    }
  }
  est.value = est.sequence.back().second;
  return est;
}

double fourier_modulus(const Measure& mu, const std::vector<double>& xi) {
  const auto& g = mu.group();
  std::complex<double> s = 0.0;
  const bool torus = g.kind() == GroupKind::TorusGrid;
  const double n = static_cast<double>(g.resolution());
  for (const auto& [x, w] : mu.atoms()) {
    double phase = 0.0;
    if (g.kind() == GroupKind::FreeGroup) {
      phase = xi[0] * static_cast<double>(free_exponent(x));
    } else {
      for (std::size_t i = 0; i < xi.size(); ++i) {
        const double c = torus ? static_cast<double>(x[i]) / n : g.real_coordinates(x)[i];
        phase += xi[i] * c;
      }
    }
    s += w * std::polar(1.0, -2.0 * std::numbers::pi * phase);
  }
  return std::abs(s);
}

NormEstimate fourier_norm_abelian(const Measure& mu, const FourierOptions& opts) {
  const auto& g = mu.group();
  if (!g.is_abelian()) {
    throw Error(ErrorCode::UnsupportedKind, "Fourier oracle needs an abelian group, got " +
                                                g.describe());
  }
  if (!(opts.freq_bound > 0.0) || opts.freq_samples < 1) {
    throw Error(ErrorCode::Precondition, "frequency bound and sample count must be positive");
  }
  const int d = g.dimension();
  const bool torus = g.kind() == GroupKind::TorusGrid;

  std::vector<double> axis;
  if (torus) {
    const auto b = static_cast<std::int64_t>(std::floor(opts.freq_bound));
    for (std::int64_t m = -b; m <= b; ++m) axis.push_back(static_cast<double>(m));
  } else {
    const int s = opts.freq_samples;
    for (int i = 0; i < s; ++i) {
      axis.push_back(s == 1 ? 0.0 : -opts.freq_bound + 2.0 * opts.freq_bound * i / (s - 1));
    }
    axis.push_back(0.0);
    if (d == 1 && opts.min_frequency > 0.0 && opts.min_frequency <= opts.freq_bound) {
      axis.push_back(opts.min_frequency);
      axis.push_back(-opts.min_frequency);
    }
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  }

  NormEstimate est;
  est.method = NormMethod::FourierAbelian;
  double best = 0.0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> xi(static_cast<std::size_t>(d));
  bool any = false;
  while (true) {
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) {
      xi[static_cast<std::size_t>(i)] = axis[idx[static_cast<std::size_t>(i)]];
      r2 += xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(i)];
    }
    if (std::sqrt(r2) >= opts.min_frequency - 1e-12) {
      best = std::max(best, fourier_modulus(mu, xi));
      any = true;
    }
    int k = 0;
    while (k < d && ++idx[static_cast<std::size_t>(k)] == axis.size()) {
      idx[static_cast<std::size_t>(k)] = 0;
      ++k;
    }
    if (k == d) break;
  }
  if (!any) throw Error(ErrorCode::Precondition, "no sampled frequency satisfies the lower bound");
  est.value = best;
  std::ostringstream note;
  note << "sup over " << axis.size() << "^" << d << " frequencies in [-" << opts.freq_bound << ", "
       << opts.freq_bound << "]";
  if (!torus && axis.size() > 1) note << ", spacing " << (2.0 * opts.freq_bound / (opts.freq_samples - 1));
  est.note = note.str();
  return est;
}

long long generated_subgroup_index(const GroupDescriptor& g, const ElementSet& elements,
                                   std::vector<Element>* basis) {
  const int d = g.kind() == GroupKind::FreeGroup ? 1 : g.dimension();
  if (g.kind() == GroupKind::FreeGroup && g.dimension() > 1) {
    throw Error(ErrorCode::UnsupportedKind, "lattice test needs an abelian group");
  }
  std::vector<std::vector<__int128>> rows;
  for (const auto& e : elements) {
    auto c = lattice_coords(g, e);
    rows.emplace_back(c.begin(), c.end());
  }
  if (g.kind() == GroupKind::TorusGrid) {
    for (int i = 0; i < d; ++i) {
      std::vector<__int128> r(static_cast<std::size_t>(d), 0);
      r[static_cast<std::size_t>(i)] = g.resolution();
      rows.push_back(std::move(r));
    }
  }

  // Row echelon form over Z by repeated Euclid on each pivot column.
  std::vector<std::vector<__int128>> echelon;
  std::size_t top = 0;
  for (int col = 0; col < d; ++col) {
    const auto c = static_cast<std::size_t>(col);
    while (true) {
      std::size_t piv = rows.size();
      for (std::size_t r = top; r < rows.size(); ++r) {
        if (rows[r][c] != 0 && (piv == rows.size() || abs128(rows[r][c]) < abs128(rows[piv][c]))) {
          piv = r;
        }
      }
      if (piv == rows.size()) break;
      std::swap(rows[top], rows[piv]);
      bool done = true;
      for (std::size_t r = top + 1; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        const __int128 q = rows[r][c] / rows[top][c];
        for (int k = 0; k < d; ++k) rows[r][static_cast<std::size_t>(k)] -= q * rows[top][static_cast<std::size_t>(k)];
        if (rows[r][c] != 0) done = false;
      }
      if (done) {
        echelon.push_back(rows[top]);
        ++top;
        break;
      }
    }
    if (echelon.size() != c + 1) {
      if (basis) {
        basis->clear();
        for (const auto& r : echelon) basis->emplace_back(r.begin(), r.end());
      }
      return 0;
    }
  }
  __int128 index = 1;
  for (int i = 0; i < d; ++i) {
    index *= abs128(echelon[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]);
    if (index > std::numeric_limits<long long>::max()) index = std::numeric_limits<long long>::max();
  }
  if (basis) {
    basis->clear();
    for (const auto& r : echelon) basis->emplace_back(r.begin(), r.end());
  }
  return static_cast<long long>(index);
}

NormEstimate amenable_norm(const Measure& mu) {
  const auto& g = mu.group();
  if (!g.is_amenable()) {
    throw Error(ErrorCode::UnsupportedKind, "Kesten oracle needs an amenable group, got " +
                                                g.describe());
  }
  NormEstimate est;
  est.method = NormMethod::AmenableMass;
  if (mu.empty()) return est;

  const bool symmetric = is_symmetric(mu);
  const ElementSet support = symmetric ? mu.support() : symmetrize(mu).support();
  std::vector<Element> basis;
  const long long index = generated_subgroup_index(g, support, &basis);
  if (index != 1) {
    throw Error(ErrorCode::Precondition,
                std::string(symmetric ? "support" : "support of mu*mu^*") +
                    " generates a proper subgroup with basis " + format_basis(basis) +
                    (index == 0 ? " (lower rank)" : " of index " + std::to_string(index)));
  }
  if (!symmetric) {
    est.note = "mu is not symmetric; generation checked on mu*mu^*, whose norm is mu(G)^2";
  }
  est.value = mu.total_mass();
  return est;
}

}  // namespace dlab
