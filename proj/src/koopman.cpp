#include "dlab/koopman.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "dlab/error.hpp"

namespace dlab {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

void project_zero_mean(std::span<double> v) {
  if (v.empty()) return;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (auto& x : v) x -= mean;
}

KoopmanOperator::KoopmanOperator(ActionSpace space, Measure mu)
    : space_(std::move(space)), mu_(std::move(mu)) {
  if (!(space_.group() == mu_.group())) {
    throw Error(ErrorCode::DescriptorMismatch, "measure lives on " + mu_.group().describe() +
                                                   " but the action is of " +
                                                   space_.group().describe());
  }
  space_.require_atoms(mu_.support());
}

void KoopmanOperator::apply_full(std::span<const double> in, std::span<double> out) const {
  space_.pullback_sum(mu_.atoms(), in, out);
}

// pi(mu) sends constants to constants, so projecting the input is redundant.
void KoopmanOperator::apply(std::span<const double> in, std::span<double> out) const {
  apply_full(in, out);
  project_zero_mean(out);
}

LinearOperator KoopmanOperator::handle() const {
  LinearOperator op;
  op.dimension = dimension();
  op.apply = [self = *this](std::span<const double> x, std::span<double> y) { self.apply(x, y); };
  return op;
}

LinearOperator KoopmanOperator::adjoint_handle() const {
  return KoopmanOperator(space_, involute(mu_)).handle();
}

SpectralOptions default_discrepancy_options() {
  SpectralOptions o;
  o.method = EigenMethod::Lanczos;
  return o;
}

NormResult discrepancy_result(const ActionSpace& space, const Measure& mu,
                              const SpectralOptions& opts) {
  const KoopmanOperator op(space, mu);
  if (mu.empty()) return {};
  return norm_via_symmetrization(op.handle(), op.adjoint_handle(), opts);
}

double discrepancy(const ActionSpace& space, const Measure& mu, double tol, std::uint64_t seed) {
  auto opts = default_discrepancy_options();
  opts.tol = tol;
  opts.seed = seed;
  return discrepancy_result(space, mu, opts).value;
}

CharacterResult character_norm(const ActionSpace& space, const Measure& mu, std::int64_t cutoff) {
  const int d = space.grid_dimension();
  if (d == 0) {
    throw Error(ErrorCode::UnsupportedKind,
                "character diagonalization needs a circle or torus translation action");
  }
  if (cutoff < 1) throw Error(ErrorCode::Precondition, "frequency cutoff must be >= 1");
  const KoopmanOperator op(space, mu);
  const std::int64_t n = space.side();

  std::vector<std::complex<double>> table(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) {
    table[static_cast<std::size_t>(k)] =
        std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
  std::vector<std::vector<std::int64_t>> shifts;
  std::vector<double> weights;
  for (const auto& [g, w] : mu.atoms()) {
    shifts.push_back(space.shift(g));
    weights.push_back(w);
  }

  // Centered representatives in (-n/2, n/2], clipped to the cutoff.
  const std::int64_t hi = std::min(cutoff, n / 2);
  const std::int64_t lo = std::max(-cutoff, -((n - 1) / 2));
  CharacterResult res;
  std::vector<std::int64_t> m(static_cast<std::size_t>(d), lo);
  while (true) {
    const bool zero = std::all_of(m.begin(), m.end(), [](auto c) { return c == 0; });
    if (!zero) {
      std::complex<double> s = 0.0;
      for (std::size_t a = 0; a < shifts.size(); ++a) {
        std::int64_t k = 0;
        for (int i = 0; i < d; ++i) {
          k += mod(m[static_cast<std::size_t>(i)], n) * shifts[a][static_cast<std::size_t>(i)] % n;
        }
        s += weights[a] * table[static_cast<std::size_t>(k % n)];
      }
      ++res.characters;
      const double v = std::abs(s);
      if (v > res.value || res.argmax.empty()) {
        res.value = v;
        res.argmax = m;
      }
    }
    int i = 0;
    while (i < d && ++m[static_cast<std::size_t>(i)] > hi) {
      m[static_cast<std::size_t>(i)] = lo;
      ++i;
    }
    if (i == d) break;
  }
  return res;
}

const char* to_string(RegularNormChoice c) {
  switch (c) {
    case RegularNormChoice::Auto: return "auto";
    case RegularNormChoice::BergChristensen: return "berg-christensen";
    case RegularNormChoice::FourierAbelian: return "fourier-abelian";
    case RegularNormChoice::AmenableMass: return "amenable-mass";
  }
  return "?";
}

BoundReport verify_lower_bound(const ActionSpace& space, const Measure& mu,
                               const BoundOptions& opts) {
  BoundReport rep;
  rep.space = space.describe();
  const KoopmanOperator op(space, mu);
  const auto& g = mu.group();

  if (space.weight() >= opts.atom_threshold) {
    rep.hypotheses_ok = false;
    rep.warnings.push_back("cells carry mass " + fmt(space.weight()) + " >= atom threshold " +
                           fmt(opts.atom_threshold) + "; the space is not atomless");
  }
  if (!g.is_discrete()) {
    for (const auto& [x, w] : mu.atoms()) {
      if (!g.is_identity(x) && space.fixes_some_cell(x)) {
        rep.hypotheses_ok = false;
        rep.warnings.push_back("atom " + format_element(x) + " fixes a cell; orbits are not free");
        break;
      }
    }
    std::vector<char> seen(space.size(), 0);
    std::size_t orbit = 0;
    for (const auto& [x, w] : mu.atoms()) {
      const auto y = space.act(x, 0);
      if (!seen[y]) {
        seen[y] = 1;
        ++orbit;
      }
    }
    const double orbit_mass = static_cast<double>(orbit) * space.weight();
    if (orbit_mass >= 0.5) {
      rep.hypotheses_ok = false;
      rep.warnings.push_back("orbit of cell 0 under supp(mu) has mass " + fmt(orbit_mass) +
                             " >= 1/2; orbits are not negligible");
    }
  }

  rep.delta_diagnostics = discrepancy_result(space, mu, opts.spectral);
  rep.delta = rep.delta_diagnostics.value;

  auto bc = [&] { return berg_christensen_estimate(mu, default_neighborhood(g), opts.n_max); };
  switch (opts.method) {
    case RegularNormChoice::Auto:
      if (g.is_amenable()) {
        try {
          rep.lambda_estimate = amenable_norm(mu);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::Precondition) throw;
          rep.warnings.push_back(std::string("amenable oracle declined (") + e.what() +
                                 "); using Berg-Christensen");
          rep.lambda_estimate = bc();
        }
      } else {
        rep.lambda_estimate = bc();
      }
      break;
    case RegularNormChoice::BergChristensen: rep.lambda_estimate = bc(); break;
    case RegularNormChoice::FourierAbelian:
      rep.lambda_estimate = fourier_norm_abelian(mu, opts.fourier);
      break;
    case RegularNormChoice::AmenableMass: rep.lambda_estimate = amenable_norm(mu); break;
  }
  rep.lambda = rep.lambda_estimate.value;
  rep.inequality_holds = rep.delta >= rep.lambda - opts.tol;
  rep.asserted = rep.hypotheses_ok;
  rep.pass = rep.asserted && rep.inequality_holds;
  if (!rep.asserted) rep.warnings.push_back("hypotheses fail; the inequality is not asserted");
  return rep;
}

}  // namespace dlab
