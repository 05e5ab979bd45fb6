#include "dlab/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "dlab/error.hpp"

namespace dlab {

namespace {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vec random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

void normalize(Vec& v) {
  const double s = norm(v);
  for (auto& x : v) x /= s;
}

void check_operator(const LinearOperator& op) {
  if (op.dimension == 0 || !op.apply) {
    throw Error(ErrorCode::Contract, "operator handle has no dimension or apply function");
  }
}

/// ||Tv - lambda v|| for unit v, given Tv.
double residual_of(std::span<const double> tv, std::span<const double> v, double lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = tv[i] - lambda * v[i];
    s += d * d;
  }
  return std::sqrt(s);
}

NormResult power_iteration(const LinearOperator& op, const SpectralOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  Vec v = random_vector(op.dimension, rng);
  normalize(v);
  Vec w(op.dimension);
  double last_residual = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    op.apply(v, w);
    const double wn = norm(w);
    if (it == 1 && wn < opts.tol) return {0.0, wn, it};
    const double lambda = dot(w, v);
    last_residual = residual_of(w, v, lambda);
    if (last_residual <= opts.tol) return {std::max(lambda, 0.0), last_residual, it};
    if (wn == 0.0) return {0.0, 0.0, it};
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / wn;
  }
  throw ConvergenceError("power iteration did not reach tolerance in " +
                             std::to_string(opts.max_iter) + " applications",
                         last_residual);
}

// Explicitly restarted Lanczos with full reorthogonalization (classical
// Gram-Schmidt, second pass when the first one cancels heavily); each cycle
// restarts from the top Ritz vector.
NormResult lanczos(const LinearOperator& op, const SpectralOptions& opts) {
  const std::size_t n = op.dimension;
  const auto budget_dim = static_cast<int>(std::max<std::size_t>(4, opts.krylov_budget / n));
  const int m = std::max(2, std::min({opts.krylov_dim, static_cast<int>(n), budget_dim}));
  const auto rows = static_cast<Eigen::Index>(n);

  std::mt19937_64 rng(opts.seed);
  Vec start = random_vector(n, rng);
  normalize(start);

  Eigen::MatrixXd basis(rows, m);
  Vec w(n);
  int applications = 0;
  double last_residual = 0.0;
  bool first = true;

  while (applications < opts.max_iter) {
    basis.col(0) = Eigen::Map<const Eigen::VectorXd>(start.data(), rows);
    std::vector<double> alpha;
    std::vector<double> beta;
    for (int j = 0; j < m && applications < opts.max_iter; ++j) {
      op.apply(std::span<const double>(basis.col(j).data(), n), w);
      ++applications;
      Eigen::Map<Eigen::VectorXd> wv(w.data(), rows);
      if (first) {
        first = false;
        if (wv.norm() < opts.tol) return {0.0, wv.norm(), applications};
      }
      alpha.push_back(wv.dot(basis.col(j)));
      const double before = wv.norm();
      wv -= alpha.back() * basis.col(j);
      if (j > 0) wv -= beta.back() * basis.col(j - 1);
      const auto used = basis.leftCols(j + 1);
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd h = used.transpose() * wv;
        wv.noalias() -= used * h;
        if (h.norm() < 1e-8 * before) break;
      }
      const double bnext = wv.norm();
      if (j + 1 == m || bnext <= 1e-13 * std::max(1.0, std::abs(alpha.back()))) break;
      beta.push_back(bnext);
      basis.col(j + 1) = wv / bnext;
    }

    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag(k);
    Eigen::VectorXd sub(std::max<Eigen::Index>(k - 1, 0));
    for (Eigen::Index i = 0; i < k; ++i) diag[i] = alpha[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < k; ++i) sub[i] = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd y = tri.eigenvectors().col(k - 1);

    Vec ritz(n);
    Eigen::Map<Eigen::VectorXd> rv(ritz.data(), rows);
    rv.noalias() = basis.leftCols(k) * y;
    rv.normalize();
    op.apply(ritz, w);
    ++applications;
    const double theta = dot(w, ritz);
    last_residual = residual_of(w, ritz, theta);
    if (last_residual <= opts.tol) return {std::max(theta, 0.0), last_residual, applications};
    start = std::move(ritz);
  }
  throw ConvergenceError("Lanczos did not reach tolerance in " + std::to_string(opts.max_iter) +
                             " applications",
                         last_residual);
}

}  // namespace

NormResult operator_norm_self_adjoint(const LinearOperator& op, const SpectralOptions& opts) {
  check_operator(op);
  if (!(opts.tol > 0.0) || opts.max_iter < 1) {
    throw Error(ErrorCode::Contract, "tolerance must be positive and max_iter >= 1");
  }
  if (!op.self_adjoint || !op.nonnegative) {
    throw Error(ErrorCode::Contract, "operator must be flagged self-adjoint and nonnegative");
  }
  return opts.method == EigenMethod::Lanczos ? lanczos(op, opts) : power_iteration(op, opts);
}

double adjointness_defect(const LinearOperator& a, const LinearOperator& b, std::uint64_t seed,
                          int trials) {
  check_operator(a);
  check_operator(b);
  if (a.dimension != b.dimension) {
    throw Error(ErrorCode::Contract, "operator dimensions differ: " + std::to_string(a.dimension) +
                                         " vs " + std::to_string(b.dimension));
  }
  std::mt19937_64 rng(seed ^ 0x5deece66dULL);
  double worst = 0.0;
  Vec ax(a.dimension);
  Vec by(a.dimension);
  for (int t = 0; t < trials; ++t) {
    Vec x = random_vector(a.dimension, rng);
    Vec y = random_vector(a.dimension, rng);
    a.apply(x, ax);
    b.apply(y, by);
    const double scale =
        norm(ax) * norm(y) + norm(x) * norm(by) + 1e-6 * norm(x) * norm(y);
    worst = std::max(worst, std::abs(dot(ax, y) - dot(x, by)) / scale);
  }
  return worst;
}

double self_adjointness_defect(const LinearOperator& a, std::uint64_t seed, int trials) {
  return adjointness_defect(a, a, seed, trials);
}

NormResult norm_via_symmetrization(const LinearOperator& a, const LinearOperator& a_star,
                                   const SpectralOptions& opts) {
  const double defect = adjointness_defect(a, a_star, opts.seed);
  if (defect > 1e-8) {
    throw Error(ErrorCode::Contract,
                "handles are not adjoint (relative defect " + std::to_string(defect) + ")");
  }
  auto scratch = std::make_shared<Vec>(a.dimension);
  LinearOperator composed;
  composed.dimension = a.dimension;
  composed.self_adjoint = true;
  composed.nonnegative = true;
  composed.apply = [a, a_star, scratch](std::span<const double> x, std::span<double> y) {
    a_star.apply(x, *scratch);
    a.apply(*scratch, y);
  };
  NormResult r = operator_norm_self_adjoint(composed, opts);
  r.value = std::sqrt(r.value);
  return r;
}

}  // namespace dlab
