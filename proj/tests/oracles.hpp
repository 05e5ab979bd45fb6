#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "dlab/action.hpp"
#include "dlab/measure.hpp"

namespace oracle {

// Number of the (2k)^n words in the 2k free generators that reduce to e.
inline std::uint64_t free_word_returns(int k, int n) {
  const int letters = 2 * k;
  std::vector<int> word(static_cast<std::size_t>(n), 0);
  std::uint64_t hits = 0;
  while (true) {
    std::vector<int> stack;
    for (int w : word) {
      const int l = w < k ? w + 1 : -(w - k + 1);
      if (!stack.empty() && stack.back() == -l) {
        stack.pop_back();
      } else {
        stack.push_back(l);
      }
    }
    if (stack.empty()) ++hits;
    int i = 0;
    while (i < n && ++word[static_cast<std::size_t>(i)] == letters) word[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
  }
  return hits;
}

inline double free_word_return(int k, int n) {
  return static_cast<double>(free_word_returns(k, n)) / std::pow(2.0 * k, n);
}

// (C(2n, n) 4^-n)^(1/2n) through log-gamma.
inline double binomial_root(int n) {
  const double lg = std::lgamma(2.0 * n + 1) - 2 * std::lgamma(n + 1.0) - 2.0 * n * std::log(2.0);
  return std::exp(lg / (2.0 * n));
}

// Dense matrix of phi -> sum mu(g) phi(g^-1 x), restricted to zero-mean vectors.
inline Eigen::MatrixXd dense_koopman(const dlab::ActionSpace& space, const dlab::Measure& mu) {
  const auto n = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [g, m] : mu.atoms()) {
    for (Eigen::Index x = 0; x < n; ++x) {
      a(x, static_cast<Eigen::Index>(space.act(g, static_cast<std::size_t>(x)))) += m;
    }
  }
  const Eigen::MatrixXd p =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  return p * a * p;
}

inline double dense_norm(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

// |sum mu(k) exp(-2 pi i xi k)| for a measure on Z or a 1-d grid (real coordinate k/q).
inline double dft_modulus(const dlab::Measure& mu, double xi) {
  std::complex<double> s = 0;
  const double q = mu.group().kind() == dlab::GroupKind::RealGrid
                       ? static_cast<double>(mu.group().resolution())
                       : 1.0;
  for (const auto& [g, m] : mu.atoms()) {
    s += m * std::polar(1.0, -2 * std::numbers::pi * xi * static_cast<double>(g[0]) / q);
  }
  return std::abs(s);
}

inline double dft_sup(const dlab::Measure& mu, double bound, int samples) {
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double xi = -bound + 2 * bound * i / (samples - 1);
    best = std::max(best, dft_modulus(mu, xi));
  }
  return std::max(best, dft_modulus(mu, 0.0));
}

}  // namespace oracle
