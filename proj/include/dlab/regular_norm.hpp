#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlab/measure.hpp"

namespace dlab {

enum class NormMethod { BergChristensen, FourierAbelian, AmenableMass, FreeRadial };

const char* to_string(NormMethod m);

/// Estimate of the regular-representation norm ||lambda_G(mu)||.
struct NormEstimate {
  double value = 0.0;
  NormMethod method = NormMethod::BergChristensen;
  /// (n, raw term). Berg-Christensen: (eta^{*n}(F))^{1/n} with eta = mu*mu^*.
  std::vector<std::pair<int, double>> sequence;
  bool extrapolated = false;
  std::string note;
  std::vector<std::string> warnings;
};

/// Default F: {e} for discrete kinds, the one-cell grid ball for grid kinds.
ElementSet default_neighborhood(const GroupDescriptor& g);

/// Lower bound on ||lambda_G(mu)|| from convolution powers of eta = mu*mu^*.
/// On a free group with mu uniform on the 2k generators and F = {e} the
/// birth-death oracle replaces explicit convolution (method FreeRadial).
NormEstimate berg_christensen_estimate(const Measure& mu, const ElementSet& neighborhood, int n_max,
                                       std::size_t cap = kDefaultSupportCap);

/// Return probability at e after n steps of the simple random walk on F_k.
double free_group_radial_return(int rank, int n);

/// All return probabilities p_0..p_n in one O(n^2) sweep.
std::vector<double> free_group_radial_returns(int rank, int n);

struct FourierOptions {
  double freq_bound = 0.5;
  int freq_samples = 1001;
  /// Only frequencies with |xi| >= min_frequency are sampled (xi = 0 is
  /// always included when this is 0).
  double min_frequency = 0.0;
};

/// sup over a uniform frequency sample of |mu^(xi)|; abelian kinds only.
NormEstimate fourier_norm_abelian(const Measure& mu, const FourierOptions& opts = {});
/// |sum_g mu(g) exp(-2 pi i <xi, x(g)>)| at one frequency.
double fourier_modulus(const Measure& mu, const std::vector<double>& xi);

/// Kesten: ||lambda_G(mu)|| = mu(G) on amenable kinds for symmetric measures
/// with generating support. Non-symmetric input is checked through mu*mu^*.
NormEstimate amenable_norm(const Measure& mu);

/// Index of the subgroup generated by `elements` (together with N e_i on a
/// torus) inside the full lattice; 0 when the generated subgroup has lower rank.
long long generated_subgroup_index(const GroupDescriptor& g, const ElementSet& elements,
                                   std::vector<Element>* basis = nullptr);

/// True iff mu is a positive multiple of the uniform measure on the 2k free generators.
bool is_uniform_on_free_generators(const Measure& mu);

}  // namespace dlab
