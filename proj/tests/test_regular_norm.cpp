#include <doctest.h>

#include <cmath>

#include "dlab/error.hpp"
#include "dlab/regular_norm.hpp"
#include "oracles.hpp"

using namespace dlab;

TEST_CASE("Berg-Christensen on Z matches the binomial oracle") {
  const auto z = GroupDescriptor::integer_lattice(1);
  const auto mu = Measure::from_atoms(z, {{{1}, 0.5}, {{-1}, 0.5}});
  const auto est = berg_christensen_estimate(mu, {{0}}, 20);
  CHECK(est.method == NormMethod::BergChristensen);
  // eta = mu * mu^* puts 1/4, 1/2, 1/4 on -2, 0, 2; eta^n(0) = C(2n,n) 4^-n
  CHECK(est.value == doctest::Approx(oracle::binomial_root(20)).epsilon(1e-12));
  for (const auto& [n, v] : est.sequence) {
    CHECK(v == doctest::Approx(oracle::binomial_root(n)).epsilon(1e-12));
  }
  CHECK(est.value <= 1.0);
}

TEST_CASE("free group radial path equals word enumeration") {
  for (int k = 1; k <= 3; ++k) {
    for (int n = 0; n <= 6; ++n) {
      CHECK(free_group_radial_return(k, n) == doctest::Approx(oracle::free_word_return(k, n)).epsilon(1e-13));
    }
  }
  const auto f2 = GroupDescriptor::free_group(2);
  const auto mu = Measure::uniform(f2, f2.standard_generators());
  CHECK(is_uniform_on_free_generators(mu));
  const auto est = berg_christensen_estimate(mu, {{}}, 100);
  CHECK(est.method == NormMethod::FreeRadial);
  CHECK(est.value < std::sqrt(3.0) / 2);
  CHECK(est.value > 0.8);
}

TEST_CASE("explicit convolution on F_2 agrees with the radial chain") {
  const auto f2 = GroupDescriptor::free_group(2);
  const auto mu = Measure::from_atoms(f2, {{{1}, 0.25}, {{-1}, 0.25}, {{2}, 0.25}, {{-2}, 0.2500001}});
  CHECK_FALSE(is_uniform_on_free_generators(mu));
  const auto est = berg_christensen_estimate(mu, {{}}, 4);
  const auto radial = std::pow(free_group_radial_return(2, 8), 1.0 / 8);
  CHECK(est.value == doctest::Approx(radial).epsilon(1e-5));
}

TEST_CASE("Fourier estimate matches a brute-force DFT") {
  const auto z = GroupDescriptor::integer_lattice(1);
  const auto mu = Measure::from_atoms(z, {{{1}, 0.2}, {{-1}, 0.2}, {{2}, 0.6}});
  const auto est = fourier_norm_abelian(mu);
  CHECK(est.value == doctest::Approx(oracle::dft_sup(mu, 0.5, 1001)).epsilon(1e-12));
  CHECK(est.value == doctest::Approx(1.0));
  FourierOptions fo;
  fo.min_frequency = 0.1;
  const auto away = fourier_norm_abelian(mu, fo);
  CHECK(away.value < 1.0);
  CHECK(fourier_modulus(mu, {0.25}) == doctest::Approx(oracle::dft_modulus(mu, 0.25)));
  CHECK_THROWS_AS(fourier_norm_abelian(Measure::dirac(GroupDescriptor::free_group(2), {1})), Error);
}

TEST_CASE("amenable norm is the total mass for generating support") {
  const auto z2 = GroupDescriptor::integer_lattice(2);
  const auto gens = z2.standard_generators();
  std::vector<Element> sym;
  for (const auto& g : gens) {
    sym.push_back(g);
    sym.push_back(z2.inverse(g));
  }
  CHECK(amenable_norm(Measure::uniform(z2, sym, 0.7)).value == doctest::Approx(0.7));
  CHECK(generated_subgroup_index(z2, make_set({{2, 0}, {-2, 0}, {0, 1}, {0, -1}})) == 2);
  CHECK(generated_subgroup_index(z2, make_set({{1, 1}, {-1, -1}})) == 0);
  CHECK_THROWS_AS(amenable_norm(Measure::from_atoms(z2, {{{2, 0}, 0.5}, {{-2, 0}, 0.5}})), Error);
  CHECK_THROWS_AS(amenable_norm(Measure::uniform(GroupDescriptor::free_group(2),
                                                 GroupDescriptor::free_group(2).standard_generators())),
                  Error);
}
