#include <doctest.h>

#include "dlab/error.hpp"
#include "dlab/measure.hpp"

using namespace dlab;

TEST_CASE("atoms merge and reject negatives") {
  const auto z = GroupDescriptor::integer_lattice(1);
  const auto mu = Measure::from_atoms(z, {{{1}, 0.25}, {{1}, 0.25}, {{-1}, 0.5}, {{3}, 0.0}});
  CHECK(mu.support_size() == 2);
  CHECK(mu.total_mass() == doctest::Approx(1.0));
  CHECK(mu.at({1}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(Measure::from_atoms(z, {{{0}, -0.1}}), Error);
}

TEST_CASE("convolution on Z is binomial") {
  const auto z = GroupDescriptor::integer_lattice(1);
  const auto mu = Measure::from_atoms(z, {{{1}, 0.5}, {{-1}, 0.5}});
  const auto m4 = convolution_power(mu, 4);
  CHECK(m4.at({0}) == doctest::Approx(6.0 / 16));
  CHECK(m4.at({2}) == doctest::Approx(4.0 / 16));
  CHECK(m4.at({4}) == doctest::Approx(1.0 / 16));
  CHECK(convolution_power(mu, 0).at({0}) == 1.0);
  CHECK(is_symmetric(mu));
}

TEST_CASE("involution and symmetrization") {
  const auto z = GroupDescriptor::integer_lattice(1);
  const auto mu = Measure::from_atoms(z, {{{1}, 0.7}, {{2}, 0.3}});
  const auto inv = involute(mu);
  CHECK(inv.at({-1}) == doctest::Approx(0.7));
  const auto eta = symmetrize(mu);
  CHECK(is_symmetric(eta));
  CHECK(eta.at({0}) == doctest::Approx(0.49 + 0.09));
  CHECK(eta.at({1}) == doctest::Approx(0.21));
}

TEST_CASE("free group convolution is noncommutative") {
  const auto f2 = GroupDescriptor::free_group(2);
  const auto a = Measure::dirac(f2, {1});
  const auto b = Measure::dirac(f2, {2});
  CHECK(convolve(a, b).at({1, 2}) == 1.0);
  CHECK(convolve(b, a).at({2, 1}) == 1.0);
}

TEST_CASE("grid interval measure") {
  const auto r = GroupDescriptor::real_grid(1, 8);
  const auto closed = Measure::uniform_interval(r, 0.0, 1.0, false);
  const auto open = Measure::uniform_interval(r, 0.0, 1.0, true);
  CHECK(closed.support_size() == 9);
  CHECK(open.support_size() == 8);
  CHECK(open.total_mass() == doctest::Approx(1.0));
  CHECK(mass_on_set(open, {{0}, {1}}) == doctest::Approx(0.25));
}

TEST_CASE("serialization round trip") {
  const auto f2 = GroupDescriptor::free_group(2);
  const auto mu = Measure::from_atoms(f2, {{{1, 2}, 0.1}, {{-2}, 0.9}, {{}, 0.123456789}});
  const auto back = parse_measure(serialize(mu));
  CHECK(back.group() == f2);
  CHECK(approx_equal(mu, back, 1e-15));
  CHECK(serialize(back) == serialize(mu));
}

TEST_CASE("truncate, regularize, scale") {
  const auto z = GroupDescriptor::integer_lattice(1);
  const auto mu = Measure::from_atoms(z, {{{0}, 0.5}, {{5}, 0.5}});
  CHECK(truncate(mu, 2).total_mass() == doctest::Approx(0.5));
  CHECK(regularize(mu, 0.1, 1).total_mass() == doctest::Approx(1.3));
  CHECK(scale(mu, 2).total_mass() == doctest::Approx(2.0));
}
