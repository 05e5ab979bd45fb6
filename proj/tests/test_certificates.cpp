#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dlab/certificates.hpp"
#include "dlab/error.hpp"
#include "dlab/koopman.hpp"
#include "oracles.hpp"

using namespace dlab;

TEST_CASE("cell set helpers") {
  const auto z = GroupDescriptor::integer_lattice(1);
  const auto s = ActionSpace::circle_rotation(z, 10);
  CHECK(make_cells({3, 1, 3}) == CellSet{1, 3});
  CHECK(image(s, {{-1}, {0}, {1}}, {0}) == CellSet{0, 1, 9});
  CHECK(power_image(s, {{-1}, {0}, {1}}, 2, {0}) == CellSet{0, 1, 2, 8, 9});
  CHECK(cell_mass(s, {0, 1}) == doctest::Approx(0.2));
  CHECK(overlap_ratio(s, {1}, {0, 1, 2, 3}) == doctest::Approx(0.75));
  const auto comp = build_companion_set(s, {0, 1}, {0, 1, 2});
  CHECK(comp == CellSet{3, 4});
}

TEST_CASE("rayleigh value against a dense quadratic form") {
  const auto z = GroupDescriptor::integer_lattice(1);
  const auto s = ActionSpace::circle_rotation(z, 20);
  const auto nu = Measure::from_atoms(z, {{{1}, 0.3}, {{-1}, 0.3}, {{0}, 0.4}});
  const CellSet b{0, 1, 2, 3}, comp{10, 11, 12, 13};
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(20);
  for (auto x : b) phi(static_cast<Eigen::Index>(x)) = 1;
  for (auto x : comp) phi(static_cast<Eigen::Index>(x)) = -1;
  const auto a = oracle::dense_koopman(s, nu);
  const double truth = phi.dot(a * phi) / phi.squaredNorm();
  CHECK(rayleigh_value(s, nu, b, comp) == doctest::Approx(truth).epsilon(1e-12));
}

TEST_CASE("certificate on a small torus flow") {
  const auto r = GroupDescriptor::real_grid(1, 2);
  const auto fc = choose_flow(std::sqrt(2.0), 200, 2);
  const auto t = ActionSpace::torus_translation(r, fc.cells, fc.p, fc.r);
  const auto mu = Measure::uniform_interval(r, -1.0, 1.0, false);
  const auto run = certify(t, mu, 0, 4);
  const auto& rep = run.report;
  REQUIRE(rep.rows.size() == 4);
  CHECK(rep.cond1);
  CHECK(rep.cond2);
  for (const auto& row : rep.rows) {
    CHECK(row.nu_snb < 0.5);
    REQUIRE(row.rayleigh.has_value());
    if (row.chain) CHECK(*row.rayleigh >= *row.chain - 1e-10);
  }
  REQUIRE(rep.norm_lower_bound.has_value());
  const double delta = discrepancy(t, mu, 1e-9);
  CHECK(*rep.norm_lower_bound <= delta + 2e-9);
  CHECK(*rep.norm_lower_bound > 0.5);
}

TEST_CASE("sequence validation") {
  const auto z = GroupDescriptor::integer_lattice(1);
  const auto s = ActionSpace::circle_rotation(z, 10);
  ModerateGrowthSequence seq{s, {{1}}, {{0}}, {{0}}, {}, 1};
  CHECK_THROWS_AS(seq.validate(), Error);
  seq.s = {{-1}, {0}, {1}};
  CHECK_NOTHROW(seq.validate());
  seq.max_n = 2;
  CHECK_THROWS_AS(seq.validate(), Error);
}

TEST_CASE("too coarse a grid cannot host the sequence") {
  const auto r = GroupDescriptor::real_grid(1, 2);
  const auto t = ActionSpace::torus_translation(r, 16, 3, 2);
  const ElementSet s{{-1}, {0}, {1}};
  CHECK_THROWS_AS(orbit_neighborhood_sequence(t, 0, s, 6), Error);
}
