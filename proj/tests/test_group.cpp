#include <doctest.h>

#include "dlab/error.hpp"
#include "dlab/group.hpp"

using namespace dlab;

TEST_CASE("lattice arithmetic") {
  const auto z2 = GroupDescriptor::integer_lattice(2);
  const Element a{3, -1}, b{-2, 5};
  CHECK(z2.multiply(a, b) == Element{1, 4});
  CHECK(z2.inverse(a) == Element{-3, 1});
  CHECK(z2.is_identity(z2.multiply(a, z2.inverse(a))));
  CHECK(z2.ball(1).size() == 5);
  CHECK(z2.standard_generators().size() == 4);
}

TEST_CASE("free group words reduce") {
  const auto f2 = GroupDescriptor::free_group(2);
  const Element a{1, 2}, b{-2, -1, 2};
  CHECK(f2.multiply(a, b) == Element{2});
  CHECK(f2.is_identity(f2.multiply(a, f2.inverse(a))));
  CHECK(f2.multiply(Element{1}, Element{-1}).empty());
  CHECK_FALSE(f2.is_abelian());
  CHECK_FALSE(f2.is_amenable());
  // ball of radius r in F_2 has 1 + 4(3^r - 1)/2 elements
  CHECK(f2.ball(1).size() == 5);
  CHECK(f2.ball(2).size() == 17);
  CHECK(f2.ball(3).size() == 53);
  CHECK_THROWS_AS(f2.validate(Element{1, -1}), Error);
  CHECK_THROWS_AS(f2.validate(Element{3}), Error);
}

TEST_CASE("grid and torus") {
  const auto r = GroupDescriptor::real_grid(1, 4);
  CHECK(r.cell_weight() == doctest::Approx(0.25));
  CHECK(r.real_coordinates(Element{6})[0] == doctest::Approx(1.5));
  CHECK_FALSE(r.is_discrete());
  const auto t = GroupDescriptor::torus_grid(1, 8);
  CHECK(t.multiply(Element{5}, Element{6}) == Element{3});
  CHECK(t.inverse(Element{3}) == Element{5});
}

TEST_CASE("set operations") {
  const auto z = GroupDescriptor::integer_lattice(1);
  const ElementSet b = make_set({{-1}, {0}, {1}});
  CHECK(set_power(z, b, 3).size() == 7);
  CHECK(set_power(z, b, 0) == ElementSet{{0}});
  CHECK(is_symmetric(z, b));
  CHECK_FALSE(is_symmetric(z, make_set({{0}, {1}})));
  CHECK(set_inverse(z, make_set({{2}, {5}})) == make_set({{-5}, {-2}}));
  CHECK_THROWS_AS(set_product(z, set_power(z, b, 5), b, 5), Error);

  const auto f2 = GroupDescriptor::free_group(2);
  const auto gens = make_set(f2.standard_generators());
  CHECK(set_power(f2, make_set({{}, {1}, {-1}, {2}, {-2}}), 2).size() == 17);
  CHECK(is_symmetric(f2, gens));
}
