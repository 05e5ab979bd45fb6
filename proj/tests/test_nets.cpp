#include <doctest.h>

#include "dlab/error.hpp"
#include "dlab/nets.hpp"

using namespace dlab;

TEST_CASE("hand-simulated net on Z") {
  const auto z = GroupDescriptor::integer_lattice(1);
  const ElementSet b = make_set({{-1}, {0}, {1}});
  const ElementSet a = make_set({{0}, {1}});
  const auto inst = greedy_maximal_net(z, set_power(z, b, 5), a);
  // scan -5..5: accept -5, then -3, -1, 1, 3, 5
  CHECK(inst.net == ElementSet{{-5}, {-3}, {-1}, {1}, {3}, {5}});
  CHECK(is_separated(inst));
  CHECK(is_maximal(inst));
  const auto rep = verify_net_bounds(inst);
  CHECK(rep.net_size == 6);
  CHECK(rep.packing_lhs == 12);
  CHECK(rep.packing_rhs == 12);
  CHECK(rep.covering_lhs == 11);
  CHECK(rep.covering_rhs == 18);
  CHECK(rep.ok());
}

TEST_CASE("non-maximal net is detected") {
  const auto z = GroupDescriptor::integer_lattice(1);
  NetInstance inst{z, make_set({{0}}), make_set({{0}, {1}, {2}}), make_set({{0}})};
  CHECK(is_separated(inst));
  CHECK_FALSE(is_maximal(inst));
}

TEST_CASE("nets on F_2 and Z^2") {
  const auto f2 = GroupDescriptor::free_group(2);
  const ElementSet b = make_set(f2.ball(1));
  const auto inst = greedy_maximal_net(f2, set_power(f2, b, 3), make_set({{}, {1}}));
  CHECK(verify_net_bounds(inst).ok());
  const auto z2 = GroupDescriptor::integer_lattice(2);
  const auto box = make_set(z2.ball(1.5));
  const auto inst2 = greedy_maximal_net(z2, set_power(z2, box, 3), box);
  CHECK(verify_net_bounds(inst2).ok());
}

TEST_CASE("ratio study and covering witness") {
  const auto z = GroupDescriptor::integer_lattice(1);
  const ElementSet b = make_set({{-1}, {0}, {1}});
  const auto study = net_ratio_study(z, make_set({{0}, {1}}), make_set({{0}, {1}, {2}}), b, 3, 12);
  CHECK(study.rows.size() == 10);
  CHECK(study.contained);
  CHECK(study.c1 <= study.min_ratio);
  CHECK(study.max_ratio <= study.c2);
  const auto w = covering_witness(z, make_set({{0}, {1}}), b, 3);
  CHECK(w.contains);
  for (bool p : w.power_contains) CHECK(p);
  CHECK_THROWS_AS(net_ratio_study(z, b, b, b, 2, 50, 40), Error);
}
