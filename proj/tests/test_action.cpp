#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "dlab/action.hpp"
#include "dlab/error.hpp"

using namespace dlab;

namespace {

bool is_permutation(const ActionSpace& s, const Element& g) {
  std::set<std::size_t> seen;
  for (std::size_t x = 0; x < s.size(); ++x) seen.insert(s.act(g, x));
  return seen.size() == s.size();
}

}  // namespace

TEST_CASE("convergents of sqrt 2") {
  const auto c = convergents(std::sqrt(2.0), 200);
  REQUIRE(c.size() >= 5);
  CHECK(c[1] == std::pair<std::int64_t, std::int64_t>{3, 2});
  CHECK(c.back() == std::pair<std::int64_t, std::int64_t>{239, 169});
  const auto f = choose_flow(std::sqrt(2.0), 1024, 6);
  CHECK(f.p == 239);
  CHECK(f.r == 169);
  CHECK(f.cells == 1014);
}

TEST_CASE("circle rotation") {
  const auto z = GroupDescriptor::integer_lattice(1);
  const auto s = ActionSpace::circle_rotation(z, 10, 3);
  CHECK(s.size() == 10);
  CHECK(s.act({1}, 0) == 7);
  CHECK(is_permutation(s, {4}));
  const auto r = GroupDescriptor::real_grid(1, 4);
  const auto c = ActionSpace::circle_rotation(r, 12);
  CHECK(c.admits({1}));
  CHECK(c.act({1}, 5) == 2);
  const auto bad = ActionSpace::circle_rotation(r, 10);
  CHECK_FALSE(bad.admits({1}));
  CHECK_THROWS_AS(bad.require_atoms({{1}, {2}}), Error);
  CHECK(c.fixes_some_cell({4}));
  CHECK_FALSE(c.fixes_some_cell({1}));
}

TEST_CASE("torus translation") {
  const auto r = GroupDescriptor::real_grid(1, 2);
  const auto t = ActionSpace::torus_translation(r, 16, 3, 2);
  CHECK(t.size() == 256);
  CHECK(t.shift({1}) == std::vector<std::int64_t>{8, 12});
  CHECK(is_permutation(t, {1}));
  CHECK(t.act(r.inverse({1}), t.index({0, 0})) == t.index({8, 12}));
  const auto coarse = ActionSpace::torus_translation(r, 10, 3, 2);
  CHECK_THROWS_AS(coarse.require_atoms({{1}}), Error);
}

TEST_CASE("pullback_sum equals summed single pullbacks") {
  const auto r = GroupDescriptor::real_grid(1, 2);
  const auto t = ActionSpace::torus_translation(r, 16, 3, 2);
  std::vector<double> in(t.size()), a(t.size(), 0.0), b(t.size(), 0.0);
  std::iota(in.begin(), in.end(), 0.0);
  const std::vector<std::pair<Element, double>> atoms{{{-1}, 0.25}, {{0}, 0.5}, {{1}, 0.25}};
  for (const auto& [g, c] : atoms) t.accumulate_pullback(g, c, in, a);
  t.pullback_sum(atoms, in, b);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]));
}

TEST_CASE("bernoulli windows and permutations") {
  const auto b = ActionSpace::bernoulli_window(3, 2);
  CHECK(b.size() == 128);
  CHECK(b.fixes_some_cell({1}));
  CHECK(is_permutation(b, {1}));
  CHECK(b.act({7}, 5) == 5);

  const auto p1 = ActionSpace::finite_permutation({{1, 2, 0, 3}});
  CHECK(p1.group() == GroupDescriptor::integer_lattice(1));
  CHECK(p1.act({1}, 0) == 2);
  const auto p2 = ActionSpace::finite_permutation({{1, 0, 2}, {0, 2, 1}});
  CHECK(p2.group() == GroupDescriptor::free_group(2));
  CHECK(p2.act({1, 2}, 0) == p2.act({2}, p2.act({1}, 0)) );
  CHECK_THROWS_AS(ActionSpace::finite_permutation({{0, 0, 1}}), Error);
}
