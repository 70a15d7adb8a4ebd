#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "halolab/errors.hpp"
#include "halolab/grid.hpp"

using namespace halolab;

TEST_CASE("geometry indexing is row-major, last axis fastest") {
  auto g = make_geometry({3, 4, 5}, Rational(1, 2));
  CHECK(g->cell_count() == 60);
  CHECK(g->cell_measure() == Rational(1, 8));
  std::uint32_t xyz[] = {2, 1, 3};
  CHECK(g->index(xyz) == 2 * 20 + 1 * 5 + 3);
  for (std::uint64_t i = 0; i < g->cell_count(); ++i) {
    auto c = g->coords(i);
    CHECK(g->index(std::span(c.data(), 3)) == i);
  }
  std::uint32_t outside[] = {3, 0, 0};
  CHECK_THROWS_AS(g->index(outside), std::out_of_range);
  CHECK(g->descriptor() == "n=3;extent=3,4,5;h=1/2;");
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(make_geometry({}, Rational(1)), InvalidArgument);
  CHECK_THROWS_AS(make_geometry({1, 1, 1, 1}, Rational(1)), InvalidArgument);
  CHECK_THROWS_AS(make_geometry({4, 0}, Rational(1)), InvalidArgument);
  CHECK_THROWS_AS(make_geometry({4}, Rational(0)), InvalidArgument);
  CHECK_THROWS_AS(make_geometry({4096, 4097}, Rational(1)), BudgetExceeded);
  CHECK_NOTHROW(make_geometry({4096, 4096}, Rational(1)));
  CHECK_THROWS_AS(make_geometry({100000, 100000, 100000}, Rational(1)), BudgetExceeded);
}

TEST_CASE("measure") {
  CHECK(CellSet(make_geometry({7}, Rational(1, 3))).measure() == Rational(0));
  CHECK(CellSet::full(make_geometry({10}, Rational(1, 5))).measure() == Rational(2));
  auto g = make_geometry({4, 4}, Rational(1, 4));
  CellSet row(g);
  row.insert_range(4, 8);
  CHECK(row.measure() == Rational(1, 4));
}

TEST_CASE("membership outside the extent is rejected") {
  CellSet s(make_geometry({10}, Rational(1)));
  CHECK_THROWS_AS(s.insert(10), std::out_of_range);
  CHECK_THROWS_AS((void)s.contains(10), std::out_of_range);
  CHECK_THROWS_AS(s.insert_range(5, 11), std::out_of_range);
}

TEST_CASE("set algebra on the documented example") {
  auto g = make_geometry({8}, Rational(1, 8));
  std::uint64_t a[] = {0, 1, 2}, b[] = {2, 3};
  auto s = CellSet::from_cells(g, a), t = CellSet::from_cells(g, b);
  auto both = s & t;
  CHECK(both.cells() == std::vector<std::uint64_t>{2});
  CHECK(both.measure() == Rational(1, 8));
  CHECK((s - s).empty());
  CHECK((s | ~s) == CellSet::full(g));
  CHECK_THROWS_AS(set_algebra(SetOp::set_union, s, nullptr), InvalidArgument);
  CellSet other(make_geometry({8}, Rational(1, 4)));
  CHECK_THROWS_AS(s | other, InvalidArgument);
}

TEST_CASE("set algebra identities against a bool-vector reference") {
  for (std::uint32_t n : {1u, 7u, 63u, 64u, 65u, 130u}) {
    auto g = make_geometry({n}, Rational(1));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto s = random_set(g, Rational(1, 3), seed), t = random_set(g, Rational(2, 3), seed + 100);
      auto u = s | t, i = s & t, d = s - t, c = ~s;
      for (std::uint64_t x = 0; x < n; ++x) {
        CHECK(u.contains(x) == (s.contains(x) || t.contains(x)));
        CHECK(i.contains(x) == (s.contains(x) && t.contains(x)));
        CHECK(d.contains(x) == (s.contains(x) && !t.contains(x)));
        CHECK(c.contains(x) == !s.contains(x));
      }
      CHECK(u.measure() + i.measure() == s.measure() + t.measure());
      CHECK(~~s == s);
      CHECK(~(s | t) == (~s & ~t));
      CHECK(~(s & t) == (~s | ~t));
      CHECK(c.count() == n - s.count());
    }
  }
}

TEST_CASE("random_set") {
  auto g = make_geometry({64}, Rational(1, 64));
  CHECK(random_set(g, Rational(0), 3).empty());
  CHECK(random_set(g, Rational(1), 3) == CellSet::full(g));
  CHECK(random_set(g, Rational(1, 2), 7) == random_set(g, Rational(1, 2), 7));
  CHECK(!(random_set(g, Rational(1, 2), 7) == random_set(g, Rational(1, 2), 8)));
  CHECK_THROWS_AS(random_set(g, Rational(3, 2), 1), InvalidArgument);
  CHECK_THROWS_AS(random_set(g, Rational(-1, 2), 1), InvalidArgument);
  auto big = make_geometry({20000}, Rational(1));
  auto s = random_set(big, Rational(1, 4), 11);
  CHECK(s.count() > 4700);
  CHECK(s.count() < 5300);
}

TEST_CASE("hex serialization puts the most significant cell last") {
  auto g = make_geometry({4}, Rational(1, 4));
  std::uint64_t cells[] = {0, 1, 2};
  auto s = CellSet::from_cells(g, cells);
  CHECK(s.hex() == "7");
  CHECK(s.to_string() == "n=1;extent=4;h=1/4;7");
  std::uint64_t last[] = {3};
  CHECK(CellSet::from_cells(g, last).hex() == "8");

  auto g2 = make_geometry({3, 5}, Rational(2, 7));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto r = random_set(g2, Rational(1, 2), seed);
    CHECK(CellSet::parse(r.to_string()) == r);
    CHECK(CellSet::from_hex(g2, r.hex()) == r);
  }
  CHECK_THROWS_AS(CellSet::from_hex(g, "f0"), InvalidArgument);
  CHECK_THROWS_AS(CellSet::from_hex(g, "g"), InvalidArgument);
  CHECK_THROWS_AS(CellSet::parse("n=1;extent=4;h=1/4"), InvalidArgument);
  auto g3 = make_geometry({3}, Rational(1));
  CHECK_THROWS_AS(CellSet::from_hex(g3, "8"), InvalidArgument);
}

TEST_CASE("lexicographic order is the binary value with the highest cell most significant") {
  auto g = make_geometry({4}, Rational(1));
  std::uint64_t a[] = {0, 1, 2}, b[] = {3};
  CHECK(lex_compare(CellSet::from_cells(g, a), CellSet::from_cells(g, b)) < 0);
  auto g2 = make_geometry({70}, Rational(1));
  std::uint64_t lo[] = {63}, hi[] = {64};
  CHECK(lex_compare(CellSet::from_cells(g2, lo), CellSet::from_cells(g2, hi)) < 0);
  CHECK(lex_compare(CellSet::from_cells(g2, hi), CellSet::from_cells(g2, hi)) == 0);
}
