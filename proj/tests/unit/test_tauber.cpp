#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "halolab/errors.hpp"
#include "halolab/tauber.hpp"
#include "helpers.hpp"

using namespace halolab;
using testing::line;
using testing::to_cells;

TEST_CASE("least_power_at_least") {
  CHECK(least_power_at_least(Rational(2), Rational(1)) == 0);
  CHECK(least_power_at_least(Rational(2), Rational(5)) == 3);
  CHECK(least_power_at_least(Rational(2), Rational(4)) == 2);
  CHECK(least_power_at_least(Rational(3, 2), Rational(81, 16)) == 4);
  CHECK(least_power_at_least(Rational(3, 2), Rational(82, 16)) == 5);
  CHECK_THROWS_AS(least_power_at_least(Rational(1), Rational(2)), InvalidArgument);
}

TEST_CASE("k_alpha_gamma documented values") {
  CHECK(k_alpha_gamma(Rational(1, 4), Rational(1, 2), 1) == 3);
  CHECK(k_alpha_gamma(Rational(1, 10), Rational(1, 2), 2) == 10);
  CHECK_THROWS_AS(k_alpha_gamma(Rational(1, 2), Rational(1, 2), 1), InvalidArgument);
  CHECK_THROWS_AS(k_alpha_gamma(Rational(0), Rational(1, 2), 1), InvalidArgument);
  CHECK_THROWS_AS(k_alpha_gamma(Rational(1, 4), Rational(1), 1), InvalidArgument);
}

TEST_CASE("k_alpha_gamma agrees with a floating evaluation away from ties") {
  // Pairs where no ceiling argument is within 1e-9 of an integer.
  for (int n = 1; n <= 3; ++n)
    for (int an = 1; an <= 9; ++an)
      for (int gn = an + 1; gn <= 9; ++gn) {
        Rational a(an, 10), g(gn, 10);
        long double ad = an / 10.0L, gd = gn / 10.0L;
        long double r1 = std::log(gd / ad) / std::log(1 / gd);
        long double r2 = std::max(std::log(gd * std::pow(2.0L, n)), 0.0L) / std::log(1 / gd);
        if (std::fabs(r1 - std::round(r1)) < 1e-9L || std::fabs(r2 - std::round(r2)) < 1e-9L) continue;
        CHECK(k_alpha_gamma(a, g, n) == oracle::k_alpha_gamma(ad, gd, n));
      }
}

TEST_CASE("k_alpha_gamma is nonincreasing in alpha") {
  for (int n = 1; n <= 3; ++n)
    for (int gn = 2; gn < 20; ++gn) {
      std::uint64_t prev = UINT64_MAX;
      for (int an = 1; an < gn; ++an) {
        auto k = k_alpha_gamma(Rational(an, 20), Rational(gn, 20), n);
        CHECK(k <= prev);
        prev = k;
      }
    }
}

TEST_CASE("orbit documented values") {
  auto g = line(8);
  std::uint64_t e[] = {3, 4};
  auto set = CellSet::from_cells(g, e);
  auto orbit = halo_orbit(set, Rational(1, 2), 1, BasisFamily::intervals());
  REQUIRE(orbit.sets.size() == 2);
  CHECK(orbit.sets[0] == set);
  CHECK(orbit.sets[1].cells() == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6});
  CHECK(orbit.grew(1));

  CHECK(halo_orbit(set, Rational(1, 2), 0, BasisFamily::intervals()).sets.size() == 1);
  auto empty = halo_orbit(CellSet(g), Rational(1, 2), 4, BasisFamily::intervals());
  for (const auto& s : empty.sets) CHECK(s.empty());
  CHECK_THROWS_AS(halo_orbit(set, Rational(1), 1, BasisFamily::intervals()), InvalidArgument);
}

TEST_CASE("orbit matches the oracle and nests when scale_min is 1") {
  std::vector<std::pair<BasisFamily, std::vector<oracle::Element>>> cases = {
      {BasisFamily::intervals(), oracle::intervals(20)},
      {BasisFamily::intervals(1, 6), oracle::intervals(20, 1, 6)},
  };
  auto g = line(20);
  for (const auto& [fam, ref] : cases)
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      auto set = random_set(g, Rational(1, 5), seed);
      for (Rational gamma : {Rational(1, 3), Rational(1, 2), Rational(3, 4)}) {
        auto orbit = halo_orbit(set, gamma, 5, fam);
        auto want = oracle::orbit(to_cells(set), ref, testing::to_frac(gamma), 5);
        for (std::size_t j = 0; j < want.size(); ++j) CHECK(to_cells(orbit.sets[j]) == want[j]);
        for (std::size_t j = 1; j < orbit.sets.size(); ++j) {
          CHECK(orbit.sets[j - 1].is_subset_of(orbit.sets[j]));
          CHECK(orbit.measures[j] == orbit.sets[j].measure());
        }
        auto one = halo_orbit(set, gamma, 1, fam);
        CHECK(one.sets[1] == superlevel(maximal_field(set, fam), gamma, Bound::inclusive));
      }
    }
}

TEST_CASE("orbit budget errors name the step") {
  auto g = line(200);
  try {
    halo_orbit(CellSet::full(g), Rational(1, 2), 2, BasisFamily::intervals(), {100, 1});
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
}

TEST_CASE("containment experiment") {
  auto g = line(64);
  auto params = IterationParams::make(Rational(1, 4), Rational(1, 2), 1);
  CellSet set(g);
  for (std::uint64_t c = 0; c < 32; c += 2) set.insert(c);
  auto r = rasterize_element(IntervalSpec{0, 32}, *g);
  auto report = containment_experiment(r, set, params, BasisFamily::intervals());
  CHECK(report.k == 3);
  CHECK(report.average == Rational(1, 2));
  CHECK(report.orbit.sets.size() == 4);
  // Average 1/2 >= gamma: the element certifies its own cells at the first step.
  CHECK(report.contained);
  CHECK(report.first_step == std::optional<std::uint64_t>(1));

  auto inside = rasterize_element(IntervalSpec{4, 5}, *g);
  auto self = containment_experiment(inside, set, params, BasisFamily::intervals());
  CHECK(self.first_step == std::optional<std::uint64_t>(1));

  auto sparse = rasterize_element(IntervalSpec{40, 60}, *g);
  CHECK_THROWS_AS(containment_experiment(sparse, set, params, BasisFamily::intervals()), InvalidArgument);
  CHECK_THROWS_AS(IterationParams::make(Rational(1, 2), Rational(1, 2), 1), InvalidArgument);
  try {
    IterationParams::make(Rational(3, 4), Rational(1, 2), 1);
  } catch (const InvalidArgument& e) {
    CHECK(e.field() == "alpha");
  }
}

TEST_CASE("containment first step matches the oracle orbit") {
  auto g = line(40);
  auto params = IterationParams::make(Rational(3, 10), Rational(1, 2), 1);
  auto ref = oracle::intervals(40);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto set = random_set(g, Rational(2, 5), seed);
    auto r = rasterize_element(IntervalSpec{5, 25}, *g);
    if (average(r, set) < params.alpha) continue;
    auto report = containment_experiment(r, set, params, BasisFamily::intervals());
    auto orbit = oracle::orbit(to_cells(set), ref, {1, 2}, report.k);
    std::optional<std::uint64_t> first;
    for (std::size_t j = 1; j < orbit.size() && !first; ++j) {
      bool all = true;
      for (std::size_t c = 5; c < 25; ++c) all = all && orbit[j][c];
      if (all) first = j;
    }
    CHECK(report.first_step == first);
  }
}

TEST_CASE("chained bound report") {
  auto g = line(64);
  auto params = IterationParams::make(Rational(1, 4), Rational(1, 2), 1);
  std::uint64_t one[] = {30};
  auto set = CellSet::from_cells(g, one);
  auto report = chained_bound_report(set, params, BasisFamily::intervals(), Rational(3));
  CHECK(report.gamma_tilde == Rational(3, 4));
  CHECK(report.k == k_alpha_gamma(Rational(1, 4), Rational(3, 4), 1));
  // Strict level at 1/4 by brute force over intervals.
  auto level = oracle::superlevel(oracle::maximal(to_cells(set), oracle::intervals(64)), {1, 4}, true);
  CHECK(report.level_measure == Rational(static_cast<long long>(oracle::count(level)), 64));
  CHECK(report.bound == pow(Rational(3), static_cast<unsigned>(report.k)) * Rational(1, 64));
  CHECK(report.chain_holds == (report.level_measure <= report.bound));
  CHECK(report.step_ratios.size() == report.k);

  auto empty = chained_bound_report(CellSet(g), params, BasisFamily::intervals(), Rational(2));
  CHECK(empty.level_measure == Rational(0));
  CHECK(empty.chain_holds);
  for (const auto& r : empty.step_ratios) CHECK(!r.has_value());

  auto full = chained_bound_report(CellSet::full(g), params, BasisFamily::intervals(), Rational(1));
  for (const auto& r : full.step_ratios) CHECK(r == std::optional<Rational>(Rational(1)));
  CHECK_THROWS_AS(chained_bound_report(set, params, BasisFamily::intervals(), Rational(1, 2)), InvalidArgument);
}

TEST_CASE("rasterize_shape") {
  ShapeSpec half{{FractionalBox{{Rational(1, 4)}, {Rational(3, 4)}}}};
  auto s = rasterize_shape(half, line(16));
  CHECK(s.count() == 8);
  CHECK(s.cells().front() == 4);
  CHECK_THROWS_AS(rasterize_shape(half, line(10)), InvalidArgument);
  ShapeSpec square{{FractionalBox{{Rational(0), Rational(1, 2)}, {Rational(1, 2), Rational(1)}}}};
  auto sq = rasterize_shape(square, make_geometry({4, 4}, Rational(1, 4)));
  CHECK(sq.cells() == std::vector<std::uint64_t>{2, 3, 6, 7});
  CHECK_THROWS_AS(rasterize_shape(square, line(4)), InvalidArgument);
}

TEST_CASE("strict gap ladder") {
  ShapeSpec half{{FractionalBox{{Rational(1, 4)}, {Rational(3, 4)}}}};
  LadderFamily fam{BasisFamily::intervals(), Rational(1, 2)};
  auto report = strict_gap_report(half, Rational(1, 2), fam, {line(16), line(10), line(64)});
  REQUIRE(report.rungs.size() == 2);
  CHECK(report.notices.size() == 1);

  // N = 16 by brute force with intervals up to 8 cells.
  auto set = rasterize_shape(half, line(16));
  auto values = oracle::maximal(to_cells(set), oracle::intervals(16, 1, 8));
  auto gap = oracle::count(oracle::superlevel(values, {1, 2}, false)) -
             oracle::count(oracle::superlevel(values, {1, 2}, true));
  CHECK(report.rungs[0].gap_cells == gap);
  CHECK(report.rungs[0].gap == Rational(static_cast<long long>(gap), 16));

  ShapeSpec whole{{FractionalBox{{Rational(0)}, {Rational(1)}}}};
  auto flat = strict_gap_report(whole, Rational(1, 2), fam, {line(16), line(32)});
  for (const auto& r : flat.rungs) CHECK(r.gap == Rational(0));

  // gamma = 1: the strict set is empty, the inclusive set is cells inside E.
  auto top = strict_gap_report(half, Rational(1), fam, {line(16)});
  CHECK(top.rungs[0].strict_measure == Rational(0));
  CHECK(top.rungs[0].inclusive_measure == Rational(1, 2));

  CHECK_THROWS_AS(strict_gap_report(half, Rational(0), fam, {line(16)}), InvalidArgument);
  CHECK(fam.on(*line(64)).scale_max == std::vector<std::uint32_t>{32});
}
