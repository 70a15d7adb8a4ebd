#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "halolab/augment.hpp"
#include "halolab/errors.hpp"
#include "helpers.hpp"

using namespace halolab;
using testing::line;
using testing::to_cells;

TEST_CASE("plan constants") {
  auto plan = AugmentPlan::make(Rational(3, 4), Rational(3, 50));
  CHECK(plan.c == Rational(4));
  CHECK(plan.target_density == Rational(6, 25));
  CHECK(plan.target_density == plan.eps / (Rational(1) - plan.alpha));
  CHECK_THROWS_AS(AugmentPlan::make(Rational(3, 4), Rational(1, 4)), InvalidArgument);
  CHECK_THROWS_AS(AugmentPlan::make(Rational(1, 4), Rational(1, 8)), InvalidArgument);
  CHECK_NOTHROW(AugmentPlan::make(Rational(1, 4), Rational(1, 9)));
  CHECK_THROWS_AS(AugmentPlan::make(Rational(1), Rational(1, 100)), InvalidArgument);
  CHECK_THROWS_AS(AugmentPlan::make(Rational(1, 2), Rational(0)), InvalidArgument);
}

TEST_CASE("witness family filters strictly") {
  auto g = line(10);
  CellSet set(g);
  set.insert_range(0, 7);
  auto plan = AugmentPlan::make(Rational(3, 4), Rational(1, 20));
  auto w = witness_family(set, plan, BasisFamily::intervals());
  auto all = enumerate_elements(BasisFamily::intervals(), *g);
  CHECK(all.size() == 55);
  std::size_t expect = 0;
  for (const auto& e : all) expect += average(e, set) > Rational(7, 10) ? 1 : 0;
  CHECK(w.elements.size() == expect);
  auto has = [&](std::uint32_t lo, std::uint32_t hi) {
    for (const auto& e : w.elements)
      if (e.boxes[0] == Box::interval(lo, hi)) return true;
    return false;
  };
  CHECK(!has(0, 10));
  CHECK(has(0, 9));
  CHECK(w.cover_measure == w.cover.measure());

  auto full = witness_family(CellSet::full(g), plan, BasisFamily::intervals());
  CHECK(full.elements.size() == 55);
  CHECK_THROWS_AS(witness_family(CellSet(g), plan, BasisFamily::intervals()), InvalidArgument);
  std::uint64_t one[] = {0};
  auto sparse_family = BasisFamily::intervals(10, 10);
  CHECK_THROWS_AS(witness_family(CellSet::from_cells(g, one), plan, sparse_family), InvalidArgument);
}

TEST_CASE("single witness worked example") {
  auto g = line(10);
  CellSet set(g);
  set.insert_range(0, 7);
  auto plan = AugmentPlan::make(Rational(3, 4), Rational(3, 50));
  auto r = rasterize_element(IntervalSpec{0, 10}, *g);
  auto aug = augment_set(set, {r}, plan);
  CHECK(aug.quotas == std::vector<std::uint64_t>{1});
  CHECK(aug.e_prime.count() == 1);
  CHECK(average(r, aug.e_tilde) == Rational(4, 5));
  auto report = lemma_chain_report(set, aug.e_tilde, {r}, plan, BasisFamily::intervals());
  CHECK(report.all_witnesses_pass);
  CHECK(report.per_witness[0].avg_e_tilde == Rational(4, 5));
  CHECK(report.size_bound.lhs == Rational(8, 10));
  CHECK(report.size_bound.rhs == Rational(7, 10) + Rational(4) * Rational(3, 50) * Rational(1));
  CHECK(report.size_bound.pass);
}

TEST_CASE("augment_set preconditions") {
  auto g = line(10);
  CellSet set(g);
  set.insert_range(0, 5);
  auto plan = AugmentPlan::make(Rational(3, 4), Rational(1, 20));
  CHECK_THROWS_AS(augment_set(set, {}, plan), InvalidArgument);
  auto weak = rasterize_element(IntervalSpec{0, 10}, *g);
  CHECK_THROWS_AS(augment_set(set, {weak}, plan), InvalidArgument);
  auto inside = rasterize_element(IntervalSpec{0, 5}, *g);
  auto aug = augment_set(set, {inside}, plan);
  CHECK(aug.e_prime.empty());
  CHECK(aug.e_tilde == set);
}

TEST_CASE("shared cells serve several witnesses at once") {
  auto g = line(12);
  CellSet set(g);
  set.insert_range(0, 9);
  auto plan = AugmentPlan::make(Rational(3, 4), Rational(1, 10));
  auto a = rasterize_element(IntervalSpec{0, 10}, *g);
  auto b = rasterize_element(IntervalSpec{1, 10}, *g);
  auto aug = augment_set(set, {a, b}, plan);
  CHECK(aug.e_prime.cells() == std::vector<std::uint64_t>{9});
}

TEST_CASE("lemma chain invariants on random instances") {
  auto g = line(48);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rational alpha = seed % 2 ? Rational(1, 2) : Rational(2, 3);
    auto plan = AugmentPlan::make(alpha, (Rational(1) - alpha) / Rational(5));
    auto set = random_set(g, Rational(1, 2), seed);
    auto w = witness_family(set, plan, BasisFamily::intervals());
    auto aug = augment_set(set, w.elements, plan, seed);
    CHECK(set.is_subset_of(aug.e_tilde));
    CHECK((aug.e_prime & set).empty());
    CHECK(aug.e_prime.is_subset_of(w.cover - set));
    std::uint64_t quota_sum = 0;
    for (auto q : aug.quotas) quota_sum += q;
    CHECK(aug.e_prime.count() <= quota_sum);
    for (std::size_t j = 0; j < w.elements.size(); ++j) {
      auto outside = w.elements[j].cells(g) - set;
      CHECK((aug.e_prime & outside).count() >= aug.quotas[j]);
    }
    auto report = lemma_chain_report(set, aug.e_tilde, w.elements, plan, BasisFamily::intervals());
    CHECK(report.all_witnesses_pass);
    CHECK(report.superlevel_bound_inclusive.pass);
    CHECK(augment_set(set, w.elements, plan, seed).e_tilde == aug.e_tilde);
  }
}

TEST_CASE("report distinguishes strict from non-strict passes") {
  auto g = line(8);
  CellSet set(g);
  set.insert_range(0, 6);
  auto plan = AugmentPlan::make(Rational(3, 4), Rational(1, 20));
  auto exact = rasterize_element(IntervalSpec{0, 8}, *g);
  auto report = lemma_chain_report(set, set, {exact}, plan, BasisFamily::intervals());
  CHECK(report.per_witness[0].avg_e_tilde == Rational(3, 4));
  CHECK(report.per_witness[0].pass);
  CHECK(!report.per_witness[0].strict);
  CHECK(report.all_witnesses_pass);
  CHECK(!report.all_witnesses_strict);
  CHECK(!report.notes.empty());
}
