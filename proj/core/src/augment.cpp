#include "halolab/augment.hpp"

#include <numeric>
#include <queue>
#include <random>

#include "halolab/errors.hpp"
#include "halolab/random.hpp"

namespace halolab {

AugmentPlan AugmentPlan::make(Rational alpha, Rational eps) {
  if (alpha.sign() <= 0 || alpha >= Rational(1)) throw InvalidArgument("alpha", "must lie strictly between 0 and 1");
  const Rational half_alpha = alpha / Rational(2);
  const Rational complement = Rational(1) - alpha;
  const Rational cap = half_alpha < complement ? half_alpha : complement;
  if (eps.sign() <= 0 || eps >= cap) throw InvalidArgument("eps", "need 0 < eps < min(alpha/2, 1 - alpha)");
  AugmentPlan plan;
  plan.c = Rational(1) / complement;
  plan.target_density = plan.c * eps;
  plan.alpha = std::move(alpha);
  plan.eps = std::move(eps);
  return plan;
}

WitnessFamily witness_family(const CellSet& set, const AugmentPlan& plan, const BasisFamily& family,
                             const EvalOptions& options) {
  if (set.empty()) throw InvalidArgument("set", "the construction needs a nonempty set");
  const auto& geometry = set.geometry();
  require_element_budget(family, geometry, options.element_budget);
  const PrefixCounts prefix(set);
  const Threshold test(plan.alpha - plan.eps, Bound::strict);

  WitnessFamily out{{}, CellSet(set.geometry_ptr()), Rational(0)};
  ElementCursor cursor(family, geometry);
  while (cursor.next()) {
    const auto& e = cursor.current();
    if (!test.passes(prefix.count(e), e.cell_count())) continue;
    out.elements.push_back(e);
    for (const auto& b : e.boxes)
      for_each_row(geometry, b, [&](std::uint64_t lo, std::uint64_t hi) { out.cover.insert_range(lo, hi); });
  }
  if (out.elements.empty())
    throw InvalidArgument("witnesses", "no element has average above alpha - eps; the construction cannot start");
  out.cover_measure = out.cover.measure();
  return out;
}

Augmentation augment_set(const CellSet& set, const std::vector<BasisElement>& witnesses, const AugmentPlan& plan,
                         std::uint64_t seed) {
  if (witnesses.empty()) throw InvalidArgument("witnesses", "need at least one witness");
  const auto& geometry = set.geometry();
  const std::uint64_t cells = geometry.cell_count();
  const Threshold test(plan.alpha - plan.eps, Bound::strict);

  // outside[j]: cells of R_j - E. members[c]: witnesses whose R_j - E holds c.
  std::vector<std::vector<std::uint64_t>> outside(witnesses.size());
  std::vector<std::vector<std::uint32_t>> members(cells);
  std::vector<std::uint64_t> quotas(witnesses.size());
  for (std::size_t j = 0; j < witnesses.size(); ++j) {
    std::uint64_t hits = 0;
    for (const auto& b : witnesses[j].boxes) {
      if (!b.fits(geometry)) throw InvalidArgument("witnesses", "witness does not fit the grid");
      for_each_row(geometry, b, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t c = lo; c < hi; ++c) {
          if (set.contains(c)) {
            ++hits;
          } else {
            outside[j].push_back(c);
            members[c].push_back(static_cast<std::uint32_t>(j));
          }
        }
      });
    }
    if (!test.passes(hits, witnesses[j].cell_count()))
      throw InvalidArgument("witnesses", "witness " + std::to_string(witnesses[j].id) +
                                             " has average <= alpha - eps");
    Rational need = plan.target_density * Rational(static_cast<long long>(outside[j].size()));
    quotas[j] = need.ceil().convert_to<std::uint64_t>();
  }

  std::vector<std::uint64_t> rank(cells);
  std::iota(rank.begin(), rank.end(), 0);
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    shuffle(std::span(rank), rng);
  }

  std::vector<std::uint64_t> remaining = quotas;
  std::vector<std::uint64_t> serves(cells, 0);
  std::uint64_t unsatisfied = 0;
  for (std::size_t j = 0; j < witnesses.size(); ++j) {
    if (remaining[j] == 0) continue;
    ++unsatisfied;
    for (auto c : outside[j]) ++serves[c];
  }

  // Max-heap on (serves, -rank); stale entries are skipped on pop.
  using Entry = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;  // serves, ~rank, cell
  std::priority_queue<Entry> heap;
  for (std::uint64_t c = 0; c < cells; ++c)
    if (serves[c] > 0) heap.emplace(serves[c], ~rank[c], c);

  Augmentation out{set, CellSet(set.geometry_ptr()), quotas};
  while (unsatisfied > 0) {
    if (heap.empty()) throw InternalError("greedy augmentation could not meet every witness quota");
    auto [s, inv_rank, c] = heap.top();
    heap.pop();
    if (s != serves[c] || out.e_prime.contains(c) || s == 0) continue;
    out.e_prime.insert(c);
    for (auto j : members[c]) {
      if (remaining[j] == 0) continue;
      if (--remaining[j] == 0) {
        --unsatisfied;
        for (auto other : outside[j]) {
          --serves[other];
          if (other != c && serves[other] > 0 && !out.e_prime.contains(other))
            heap.emplace(serves[other], ~rank[other], other);
        }
      }
    }
    (void)inv_rank;
  }
  out.e_tilde = set | out.e_prime;
  return out;
}

LemmaChainReport lemma_chain_report(const CellSet& set, const CellSet& e_tilde,
                                    const std::vector<BasisElement>& witnesses, const AugmentPlan& plan,
                                    const BasisFamily& family, const EvalOptions& options) {
  LemmaChainReport r;
  r.alpha = plan.alpha;
  r.eps = plan.eps;
  r.witness_count = witnesses.size();
  r.all_witnesses_pass = true;
  r.all_witnesses_strict = true;

  CellSet cover(set.geometry_ptr());
  for (const auto& w : witnesses) {
    WitnessCheck check;
    check.id = w.id;
    check.avg_e = average(w, set);
    check.avg_e_tilde = average(w, e_tilde);
    check.pass = check.avg_e_tilde >= plan.alpha;
    check.strict = check.avg_e_tilde > plan.alpha;
    r.all_witnesses_pass = r.all_witnesses_pass && check.pass;
    r.all_witnesses_strict = r.all_witnesses_strict && check.strict;
    r.per_witness.push_back(std::move(check));
    for (const auto& b : w.boxes)
      for_each_row(set.geometry(), b, [&](std::uint64_t lo, std::uint64_t hi) { cover.insert_range(lo, hi); });
  }

  r.e_inside_e_tilde = set.is_subset_of(e_tilde);
  r.e_prime_cells = (e_tilde - set).count();
  const Rational cover_measure = cover.measure();
  r.size_bound.lhs = e_tilde.measure();
  r.size_bound.rhs = set.measure() + plan.c * plan.eps * cover_measure;
  r.size_bound.pass = r.size_bound.lhs <= r.size_bound.rhs;
  r.rounding_excess_cells = Rational(static_cast<long long>(r.e_prime_cells)) -
                            plan.target_density * Rational(static_cast<long long>(cover.count()));

  const CellSet strict = superlevel_direct(e_tilde, family, plan.alpha, Bound::strict, options);
  const CellSet inclusive = superlevel_direct(e_tilde, family, plan.alpha, Bound::inclusive, options);
  r.superlevel_bound = {strict.measure(), cover_measure, strict.measure() >= cover_measure};
  r.superlevel_bound_inclusive = {inclusive.measure(), cover_measure, inclusive.measure() >= cover_measure};

  r.notes.push_back("size bound uses the measured witness union in place of C(alpha/2)|E|");
  r.notes.push_back("per-witness quotas are rounded up to whole cells, so the size bound may exceed c*eps*|union| "
                    "by at most one cell per witness");
  r.notes.push_back("the inclusive-level variant divides by 1 + c*delta*C with C taken at alpha/2; "
                    "an alpha/10 subscript in that denominator is treated as alpha/2");
  return r;
}

}  // namespace halolab
