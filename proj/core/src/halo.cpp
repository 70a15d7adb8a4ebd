#include "halolab/halo.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <set>

#include "halolab/errors.hpp"
#include "halolab/random.hpp"

namespace halolab {

namespace {

void require_u_above_one(const Rational& u) {
  if (u <= Rational(1)) throw InvalidArgument("u", "halo ratios need u > 1");
}

// True when (ratio, set) should replace (best_ratio, best).
bool improves(const Rational& ratio, const CellSet& set, const Rational& best_ratio, const CellSet* best) {
  if (best == nullptr) return true;
  if (ratio != best_ratio) return ratio > best_ratio;
  return lex_compare(set, *best) < 0;
}

class Tracker {
 public:
  void offer(const Rational& ratio, const CellSet& set) {
    if (improves(ratio, set, ratio_, best_ ? &*best_ : nullptr)) {
      ratio_ = ratio;
      best_ = set;
    }
  }
  bool has_value() const { return best_.has_value(); }
  const Rational& ratio() const { return ratio_; }
  const CellSet& witness() const { return *best_; }

 private:
  Rational ratio_;
  std::optional<CellSet> best_;
};

CellSet centred_block(const GeometryPtr& geometry, std::uint32_t side) {
  std::array<std::uint32_t, 3> lo{}, hi{};
  for (int a = 0; a < geometry->dimension(); ++a) {
    std::uint32_t n = geometry->extent(a);
    std::uint32_t k = std::min(side, n);
    auto i = static_cast<std::size_t>(a);
    lo[i] = (n - k) / 2;
    hi[i] = lo[i] + k;
  }
  Box b = Box::make(std::span(lo.data(), static_cast<std::size_t>(geometry->dimension())),
                    std::span(hi.data(), static_cast<std::size_t>(geometry->dimension())));
  return BasisElement{0, {b}}.cells(geometry);
}

// Two blocks of side k separated by `gap` cells along the last axis, centred.
std::optional<CellSet> block_pair(const GeometryPtr& geometry, std::uint32_t side, std::uint32_t gap) {
  const int last = geometry->dimension() - 1;
  const std::uint64_t span = 2ULL * side + gap;
  if (span > geometry->extent(last)) return std::nullopt;
  std::array<std::uint32_t, 3> lo{}, hi{};
  for (int a = 0; a < last; ++a) {
    std::uint32_t n = geometry->extent(a);
    std::uint32_t k = std::min(side, n);
    auto i = static_cast<std::size_t>(a);
    lo[i] = (n - k) / 2;
    hi[i] = lo[i] + k;
  }
  auto l = static_cast<std::size_t>(last);
  auto start = static_cast<std::uint32_t>((geometry->extent(last) - span) / 2);
  auto dims = static_cast<std::size_t>(geometry->dimension());
  lo[l] = start;
  hi[l] = start + side;
  Box first = Box::make(std::span(lo.data(), dims), std::span(hi.data(), dims));
  lo[l] = start + side + gap;
  hi[l] = lo[l] + side;
  Box second = Box::make(std::span(lo.data(), dims), std::span(hi.data(), dims));
  return BasisElement{0, {first, second}}.cells(geometry);
}

}  // namespace

std::string_view to_string(SearchMethod method) {
  switch (method) {
    case SearchMethod::exhaustive: return "exhaustive";
    case SearchMethod::random: return "random";
    case SearchMethod::hillclimb: return "hillclimb";
    case SearchMethod::structured: return "structured";
    case SearchMethod::convention: return "convention";
  }
  return "?";
}

SearchMethod parse_search_method(std::string_view text) {
  for (auto m : {SearchMethod::exhaustive, SearchMethod::random, SearchMethod::hillclimb, SearchMethod::structured})
    if (to_string(m) == text) return m;
  throw InvalidArgument("strategy", "unknown strategy '" + std::string(text) + "'");
}

Rational halo_ratio(const CellSet& set, const Rational& u, const BasisFamily& family, const EvalOptions& options) {
  require_u_above_one(u);
  if (set.empty()) throw InvalidArgument("set", "halo ratios need a nonempty set");
  Rational theta = Rational(1) / u;
  CellSet level = superlevel_direct(set, family, theta, Bound::strict, options);
  return Rational(BigInt(level.count()), BigInt(set.count()));
}

// ---------------------------------------------------------------------------

ExactHalo exact_discrete_halo(const Rational& u, const BasisFamily& family, const GeometryPtr& geometry,
                              std::uint64_t subset_budget, const EvalOptions& options) {
  require_u_above_one(u);
  const std::uint64_t cells = geometry->cell_count();
  const std::uint64_t required = cells >= 64 ? UINT64_MAX : (std::uint64_t{1} << cells) - 1;
  if (cells >= 64 || required > subset_budget) throw BudgetExceeded("subset", required, subset_budget);

  auto elements = enumerate_elements(family, *geometry, options.element_budget);
  const std::size_t m = elements.size();
  std::vector<std::uint64_t> masks(m), sizes(m), hits(m, 0);
  std::vector<std::uint8_t> passing(m, 0);
  std::vector<std::vector<std::uint32_t>> through(cells);
  for (std::size_t e = 0; e < m; ++e) {
    std::uint64_t mask = 0;
    for (const auto& b : elements[e].boxes)
      for_each_row(*geometry, b, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t c = lo; c < hi; ++c) mask |= std::uint64_t{1} << c;
      });
    masks[e] = mask;
    sizes[e] = static_cast<std::uint64_t>(std::popcount(mask));
    for (std::uint64_t bits = mask; bits; bits &= bits - 1)
      through[static_cast<std::size_t>(std::countr_zero(bits))].push_back(static_cast<std::uint32_t>(e));
  }

  const Threshold test(Rational(1) / u, Bound::strict);
  std::vector<std::uint32_t> cover(cells, 0);
  std::uint64_t level_count = 0;
  std::uint64_t current = 0;
  std::uint64_t set_count = 0;

  std::uint64_t best_mask = 0, best_level = 0, best_size = 0;
  bool have_best = false;

  auto toggle_cover = [&](std::uint64_t mask, bool on) {
    for (std::uint64_t bits = mask; bits; bits &= bits - 1) {
      auto c = static_cast<std::size_t>(std::countr_zero(bits));
      if (on) {
        if (cover[c]++ == 0) ++level_count;
      } else {
        if (--cover[c] == 0) --level_count;
      }
    }
  };

  for (std::uint64_t i = 1; i <= required; ++i) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(i));
    const bool adding = ((current >> bit) & 1U) == 0;
    current ^= std::uint64_t{1} << bit;
    set_count += adding ? 1 : std::uint64_t(-1);
    for (std::uint32_t e : through[bit]) {
      hits[e] += adding ? 1 : std::uint64_t(-1);
      const bool now = test.passes(hits[e], sizes[e]);
      if (now != static_cast<bool>(passing[e])) {
        passing[e] = now;
        toggle_cover(masks[e], now);
      }
    }
    // level_count / set_count against best_level / best_size.
    const unsigned __int128 lhs = static_cast<unsigned __int128>(level_count) * best_size;
    const unsigned __int128 rhs = static_cast<unsigned __int128>(best_level) * set_count;
    if (!have_best || lhs > rhs || (lhs == rhs && current < best_mask)) {
      have_best = true;
      best_mask = current;
      best_level = level_count;
      best_size = set_count;
    }
  }

  CellSet witness(geometry);
  for (std::uint64_t bits = best_mask; bits; bits &= bits - 1)
    witness.insert(static_cast<std::uint64_t>(std::countr_zero(bits)));
  return {Rational(BigInt(best_level), BigInt(best_size)), std::move(witness), required};
}

// ---------------------------------------------------------------------------

std::vector<CellSet> structured_candidates(const GeometryPtr& geometry, const BasisFamily& family,
                                           std::uint64_t limit) {
  std::vector<CellSet> out;
  std::set<std::string> seen;
  auto add = [&](CellSet s) {
    if (out.size() >= limit || s.empty()) return;
    if (seen.insert(s.hex()).second) out.push_back(std::move(s));
  };

  add(centred_block(geometry, 1));

  if (family.kind == FamilyKind::jump_example) {
    auto scales = family.jump.scales;
    std::sort(scales.begin(), scales.end());
    for (std::uint32_t s : scales) {
      if (s > geometry->extent(0)) continue;
      CellSet left(geometry);
      left.insert_range(0, s);
      add(std::move(left));
      add(centred_block(geometry, s));
    }
  }

  std::uint32_t smallest = geometry->extent(0);
  for (int a = 1; a < geometry->dimension(); ++a) smallest = std::min(smallest, geometry->extent(a));
  for (std::uint32_t k = 2; k <= smallest && out.size() < limit; ++k) add(centred_block(geometry, k));

  const std::uint32_t last = geometry->extent(geometry->dimension() - 1);
  for (std::uint32_t k = 1; 2 * k + 1 <= last && out.size() < limit; ++k) {
    for (std::uint32_t gap : {1U, 2U, k, 2 * k}) {
      if (gap == 0) continue;
      if (auto pair = block_pair(geometry, k, gap)) add(std::move(*pair));
    }
  }
  return out;
}

HaloPoint halo_search(const Rational& u, const BasisFamily& family, const GeometryPtr& geometry,
                      SearchMethod method, std::uint64_t seed, std::uint64_t budget, const EvalOptions& options) {
  require_u_above_one(u);
  if (budget == 0) throw InvalidArgument("budget", "search budget must be positive");
  // Fail on the element budget before spending any search budget.
  require_element_budget(family, *geometry, options.element_budget);

  Tracker best;
  std::uint64_t spent = 0;
  auto evaluate = [&](const CellSet& s) -> std::optional<Rational> {
    if (s.empty() || spent >= budget) return std::nullopt;
    ++spent;
    Rational r = halo_ratio(s, u, family, options);
    best.offer(r, s);
    return r;
  };

  static const std::array<Rational, 7> kDensities = {Rational(1, 8), Rational(2, 8), Rational(3, 8), Rational(4, 8),
                                                     Rational(5, 8), Rational(6, 8), Rational(7, 8)};

  switch (method) {
    case SearchMethod::structured: {
      for (const auto& s : structured_candidates(geometry, family, budget)) evaluate(s);
      break;
    }
    case SearchMethod::random: {
      for (std::uint64_t i = 0; i < budget; ++i) {
        CellSet s = random_set(geometry, kDensities[i % kDensities.size()], derive_seed(seed, i));
        if (s.empty()) {
          ++spent;
          continue;
        }
        evaluate(s);
      }
      break;
    }
    case SearchMethod::hillclimb: {
      std::mt19937_64 rng(seed);
      const std::uint64_t cells = geometry->cell_count();
      std::vector<std::uint64_t> order(cells);
      std::uint64_t restart = 0;
      while (spent < budget) {
        CellSet current = random_set(geometry, kDensities[restart % kDensities.size()], derive_seed(seed, restart));
        ++restart;
        if (current.empty()) current = centred_block(geometry, 1);
        auto start = evaluate(current);
        if (!start) break;
        Rational score = *start;
        bool improved = true;
        while (improved && spent < budget) {
          improved = false;
          for (std::uint64_t c = 0; c < cells; ++c) order[c] = c;
          shuffle(std::span(order), rng);
          for (std::uint64_t c : order) {
            if (spent >= budget) break;
            current.flip(c);
            auto r = evaluate(current);
            if (r && *r > score) {
              score = *r;
              improved = true;
            } else {
              current.flip(c);
            }
          }
        }
      }
      break;
    }
    case SearchMethod::exhaustive:
    case SearchMethod::convention:
      throw InvalidArgument("strategy", "halo_search takes random, hillclimb or structured");
  }

  if (!best.has_value()) {
    // Only reachable when every random draw was empty: fall back to the centre cell.
    CellSet centre = centred_block(geometry, 1);
    best.offer(halo_ratio(centre, u, family, options), centre);
  }
  return HaloPoint{u, best.ratio(), best.witness(), method, seed};
}

// ---------------------------------------------------------------------------

HaloCurve halo_curve(const std::vector<Rational>& u_grid, const BasisFamily& family, const GeometryPtr& geometry,
                     SearchMethod method, std::uint64_t seed, std::uint64_t budget, const EvalOptions& options,
                     bool pool_witnesses) {
  if (u_grid.empty()) throw InvalidArgument("u_grid", "needs at least one value");
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    if (u_grid[i].sign() < 0) throw InvalidArgument("u_grid", "values must be >= 0");
    if (i && !(u_grid[i - 1] < u_grid[i])) throw InvalidArgument("u_grid", "values must be strictly increasing");
  }

  HaloCurve curve;
  curve.family = family.descriptor();
  curve.geometry = geometry->descriptor();
  for (const auto& u : u_grid) {
    if (u <= Rational(1)) {
      curve.points.push_back(HaloPoint{u, u, CellSet(geometry), SearchMethod::convention, seed});
    } else if (method == SearchMethod::exhaustive) {
      auto exact = exact_discrete_halo(u, family, geometry, budget, options);
      curve.points.push_back(HaloPoint{u, exact.ratio, std::move(exact.witness), SearchMethod::exhaustive, seed});
    } else {
      curve.points.push_back(halo_search(u, family, geometry, method, seed, budget, options));
    }
  }

  if (pool_witnesses) {
    std::vector<HaloPoint> found;
    for (const auto& p : curve.points)
      if (p.method != SearchMethod::convention) found.push_back(p);
    for (auto& p : curve.points) {
      if (p.method == SearchMethod::convention) continue;
      for (const auto& other : found) {
        if (other.witness == p.witness) continue;
        Rational r = halo_ratio(other.witness, p.u, family, options);
        if (improves(r, other.witness, p.ratio, &p.witness)) {
          p.ratio = r;
          p.witness = other.witness;
          p.method = other.method;
          p.seed = other.seed;
        }
      }
    }
  }
  return curve;
}

JumpReport continuity_scan(const HaloCurve& curve) {
  if (curve.points.size() < 2) throw InvalidArgument("curve", "a continuity scan needs at least two points");
  JumpReport report;
  report.left_ratio = curve.points.front().ratio;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1];
    const auto& b = curve.points[i];
    Rational inc = b.ratio - a.ratio;
    if (report.steps.empty() || inc > report.max_increment) {
      report.max_increment = inc;
      report.max_index = i - 1;
    }
    report.steps.push_back({a.u, b.u, inc});
  }
  return report;
}

}  // namespace halolab
