#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "halolab/basis.hpp"
#include "halolab/grid.hpp"
#include "halolab/maximal.hpp"
#include "halolab/rational.hpp"

namespace halolab {

inline constexpr std::uint64_t kDefaultSubsetBudget = std::uint64_t{1} << 20;

/// `convention` marks points with u in [0, 1], where the halo function is u by definition.
enum class SearchMethod { exhaustive, random, hillclimb, structured, convention };

std::string_view to_string(SearchMethod method);
SearchMethod parse_search_method(std::string_view text);

/// One lower-bound sample of the halo function: ratio is achieved by witness.
struct HaloPoint {
  Rational u;
  Rational ratio;
  CellSet witness;
  SearchMethod method = SearchMethod::structured;
  std::uint64_t seed = 0;
};

struct HaloCurve {
  std::vector<HaloPoint> points;
  std::string family;
  std::string geometry;
};

/// |{M χ_E > 1/u}| / |E| for one candidate set.
Rational halo_ratio(const CellSet& set, const Rational& u, const BasisFamily& family,
                    const EvalOptions& options = {});

struct ExactHalo {
  Rational ratio;
  CellSet witness;
  std::uint64_t subsets = 0;
};

/// Maximum of halo_ratio over every nonempty subset of the grid, visited in
/// Gray-code order with incremental element counts. Ties go to the
/// lexicographically least witness (see lex_compare).
ExactHalo exact_discrete_halo(const Rational& u, const BasisFamily& family, const GeometryPtr& geometry,
                              std::uint64_t subset_budget = kDefaultSubsetBudget, const EvalOptions& options = {});

/// Heuristic lower bound within `budget` candidate evaluations.
///
/// random: seeded sweep over densities 1/8..7/8.
/// hillclimb: single-cell flips accepted on strict improvement, restarted from a
///   fresh random set when a full pass finds none.
/// structured: centre cell, centred blocks, the jump family's unit blocks and
///   pairs of blocks, in that order.
HaloPoint halo_search(const Rational& u, const BasisFamily& family, const GeometryPtr& geometry,
                      SearchMethod method, std::uint64_t seed, std::uint64_t budget,
                      const EvalOptions& options = {});

/// The candidate library used by the structured strategy, truncated to `limit`.
std::vector<CellSet> structured_candidates(const GeometryPtr& geometry, const BasisFamily& family,
                                           std::uint64_t limit);

/// One point per u. With `pool_witnesses`, every witness found anywhere on the
/// curve is re-scored at every u and each point reports the best of them.
/// Entries with u <= 1 are emitted as φ(u) = u without computation.
HaloCurve halo_curve(const std::vector<Rational>& u_grid, const BasisFamily& family, const GeometryPtr& geometry,
                     SearchMethod method, std::uint64_t seed, std::uint64_t budget, const EvalOptions& options = {},
                     bool pool_witnesses = true);

struct JumpReport {
  struct Step {
    Rational u_from;
    Rational u_to;
    Rational increment;
  };
  std::vector<Step> steps;
  Rational max_increment;
  std::size_t max_index = 0;
  Rational left_ratio;
};

/// Adjacent increments of a curve. Descriptive only: the discrete curve is a step function.
JumpReport continuity_scan(const HaloCurve& curve);

}  // namespace halolab
