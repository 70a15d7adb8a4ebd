#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "halolab/basis.hpp"
#include "halolab/grid.hpp"
#include "halolab/maximal.hpp"
#include "halolab/rational.hpp"

namespace halolab {

/// Augmentation constants: c = 1/(1 - alpha) and target density c * eps,
/// with 0 < eps < min(alpha/2, 1 - alpha).
struct AugmentPlan {
  Rational alpha;
  Rational eps;
  Rational c;
  Rational target_density;

  static AugmentPlan make(Rational alpha, Rational eps);
};

struct WitnessFamily {
  std::vector<BasisElement> elements;
  CellSet cover;  ///< union of the elements
  Rational cover_measure;
};

/// Every enumerated element with average(R, E) > alpha - eps.
WitnessFamily witness_family(const CellSet& set, const AugmentPlan& plan, const BasisFamily& family,
                             const EvalOptions& options = {});

struct Augmentation {
  CellSet e_tilde;
  CellSet e_prime;
  /// Cells of R_j - E each witness needs: ceil(target_density * |R_j - E|).
  std::vector<std::uint64_t> quotas;
};

/// Greedy choice of E' ⊆ ∪R_j - E meeting every witness's quota. Cells serving
/// the most unsatisfied witnesses go first; ties break on a seeded cell order
/// (seed 0 is plain index order).
Augmentation augment_set(const CellSet& set, const std::vector<BasisElement>& witnesses, const AugmentPlan& plan,
                         std::uint64_t seed = 0);

struct BoundCheck {
  Rational lhs;
  Rational rhs;
  bool pass = false;
};

struct WitnessCheck {
  std::uint64_t id = 0;
  Rational avg_e;
  Rational avg_e_tilde;
  bool pass = false;    ///< avg_e_tilde >= alpha
  bool strict = false;  ///< avg_e_tilde > alpha
};

struct LemmaChainReport {
  Rational alpha;
  Rational eps;
  std::uint64_t witness_count = 0;
  std::vector<WitnessCheck> per_witness;
  bool all_witnesses_pass = false;
  bool all_witnesses_strict = false;
  std::uint64_t e_prime_cells = 0;
  bool e_inside_e_tilde = false;
  /// |Ẽ| <= |E| + c eps |∪R_j|
  BoundCheck size_bound;
  /// |Ẽ| - |E| - c eps |∪R_j| in cells; positive only through per-witness rounding.
  Rational rounding_excess_cells;
  /// |{M χ_Ẽ > alpha}| >= |∪R_j|
  BoundCheck superlevel_bound;
  /// |{M χ_Ẽ >= alpha}| >= |∪R_j|
  BoundCheck superlevel_bound_inclusive;
  std::vector<std::string> notes;
};

LemmaChainReport lemma_chain_report(const CellSet& set, const CellSet& e_tilde,
                                    const std::vector<BasisElement>& witnesses, const AugmentPlan& plan,
                                    const BasisFamily& family, const EvalOptions& options = {});

}  // namespace halolab
