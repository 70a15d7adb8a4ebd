#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "halolab/basis.hpp"
#include "halolab/grid.hpp"
#include "halolab/maximal.hpp"
#include "halolab/rational.hpp"

namespace halolab {

/// alpha < gamma, both in (0, 1).
struct IterationParams {
  Rational alpha;
  Rational gamma;
  int dimension = 1;

  static IterationParams make(Rational alpha, Rational gamma, int dimension);
};

/// Least m >= 0 with base^m >= x, for base > 1. Decided by exact powers.
std::uint64_t least_power_at_least(const Rational& base, const Rational& x);

/// Iteration count after which an element of average alpha is swallowed by the
/// gamma-orbit:
///   ceil(log(gamma/alpha) / log(1/gamma)) * ceil(2 + log+(gamma 2^n) / log(1/gamma)) + 1,
/// with log+ t = max(log t, 0). Both ceilings are certified by rational power comparisons.
std::uint64_t k_alpha_gamma(const Rational& alpha, const Rational& gamma, int dimension);

/// H^0 = E, H^j = {M χ_{H^{j-1}} >= gamma}.
struct HaloOrbit {
  Rational gamma;
  std::vector<CellSet> sets;
  std::vector<Rational> measures;

  bool grew(std::size_t step) const { return step > 0 && measures[step] > measures[step - 1]; }
};

HaloOrbit halo_orbit(const CellSet& set, const Rational& gamma, std::uint64_t steps, const BasisFamily& family,
                     const EvalOptions& options = {});

struct ContainmentReport {
  Rational alpha;
  Rational gamma;
  Rational average;
  std::uint64_t k = 0;
  bool contained = false;
  /// First orbit step j >= 1 with R ⊆ H^j, if any up to k.
  std::optional<std::uint64_t> first_step;
  HaloOrbit orbit;
};

/// Runs the gamma-orbit for k_alpha_gamma steps and records whether R is swallowed.
/// Reports, never asserts: coarse grids can break the continuum statement.
ContainmentReport containment_experiment(const BasisElement& element, const CellSet& set,
                                         const IterationParams& params, const BasisFamily& family,
                                         const EvalOptions& options = {});

struct ChainedBoundReport {
  Rational alpha;
  Rational gamma;
  Rational gamma_tilde;
  Rational c_probe;
  std::uint64_t k = 0;
  HaloOrbit orbit;
  /// measure(H^j) / measure(H^{j-1}) for j >= 1; empty when the previous step is empty.
  std::vector<std::optional<Rational>> step_ratios;
  std::vector<bool> step_within_probe;
  Rational level_measure;  ///< |{M χ_E > alpha}|
  Rational bound;          ///< c_probe^k |E|
  bool chain_holds = false;
  bool level_inside_orbit = false;  ///< {M χ_E > alpha} ⊆ H^k
};

ChainedBoundReport chained_bound_report(const CellSet& set, const IterationParams& params,
                                        const BasisFamily& family, const Rational& c_probe,
                                        const EvalOptions& options = {});

/// A set described in fractions of the domain, so it can be re-rasterized at any resolution.
struct FractionalBox {
  std::vector<Rational> lo;
  std::vector<Rational> hi;
};

struct ShapeSpec {
  std::vector<FractionalBox> boxes;
};

/// Throws InvalidArgument when a fraction does not land on a cell boundary.
CellSet rasterize_shape(const ShapeSpec& shape, const GeometryPtr& geometry);

/// Family reused across a resolution ladder. When `scale_max_fraction` is set,
/// the maximum side on each rung is floor(fraction * N_i) cells.
struct LadderFamily {
  BasisFamily base;
  std::optional<Rational> scale_max_fraction;

  BasisFamily on(const GridGeometry& geometry) const;
};

struct StrictGapRung {
  GeometryPtr geometry;
  Rational inclusive_measure;  ///< |{M >= gamma}|
  Rational strict_measure;     ///< |{M > gamma}|
  Rational gap;
  std::uint64_t gap_cells = 0;
  std::optional<Rational> gap_ratio_to_previous;
};

struct StrictGapReport {
  Rational gamma;
  std::vector<StrictGapRung> rungs;
  std::vector<std::string> notices;
};

StrictGapReport strict_gap_report(const ShapeSpec& shape, const Rational& gamma, const LadderFamily& family,
                                  const std::vector<GeometryPtr>& ladder, const EvalOptions& options = {});

}  // namespace halolab
