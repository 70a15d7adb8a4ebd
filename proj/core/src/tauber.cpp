#include "halolab/tauber.hpp"

#include "halolab/errors.hpp"

namespace halolab {

namespace {

void require_open_unit(const Rational& value, const char* field) {
  if (value.sign() <= 0 || value >= Rational(1)) throw InvalidArgument(field, "must lie strictly between 0 and 1");
}

}  // namespace

IterationParams IterationParams::make(Rational alpha, Rational gamma, int dimension) {
  require_open_unit(alpha, "alpha");
  require_open_unit(gamma, "gamma");
  if (!(alpha < gamma)) throw InvalidArgument("alpha", "alpha must be strictly below gamma");
  if (dimension < 1) throw InvalidArgument("n", "dimension must be >= 1");
  return IterationParams{std::move(alpha), std::move(gamma), dimension};
}

std::uint64_t least_power_at_least(const Rational& base, const Rational& x) {
  if (base <= Rational(1)) throw InvalidArgument("base", "must exceed 1");
  if (x <= Rational(1)) return 0;
  // Exponential search then bisection, every comparison exact.
  std::uint64_t hi = 1;
  while (pow(base, static_cast<unsigned>(hi)) < x) hi *= 2;
  std::uint64_t lo = hi / 2;  // base^lo < x (or lo == 0, and base^0 = 1 < x)
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (pow(base, static_cast<unsigned>(mid)) >= x) hi = mid;
    else lo = mid;
  }
  return hi;
}

std::uint64_t k_alpha_gamma(const Rational& alpha, const Rational& gamma, int dimension) {
  auto params = IterationParams::make(alpha, gamma, dimension);
  const Rational inv_gamma = Rational(1) / params.gamma;
  const std::uint64_t rounds = least_power_at_least(inv_gamma, params.gamma / params.alpha);
  const Rational spread = params.gamma * pow(Rational(2), static_cast<unsigned>(dimension));
  const std::uint64_t per_round = 2 + least_power_at_least(inv_gamma, spread);
  return rounds * per_round + 1;
}

// ---------------------------------------------------------------------------

HaloOrbit halo_orbit(const CellSet& set, const Rational& gamma, std::uint64_t steps, const BasisFamily& family,
                     const EvalOptions& options) {
  require_open_unit(gamma, "gamma");
  HaloOrbit orbit;
  orbit.gamma = gamma;
  orbit.sets.push_back(set);
  orbit.measures.push_back(set.measure());
  for (std::uint64_t j = 1; j <= steps; ++j) {
    const CellSet& prev = orbit.sets.back();
    bool fixed = orbit.sets.size() >= 2 && orbit.sets[orbit.sets.size() - 2] == prev;
    if (fixed) {
      orbit.sets.push_back(prev);
    } else {
      try {
        orbit.sets.push_back(superlevel_direct(prev, family, gamma, Bound::inclusive, options));
      } catch (const BudgetExceeded& e) {
        throw BudgetExceeded(e.kind() + " (orbit step " + std::to_string(j) + ")", e.required(), e.budget());
      }
    }
    orbit.measures.push_back(orbit.sets.back().measure());
  }
  return orbit;
}

ContainmentReport containment_experiment(const BasisElement& element, const CellSet& set,
                                         const IterationParams& params, const BasisFamily& family,
                                         const EvalOptions& options) {
  auto checked = IterationParams::make(params.alpha, params.gamma, params.dimension);
  Rational avg = average(element, set);
  if (avg < checked.alpha) throw InvalidArgument("alpha", "the element's average is below alpha");

  ContainmentReport report;
  report.alpha = checked.alpha;
  report.gamma = checked.gamma;
  report.average = avg;
  report.k = k_alpha_gamma(checked.alpha, checked.gamma, set.geometry().dimension());
  report.orbit = halo_orbit(set, checked.gamma, report.k, family, options);
  const CellSet cells = element.cells(set.geometry_ptr());
  for (std::uint64_t j = 1; j <= report.k; ++j) {
    if (cells.is_subset_of(report.orbit.sets[j])) {
      report.first_step = j;
      break;
    }
  }
  report.contained = cells.is_subset_of(report.orbit.sets.back());
  return report;
}

ChainedBoundReport chained_bound_report(const CellSet& set, const IterationParams& params,
                                        const BasisFamily& family, const Rational& c_probe,
                                        const EvalOptions& options) {
  auto checked = IterationParams::make(params.alpha, params.gamma, params.dimension);
  if (c_probe < Rational(1)) throw InvalidArgument("c_probe", "must be >= 1");

  ChainedBoundReport r;
  r.alpha = checked.alpha;
  r.gamma = checked.gamma;
  r.gamma_tilde = checked.gamma + (Rational(1) - checked.gamma) / Rational(2);
  r.c_probe = c_probe;
  r.k = k_alpha_gamma(checked.alpha, r.gamma_tilde, set.geometry().dimension());
  r.orbit = halo_orbit(set, r.gamma_tilde, r.k, family, options);
  for (std::size_t j = 1; j < r.orbit.sets.size(); ++j) {
    const Rational& before = r.orbit.measures[j - 1];
    if (before.is_zero()) {
      r.step_ratios.emplace_back(std::nullopt);
      r.step_within_probe.push_back(true);
    } else {
      Rational ratio = r.orbit.measures[j] / before;
      r.step_within_probe.push_back(ratio <= c_probe);
      r.step_ratios.emplace_back(std::move(ratio));
    }
  }
  const CellSet level = superlevel_direct(set, family, checked.alpha, Bound::strict, options);
  r.level_measure = level.measure();
  r.bound = pow(c_probe, static_cast<unsigned>(r.k)) * set.measure();
  r.chain_holds = r.level_measure <= r.bound;
  r.level_inside_orbit = level.is_subset_of(r.orbit.sets.back());
  return r;
}

// ---------------------------------------------------------------------------

CellSet rasterize_shape(const ShapeSpec& shape, const GeometryPtr& geometry) {
  const int n = geometry->dimension();
  CellSet out(geometry);
  for (const auto& fb : shape.boxes) {
    if (static_cast<int>(fb.lo.size()) != n || static_cast<int>(fb.hi.size()) != n)
      throw InvalidArgument("shape", "box arity does not match the grid");
    std::array<std::uint32_t, 3> lo{}, hi{};
    for (int a = 0; a < n; ++a) {
      auto i = static_cast<std::size_t>(a);
      const Rational extent(static_cast<long long>(geometry->extent(a)));
      const Rational l = fb.lo[i] * extent, h = fb.hi[i] * extent;
      if (l.den() != 1 || h.den() != 1)
        throw InvalidArgument("shape", "fraction does not fall on a cell boundary at extent " +
                                           std::to_string(geometry->extent(a)));
      if (l.sign() < 0 || h > extent || !(l < h)) throw InvalidArgument("shape", "need 0 <= lo < hi <= 1");
      lo[i] = l.num().convert_to<std::uint32_t>();
      hi[i] = h.num().convert_to<std::uint32_t>();
    }
    auto dims = static_cast<std::size_t>(n);
    Box b = Box::make(std::span(lo.data(), dims), std::span(hi.data(), dims));
    for_each_row(*geometry, b, [&](std::uint64_t from, std::uint64_t to) { out.insert_range(from, to); });
  }
  return out;
}

BasisFamily LadderFamily::on(const GridGeometry& geometry) const {
  BasisFamily f = base;
  if (!scale_max_fraction) return f;
  const auto& frac = *scale_max_fraction;
  if (frac.sign() <= 0 || frac > Rational(1)) throw InvalidArgument("scale_max_fraction", "must lie in (0, 1]");
  std::vector<std::uint32_t> caps;
  const int axes = f.kind == FamilyKind::axis_rects ? geometry.dimension() : 1;
  for (int a = 0; a < axes; ++a) {
    std::uint32_t extent = geometry.extent(a);
    if (f.kind == FamilyKind::cubes)
      for (int b = 0; b < geometry.dimension(); ++b) extent = std::min(extent, geometry.extent(b));
    auto cap = (frac * Rational(static_cast<long long>(extent))).floor().convert_to<std::uint32_t>();
    caps.push_back(std::max<std::uint32_t>(cap, 1));
  }
  f.scale_max = caps;
  return f;
}

StrictGapReport strict_gap_report(const ShapeSpec& shape, const Rational& gamma, const LadderFamily& family,
                                  const std::vector<GeometryPtr>& ladder, const EvalOptions& options) {
  if (gamma.sign() <= 0 || gamma > Rational(1)) throw InvalidArgument("gamma", "must lie in (0, 1]");
  if (ladder.empty()) throw InvalidArgument("ladder", "needs at least one resolution");
  StrictGapReport report;
  report.gamma = gamma;
  for (const auto& geometry : ladder) {
    CellSet set(geometry);
    try {
      set = rasterize_shape(shape, geometry);
    } catch (const InvalidArgument& e) {
      report.notices.push_back("skipped " + geometry->descriptor() + ": " + e.what());
      continue;
    }
    const MaximalField field = maximal_field(set, family.on(*geometry), options);
    const CellSet inclusive = superlevel(field, gamma, Bound::inclusive);
    const CellSet strict = superlevel(field, gamma, Bound::strict);
    if (!strict.is_subset_of(inclusive)) throw InternalError("strict superlevel escaped the inclusive one");

    StrictGapRung rung;
    rung.geometry = geometry;
    rung.inclusive_measure = inclusive.measure();
    rung.strict_measure = strict.measure();
    rung.gap = rung.inclusive_measure - rung.strict_measure;
    rung.gap_cells = inclusive.count() - strict.count();
    if (rung.gap.sign() < 0) throw InternalError("negative strict gap");
    if (!report.rungs.empty() && !report.rungs.back().gap.is_zero())
      rung.gap_ratio_to_previous = rung.gap / report.rungs.back().gap;
    report.rungs.push_back(std::move(rung));
  }
  return report;
}

}  // namespace halolab
