#include "cli/serialize.hpp"

#include <cstdio>
#include <limits>

namespace halolab::cli {

namespace {

std::string big(const BigInt& v) { return v.str(); }

void rational_columns(std::string& out, const Rational& r) {
  out += big(r.num());
  out += ',';
  out += big(r.den());
}

std::string join_cells(const std::vector<std::uint64_t>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(cells[i]);
  }
  return out;
}

Json set_json(const CellSet& set) {
  return Json{{"cells", set.count()}, {"measure", rational_json(set.measure())}, {"hex", set.to_string()}};
}

Json bound_json(const BoundCheck& b) {
  return Json{{"lhs", rational_json(b.lhs)}, {"rhs", rational_json(b.rhs)}, {"pass", b.pass}};
}

}  // namespace

Json integer_json(const BigInt& value) {
  if (value >= std::numeric_limits<std::int64_t>::min() && value <= std::numeric_limits<std::int64_t>::max())
    return Json(value.convert_to<std::int64_t>());
  return Json(value.str());
}

Json rational_json(const Rational& value) {
  return Json{{"num", integer_json(value.num())}, {"den", integer_json(value.den())}, {"decimal", value.decimal(12)}};
}

std::string csv_header(const Json& config) {
  return "# " + std::string(kVersion) + "\n# config " + config.dump() + "\n";
}

std::string json_document(const Json& report, const Json& config) {
  Json doc{{"tool", std::string(kVersion)}, {"config", config}, {"report", report}};
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

std::string curve_csv(const HaloCurve& curve, const Json& config) {
  std::string out = csv_header(config);
  out += "# family " + curve.family + "\n# geometry " + curve.geometry + "\n";
  out += "u_num,u_den,ratio_num,ratio_den,method,seed,witness_cells,witness_hex,u_decimal,ratio_decimal\n";
  for (const auto& p : curve.points) {
    rational_columns(out, p.u);
    out += ',';
    rational_columns(out, p.ratio);
    out += ',' + std::string(to_string(p.method)) + ',' + std::to_string(p.seed) + ',';
    out += std::to_string(p.witness.count()) + ',' + p.witness.to_string() + ',';
    out += p.u.decimal(12) + ',' + p.ratio.decimal(12) + '\n';
  }
  return out;
}

Json curve_json(const HaloCurve& curve) {
  Json points = Json::array();
  for (const auto& p : curve.points)
    points.push_back({{"u", rational_json(p.u)},
                      {"ratio", rational_json(p.ratio)},
                      {"method", std::string(to_string(p.method))},
                      {"seed", p.seed},
                      {"witness_cells", p.witness.count()},
                      {"witness_hex", p.witness.to_string()}});
  return Json{{"family", Json::parse(curve.family)}, {"geometry", curve.geometry}, {"points", points}};
}

Json jump_report_json(const JumpReport& report) {
  Json steps = Json::array();
  for (const auto& s : report.steps)
    steps.push_back({{"u_from", rational_json(s.u_from)},
                     {"u_to", rational_json(s.u_to)},
                     {"increment", rational_json(s.increment)}});
  return Json{{"steps", steps},
              {"max_increment", rational_json(report.max_increment)},
              {"max_index", report.max_index},
              {"left_ratio", rational_json(report.left_ratio)}};
}

// ---------------------------------------------------------------------------

std::string field_csv(const MaximalField& field, const Json& config) {
  std::string out = csv_header(config);
  out += "# provenance " + field.provenance() + "\n";
  out += "cell_index,value_num,value_den,value_decimal\n";
  for (std::uint64_t c = 0; c < field.size(); ++c) {
    Rational v = field.value(c);
    out += std::to_string(c) + ',';
    rational_columns(out, v);
    out += ',' + v.decimal(12) + '\n';
  }
  return out;
}

Json field_json(const MaximalField& field) {
  Json values = Json::array();
  for (std::uint64_t c = 0; c < field.size(); ++c) values.push_back(rational_json(field.value(c)));
  return Json{{"geometry", field.geometry().descriptor()},
              {"provenance", field.provenance()},
              {"uncovered_cells", field.uncovered_count()},
              {"values", values}};
}

// ---------------------------------------------------------------------------

std::string orbit_csv(const HaloOrbit& orbit, const Json& config) {
  std::string out = csv_header(config);
  out += "# gamma " + orbit.gamma.str() + "\n";
  out += "step,measure_num,measure_den,grew,set_hex,measure_decimal\n";
  for (std::size_t j = 0; j < orbit.sets.size(); ++j) {
    out += std::to_string(j) + ',';
    rational_columns(out, orbit.measures[j]);
    out += std::string(",") + (orbit.grew(j) ? "true" : "false") + ',' + orbit.sets[j].to_string() + ',';
    out += orbit.measures[j].decimal(12) + '\n';
  }
  return out;
}

Json containment_json(const ContainmentReport& containment, const ChainedBoundReport& chained) {
  Json first = containment.first_step ? Json(*containment.first_step) : Json(nullptr);
  Json ratios = Json::array();
  for (const auto& r : chained.step_ratios) ratios.push_back(r ? rational_json(*r) : Json(nullptr));
  Json within = Json::array();
  for (bool b : chained.step_within_probe) within.push_back(b);
  Json orbit_measures = Json::array();
  for (const auto& m : chained.orbit.measures) orbit_measures.push_back(rational_json(m));
  return Json{
      {"containment",
       {{"alpha", rational_json(containment.alpha)},
        {"gamma", rational_json(containment.gamma)},
        {"element_average", rational_json(containment.average)},
        {"k", containment.k},
        {"contained", containment.contained},
        {"first_step", first},
        {"final_set", set_json(containment.orbit.sets.back())}}},
      {"chained_bound",
       {{"gamma_tilde", rational_json(chained.gamma_tilde)},
        {"c_probe", rational_json(chained.c_probe)},
        {"k", chained.k},
        {"orbit_measures", orbit_measures},
        {"step_ratios", ratios},
        {"step_within_probe", within},
        {"level_measure", rational_json(chained.level_measure)},
        {"bound", rational_json(chained.bound)},
        {"chain_holds", chained.chain_holds},
        {"level_inside_orbit", chained.level_inside_orbit}}},
  };
}

// ---------------------------------------------------------------------------

std::string ladder_csv(const StrictGapReport& report, const Json& config) {
  std::string out = csv_header(config);
  out += "# gamma " + report.gamma.str() + "\n";
  for (const auto& n : report.notices) out += "# notice " + n + "\n";
  out += "rung,extent,h_num,h_den,inclusive_num,inclusive_den,strict_num,strict_den,gap_num,gap_den,gap_cells,"
         "gap_ratio_num,gap_ratio_den,gap_decimal\n";
  for (std::size_t i = 0; i < report.rungs.size(); ++i) {
    const auto& r = report.rungs[i];
    out += std::to_string(i) + ',' + std::to_string(r.geometry->extent(0)) + ',';
    rational_columns(out, r.geometry->cell_width());
    out += ',';
    rational_columns(out, r.inclusive_measure);
    out += ',';
    rational_columns(out, r.strict_measure);
    out += ',';
    rational_columns(out, r.gap);
    out += ',' + std::to_string(r.gap_cells) + ',';
    if (r.gap_ratio_to_previous) rational_columns(out, *r.gap_ratio_to_previous);
    else out += ',';
    out += ',' + r.gap.decimal(12) + '\n';
  }
  return out;
}

Json ladder_json(const StrictGapReport& report) {
  Json rungs = Json::array();
  for (const auto& r : report.rungs)
    rungs.push_back({{"geometry", r.geometry->descriptor()},
                     {"inclusive", rational_json(r.inclusive_measure)},
                     {"strict", rational_json(r.strict_measure)},
                     {"gap", rational_json(r.gap)},
                     {"gap_cells", r.gap_cells},
                     {"gap_ratio_to_previous",
                      r.gap_ratio_to_previous ? rational_json(*r.gap_ratio_to_previous) : Json(nullptr)}});
  return Json{{"gamma", rational_json(report.gamma)}, {"notices", report.notices}, {"rungs", rungs}};
}

// ---------------------------------------------------------------------------

Json augment_json(const AugmentPlan& plan, const WitnessFamily& witnesses, const Augmentation& augmentation,
                  const LemmaChainReport& report) {
  Json per = Json::array();
  for (std::size_t j = 0; j < report.per_witness.size(); ++j) {
    const auto& w = report.per_witness[j];
    per.push_back({{"id", w.id},
                   {"avg_E", rational_json(w.avg_e)},
                   {"avg_Etilde", rational_json(w.avg_e_tilde)},
                   {"pass", w.pass},
                   {"strict", w.strict},
                   {"quota", j < augmentation.quotas.size() ? augmentation.quotas[j] : 0}});
  }
  return Json{
      {"plan",
       {{"alpha", rational_json(plan.alpha)},
        {"eps", rational_json(plan.eps)},
        {"c", rational_json(plan.c)},
        {"target_density", rational_json(plan.target_density)}}},
      {"witness_count", report.witness_count},
      {"witness_union", set_json(witnesses.cover)},
      {"per_witness", per},
      {"all_witnesses_pass", report.all_witnesses_pass},
      {"all_witnesses_strict", report.all_witnesses_strict},
      {"e_prime_cells", report.e_prime_cells},
      {"e_prime", join_cells(augmentation.e_prime.cells())},
      {"e_tilde", set_json(augmentation.e_tilde)},
      {"e_inside_e_tilde", report.e_inside_e_tilde},
      {"size_bound", bound_json(report.size_bound)},
      {"rounding_excess_cells", rational_json(report.rounding_excess_cells)},
      {"superlevel_bound", bound_json(report.superlevel_bound)},
      {"superlevel_bound_inclusive", bound_json(report.superlevel_bound_inclusive)},
      {"notes", report.notes},
  };
}

Json oracle_json(const Rational& u, const ExactHalo& exact) {
  return Json{{"u", rational_json(u)},
              {"ratio", rational_json(exact.ratio)},
              {"subsets", exact.subsets},
              {"witness",
               {{"cells", exact.witness.cells()},
                {"count", exact.witness.count()},
                {"hex", exact.witness.to_string()}}}};
}

std::string bench_csv(const std::vector<BenchRow>& rows, const Json& config) {
  std::string out = csv_header(config);
  out += "kernel,cells,elements,repeats,seconds,cells_per_sec\n";
  char buf[64];
  for (const auto& r : rows) {
    out += r.kernel + ',' + std::to_string(r.cells) + ',' + std::to_string(r.elements) + ',' +
           std::to_string(r.repeats) + ',';
    std::snprintf(buf, sizeof buf, "%.6f", r.seconds);
    out += buf;
    out += ',';
    double rate = r.seconds > 0 ? static_cast<double>(r.cells * r.repeats) / r.seconds : 0.0;
    std::snprintf(buf, sizeof buf, "%.1f", rate);
    out += buf;
    out += '\n';
  }
  return out;
}

}  // namespace halolab::cli
