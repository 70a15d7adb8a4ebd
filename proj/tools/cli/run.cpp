#include "cli/run.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "cli/serialize.hpp"
#include "halolab/augment.hpp"
#include "halolab/errors.hpp"

namespace halolab::cli {

namespace fs = std::filesystem;

namespace {

void require_directory(const std::string& path, const char* field) {
  fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent))
    throw InvalidArgument(field, "directory '" + parent.string() + "' does not exist");
}

std::string headline(const Rational& r) { return r.str() + " (" + r.decimal(12) + ")"; }

Outcome run_maximal(const Config& c) {
  const MaximalField field = maximal_field(*c.set, c.family, c.eval());
  write_atomic(c.output, c.format == "csv" ? field_csv(field, c.resolved)
                                           : json_document(field_json(field), c.resolved));
  Rational best(0);
  for (std::uint64_t i = 0; i < field.size(); ++i) best = std::max(best, field.value(i));
  return {"maximal: max value " + headline(best) + " over " + std::to_string(field.size()) + " cells, " +
              std::to_string(field.uncovered_count()) + " uncovered -> " + c.output,
          {c.output}};
}

Outcome run_curve(const Config& c) {
  const std::uint64_t budget = c.strategy == SearchMethod::exhaustive ? c.budget.subsets : c.budget.search;
  const HaloCurve curve =
      halo_curve(c.u_grid, c.family, c.geometry, c.strategy, c.seed, budget, c.eval(), c.pooling);
  if (c.pooling)
    for (std::size_t i = 1; i < curve.points.size(); ++i)
      if (curve.points[i].ratio < curve.points[i - 1].ratio)
        throw InternalError("pooled curve decreased between u=" + curve.points[i - 1].u.str() +
                            " and u=" + curve.points[i].u.str());
  if (c.format == "csv") {
    write_atomic(c.output, curve_csv(curve, c.resolved));
  } else {
    Json report = curve_json(curve);
    report["continuity"] = curve.points.size() >= 2 ? jump_report_json(continuity_scan(curve)) : Json(nullptr);
    write_atomic(c.output, json_document(report, c.resolved));
  }
  const auto& first = curve.points.front();
  return {c.subcommand + ": ratio " + headline(first.ratio) + " at u=" + first.u.str() + " [" +
              std::string(to_string(first.method)) + "] -> " + c.output,
          {c.output}};
}

Outcome run_iterate(const Config& c) {
  const auto params = IterationParams::make(c.alpha, c.gamma, c.geometry->dimension());
  const std::uint64_t k = c.k ? *c.k : k_alpha_gamma(c.alpha, c.gamma, c.geometry->dimension());
  const HaloOrbit orbit = halo_orbit(*c.set, c.gamma, k, c.family, c.eval());
  const BasisElement element{0, {*c.element}};
  const ContainmentReport containment = containment_experiment(element, *c.set, params, c.family, c.eval());
  const ChainedBoundReport chained = chained_bound_report(*c.set, params, c.family, c.c_probe, c.eval());
  write_atomic(c.output, orbit_csv(orbit, c.resolved));
  write_atomic(c.output_json, json_document(containment_json(containment, chained), c.resolved));
  return {"iterate: measure of H^" + std::to_string(k) + " is " + headline(orbit.measures.back()) +
              ", element contained after K=" + std::to_string(containment.k) + ": " +
              (containment.contained ? "yes" : "no") + " -> " + c.output + ", " + c.output_json,
          {c.output, c.output_json}};
}

Outcome run_augment(const Config& c) {
  const AugmentPlan plan = AugmentPlan::make(c.alpha, c.eps);
  const WitnessFamily witnesses = witness_family(*c.set, plan, c.family, c.eval());
  const Augmentation aug = augment_set(*c.set, witnesses.elements, plan, c.seed);
  const LemmaChainReport report =
      lemma_chain_report(*c.set, aug.e_tilde, witnesses.elements, plan, c.family, c.eval());
  write_atomic(c.output, json_document(augment_json(plan, witnesses, aug, report), c.resolved));
  if (!report.all_witnesses_pass || !report.e_inside_e_tilde)
    throw InternalError("augmentation left a witness below alpha; report kept at " + c.output);
  return {"augment-check: " + std::to_string(report.witness_count) + " witnesses all reach alpha, |E'| = " +
              std::to_string(report.e_prime_cells) + " cells, measure of E~ " + headline(aug.e_tilde.measure()) +
              " -> " + c.output,
          {c.output}};
}

Outcome run_strict_gap(const Config& c) {
  const LadderFamily family{c.family, c.scale_max_fraction};
  const StrictGapReport report = strict_gap_report(c.shape, c.gamma, family, c.rungs, c.eval());
  write_atomic(c.output, c.format == "csv" ? ladder_csv(report, c.resolved)
                                           : json_document(ladder_json(report), c.resolved));
  if (report.rungs.empty()) return {"strict-gap: no rung could rasterize the shape -> " + c.output, {c.output}};
  const auto& last = report.rungs.back();
  return {"strict-gap: gap " + headline(last.gap) + " (" + std::to_string(last.gap_cells) + " cells) at N=" +
              std::to_string(last.geometry->extent(0)) + " -> " + c.output,
          {c.output}};
}

Outcome run_oracle(const Config& c) {
  const ExactHalo exact = exact_discrete_halo(c.u, c.family, c.geometry, c.budget.subsets, c.eval());
  write_atomic(c.output, json_document(oracle_json(c.u, exact), c.resolved));
  return {"oracle: exact discrete halo " + headline(exact.ratio) + " at u=" + c.u.str() + ", witness " +
              std::to_string(exact.witness.count()) + " cells -> " + c.output,
          {c.output}};
}

template <class Fn>
double time_it(std::uint64_t repeats, Fn&& fn) {
  auto start = std::chrono::steady_clock::now();
  for (std::uint64_t i = 0; i < repeats; ++i) fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome run_bench(const Config& c) {
  const CellSet& set = *c.set;
  const auto cells = c.geometry->cell_count();
  const auto elements = count_elements(c.family, *c.geometry);
  const auto opts = c.eval();
  std::vector<BenchRow> rows;
  std::uint64_t sink = 0;
  const std::vector<std::uint32_t> origin(static_cast<std::size_t>(c.geometry->dimension()), 0);
  const Box whole = Box::make(origin, c.geometry->extent());
  rows.push_back({"prefix_counts", cells, 0, c.repeats, time_it(c.repeats, [&] {
                    PrefixCounts p(set);
                    sink += p.count(whole);
                  })});
  rows.push_back({"maximal_field", cells, elements, c.repeats, time_it(c.repeats, [&] {
                    sink += maximal_field(set, c.family, opts).uncovered_count();
                  })});
  rows.push_back({"superlevel_direct", cells, elements, c.repeats, time_it(c.repeats, [&] {
                    sink += superlevel_direct(set, c.family, Rational(1, 2), Bound::strict, opts).count();
                  })});
  rows.push_back({"halo_ratio", cells, elements, c.repeats, time_it(c.repeats, [&] {
                    sink += halo_ratio(set, Rational(2), c.family, opts).is_zero() ? 1 : 0;
                  })});
  (void)sink;
  write_atomic(c.output, bench_csv(rows, c.resolved));
  return {"bench: " + std::to_string(rows.size()) + " kernels on " + std::to_string(cells) + " cells, " +
              std::to_string(elements) + " elements -> " + c.output,
          {c.output}};
}

void write_repro(const std::string& path, const Json& config, const std::vector<std::string>& args,
                 const std::string& error) {
  Json bundle{{"tool", std::string(kVersion)}, {"args", args}, {"config", config}, {"error", error}};
  write_atomic(path, bundle.dump(2) + "\n");
}

}  // namespace

void write_atomic(const std::string& path, const std::string& bytes) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("output", "cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw InvalidArgument("output", "write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, target);
}

Outcome execute(const Config& c) {
  require_directory(c.output, "output");
  if (!c.output_json.empty()) require_directory(c.output_json, "output_json");
  const auto& s = c.subcommand;
  if (s == "maximal") return run_maximal(c);
  if (s == "halo-curve" || s == "jump-demo") return run_curve(c);
  if (s == "iterate") return run_iterate(c);
  if (s == "augment-check") return run_augment(c);
  if (s == "strict-gap") return run_strict_gap(c);
  if (s == "oracle") return run_oracle(c);
  if (s == "bench") return run_bench(c);
  throw InvalidArgument("subcommand", "unknown subcommand '" + s + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact experiments with discrete geometric maximal operators.", "halolab"};
  std::string config_path;
  std::vector<std::string> overrides;
  bool version = false;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--set", overrides, "Override one setting, e.g. --set geometry.extent=[32]")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_flag("--version", version, "Print the version and exit");
  for (const auto& name : subcommands()) app.add_subcommand(name)->fallthrough();
  app.require_subcommand(0, 1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidConfig;
  }
  if (version) {
    out << kVersion << "\n";
    return kOk;
  }

  Json resolved;
  std::string output_hint;
  try {
    Json user = config_path.empty() ? Json::object() : load_config_file(config_path);
    std::string sub;
    if (!app.get_subcommands().empty()) sub = app.get_subcommands().front()->get_name();
    else if (user.contains("subcommand") && user["subcommand"].is_string()) sub = user["subcommand"];
    if (sub.empty()) throw InvalidArgument("subcommand", "name a subcommand on the command line or in the config");
    const Config config = resolve(sub, user, overrides);
    resolved = config.resolved;
    output_hint = config.output;
    const Outcome outcome = execute(config);
    out << outcome.summary << "\n";
    return kOk;
  } catch (const InvalidArgument& e) {
    err << "halolab: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const BudgetExceeded& e) {
    err << "halolab: " << e.what() << " (raise budget to at least " << e.required() << ")\n";
    return kBudgetExceeded;
  } catch (const std::exception& e) {
    fs::path dir = output_hint.empty() ? fs::path(".") : fs::path(output_hint).parent_path();
    if (dir.empty()) dir = ".";
    const std::string bundle = (dir / "halolab-repro.json").string();
    try {
      write_repro(bundle, resolved, args, e.what());
      err << "halolab: internal error: " << e.what() << "\nrepro bundle: " << bundle << "\n";
    } catch (const std::exception& nested) {
      err << "halolab: internal error: " << e.what() << " (repro bundle not written: " << nested.what() << ")\n";
    }
    return kInternalError;
  }
}

}  // namespace halolab::cli
