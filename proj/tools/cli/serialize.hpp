#pragma once

#include <string>
#include <vector>

#include "cli/config.hpp"
#include "halolab/augment.hpp"
#include "halolab/halo.hpp"
#include "halolab/maximal.hpp"
#include "halolab/tauber.hpp"

namespace halolab::cli {

/// Integer fields are JSON numbers when they fit 64 bits, digit strings otherwise.
Json integer_json(const BigInt& value);

/// {"num", "den", "decimal"}; the decimal is rounded half to even at 12 places.
Json rational_json(const Rational& value);

/// "# halolab <version>" and "# config <compact json>" lines.
std::string csv_header(const Json& config);

/// {"tool", "config", "report"} pretty-printed, newline-terminated.
std::string json_document(const Json& report, const Json& config);

std::string curve_csv(const HaloCurve& curve, const Json& config);
Json curve_json(const HaloCurve& curve);
Json jump_report_json(const JumpReport& report);

std::string field_csv(const MaximalField& field, const Json& config);
Json field_json(const MaximalField& field);

std::string orbit_csv(const HaloOrbit& orbit, const Json& config);
Json containment_json(const ContainmentReport& containment, const ChainedBoundReport& chained);

std::string ladder_csv(const StrictGapReport& report, const Json& config);
Json ladder_json(const StrictGapReport& report);

Json augment_json(const AugmentPlan& plan, const WitnessFamily& witnesses, const Augmentation& augmentation,
                  const LemmaChainReport& report);

Json oracle_json(const Rational& u, const ExactHalo& exact);

struct BenchRow {
  std::string kernel;
  std::uint64_t cells = 0;
  std::uint64_t elements = 0;
  std::uint64_t repeats = 0;
  double seconds = 0;
};

std::string bench_csv(const std::vector<BenchRow>& rows, const Json& config);

}  // namespace halolab::cli
