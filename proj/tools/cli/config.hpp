#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "halolab/basis.hpp"
#include "halolab/grid.hpp"
#include "halolab/halo.hpp"
#include "halolab/maximal.hpp"
#include "halolab/rational.hpp"
#include "halolab/tauber.hpp"

namespace halolab::cli {

using Json = nlohmann::json;

inline constexpr std::string_view kVersion = "halolab 0.1.0";

const std::vector<std::string>& subcommands();

struct Budgets {
  std::uint64_t cells = kDefaultCellBudget;
  std::uint64_t elements = kDefaultElementBudget;
  std::uint64_t subsets = kDefaultSubsetBudget;
  std::uint64_t search = 64;
};

/// A validated experiment. `resolved` is the merged JSON (defaults, file,
/// overrides) that every output embeds.
struct Config {
  std::string subcommand;
  Json resolved;

  GeometryPtr geometry;
  BasisFamily family;
  std::optional<CellSet> set;

  std::vector<Rational> u_grid;
  Rational u;
  Rational alpha;
  Rational gamma;
  Rational eps;
  Rational c_probe;
  std::optional<std::uint64_t> k;
  std::optional<Box> element;

  SearchMethod strategy = SearchMethod::structured;
  std::uint64_t seed = 0;
  Budgets budget;
  unsigned workers = 0;
  bool pooling = true;

  ShapeSpec shape;
  std::vector<std::uint32_t> ladder;
  Rational domain{1};
  std::vector<GeometryPtr> rungs;  ///< one geometry per ladder entry, h = domain / N
  std::optional<Rational> scale_max_fraction;
  std::uint64_t repeats = 3;

  std::string format;
  std::string output;
  std::string output_json;

  EvalOptions eval() const { return EvalOptions{budget.elements, workers}; }
};

/// Full default document for a subcommand; unknown subcommands are rejected.
Json defaults_for(const std::string& subcommand);

/// Applies "a.b.c=value". The value is read as JSON when it parses, else as a string.
void apply_override(Json& config, std::string_view assignment);

Json load_config_file(const std::string& path);

/// Layers `user` over the subcommand defaults (top-level keys replace, except
/// "budget" which merges), then applies `overrides`, then validates every field
/// the subcommand reads. Throws InvalidArgument naming the field, or
/// BudgetExceeded when the requested work is over budget.
Config resolve(const std::string& subcommand, const Json& user, const std::vector<std::string>& overrides = {});

}  // namespace halolab::cli
