#include "cli/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "halolab/errors.hpp"

namespace halolab::cli {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& message) { throw InvalidArgument(field, message); }

const std::set<std::string> kCommon = {"subcommand", "workers", "budget", "seed", "output", "format"};

const std::map<std::string, std::set<std::string>>& subcommand_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"maximal", {"geometry", "family", "set"}},
      {"halo-curve", {"geometry", "family", "u_grid", "strategy", "pooling"}},
      {"jump-demo", {"geometry", "family", "u_grid", "strategy", "pooling"}},
      {"iterate", {"geometry", "family", "set", "alpha", "gamma", "k", "element", "c_probe", "output_json"}},
      {"augment-check", {"geometry", "family", "set", "alpha", "eps"}},
      {"strict-gap", {"family", "shape", "gamma", "ladder", "domain", "scale_max_fraction"}},
      {"oracle", {"geometry", "family", "u"}},
      {"bench", {"geometry", "family", "set", "repeats"}},
  };
  return keys;
}

Json intervals_family() { return Json{{"kind", "intervals"}, {"scale_min", 1}, {"scale_max", 0}}; }

Json geometry_json(std::uint32_t n, const char* h) { return Json{{"extent", Json::array({n})}, {"h", h}}; }

std::uint64_t get_u64(const Json& j, const std::string& field) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) bad(field, "must be non-negative");
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  bad(field, "expected a non-negative integer");
}

std::uint32_t get_u32(const Json& j, const std::string& field) {
  auto v = get_u64(j, field);
  if (v > UINT32_MAX) bad(field, "does not fit 32 bits");
  return static_cast<std::uint32_t>(v);
}

std::vector<std::uint32_t> get_u32_list(const Json& j, const std::string& field) {
  if (j.is_null()) return {};
  if (!j.is_array()) return {get_u32(j, field)};
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_u32(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

Rational get_rational(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const InvalidArgument&) {
      bad(field, "expected an exact rational such as \"3/2\", got \"" + j.get<std::string>() + "\"");
    }
  }
  bad(field, "expected an exact rational (integer or \"a/b\" string)");
}

std::string get_string(const Json& j, const std::string& field) {
  if (!j.is_string()) bad(field, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const Json& j, const std::string& field) {
  if (!j.is_boolean()) bad(field, "expected true or false");
  return j.get<bool>();
}

void only_keys(const Json& j, const std::string& field, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(field, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) bad(field + "." + key, "unknown key");
  }
}

const Json& require(const Json& j, const std::string& parent, const char* key) {
  if (!j.contains(key)) bad(parent + "." + key, "missing");
  return j.at(key);
}

Box parse_box(const Json& j, const std::string& field, const GridGeometry* geometry) {
  only_keys(j, field, {"lo", "hi"});
  auto lo = get_u32_list(require(j, field, "lo"), field + ".lo");
  auto hi = get_u32_list(require(j, field, "hi"), field + ".hi");
  if (lo.size() != hi.size() || lo.empty() || lo.size() > 3) bad(field, "lo and hi need the same arity in 1..3");
  for (std::size_t a = 0; a < lo.size(); ++a)
    if (lo[a] >= hi[a]) bad(field, "need lo < hi on every axis");
  Box b = Box::make(lo, hi);
  if (geometry && (b.dims != geometry->dimension() || !b.fits(*geometry))) bad(field, "box does not fit the grid");
  return b;
}

GeometryPtr parse_geometry(const Json& j, std::uint64_t cell_budget) {
  only_keys(j, "geometry", {"extent", "h"});
  auto extent = get_u32_list(require(j, "geometry", "extent"), "geometry.extent");
  Rational h = get_rational(require(j, "geometry", "h"), "geometry.h");
  if (extent.empty() || extent.size() > 3) bad("geometry.extent", "dimension must be 1, 2 or 3");
  for (auto n : extent)
    if (n == 0) bad("geometry.extent", "every axis needs at least one cell");
  if (h.sign() <= 0) bad("geometry.h", "cell width must be positive");
  return make_geometry(std::move(extent), std::move(h), cell_budget);
}

BasisFamily parse_family(const Json& j) {
  only_keys(j, "family", {"kind", "scale_min", "scale_max", "jump", "explicit"});
  BasisFamily f;
  try {
    f.kind = parse_family_kind(get_string(require(j, "family", "kind"), "family.kind"));
  } catch (const InvalidArgument& e) {
    bad("family.kind", e.what());
  }
  if (j.contains("scale_min")) f.scale_min = get_u32_list(j["scale_min"], "family.scale_min");
  if (j.contains("scale_max")) f.scale_max = get_u32_list(j["scale_max"], "family.scale_max");
  if (f.scale_min.empty()) bad("family.scale_min", "must not be empty");
  if (j.contains("jump")) {
    const Json& jump = j["jump"];
    only_keys(jump, "family.jump", {"scales", "gaps", "stride"});
    if (jump.contains("scales")) f.jump.scales = get_u32_list(jump["scales"], "family.jump.scales");
    if (jump.contains("gaps")) f.jump.gaps = get_u32_list(jump["gaps"], "family.jump.gaps");
    if (jump.contains("stride")) f.jump.stride = get_u32(jump["stride"], "family.jump.stride");
  }
  if (j.contains("explicit")) {
    const Json& list = j["explicit"];
    if (!list.is_array()) bad("family.explicit", "expected an array of elements");
    for (std::size_t e = 0; e < list.size(); ++e) {
      const std::string field = "family.explicit[" + std::to_string(e) + "]";
      if (!list[e].is_array() || list[e].empty()) bad(field, "expected a nonempty array of boxes");
      std::vector<Box> boxes;
      for (std::size_t b = 0; b < list[e].size(); ++b)
        boxes.push_back(parse_box(list[e][b], field + "[" + std::to_string(b) + "]", nullptr));
      f.explicit_elements.push_back(std::move(boxes));
    }
  }
  return f;
}

CellSet parse_set(const Json& j, const GeometryPtr& geometry) {
  only_keys(j, "set", {"cells", "boxes", "hex", "random"});
  if (j.size() != 1) bad("set", "give exactly one of cells, boxes, hex, random");
  CellSet out(geometry);
  if (j.contains("cells")) {
    const Json& cells = j["cells"];
    if (!cells.is_array()) bad("set.cells", "expected an array of cell indices");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      auto c = get_u64(cells[i], "set.cells");
      if (c >= geometry->cell_count()) bad("set.cells", "cell " + std::to_string(c) + " is outside the grid");
      out.insert(c);
    }
  } else if (j.contains("boxes")) {
    const Json& boxes = j["boxes"];
    if (!boxes.is_array()) bad("set.boxes", "expected an array of {lo, hi} boxes");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      Box b = parse_box(boxes[i], "set.boxes[" + std::to_string(i) + "]", geometry.get());
      for_each_row(*geometry, b, [&](std::uint64_t lo, std::uint64_t hi) { out.insert_range(lo, hi); });
    }
  } else if (j.contains("hex")) {
    const std::string text = get_string(j["hex"], "set.hex");
    try {
      if (text.find(';') != std::string::npos) {
        out = CellSet::parse(text);
        if (!(out.geometry() == *geometry)) bad("set.hex", "serialized geometry differs from the configured one");
        out = CellSet::from_hex(geometry, out.hex());
      } else {
        out = CellSet::from_hex(geometry, text);
      }
    } catch (const InvalidArgument& e) {
      if (e.field() == "set.hex") throw;
      bad("set.hex", e.what());
    }
  } else {
    const Json& r = j["random"];
    only_keys(r, "set.random", {"density", "seed"});
    Rational density = get_rational(require(r, "set.random", "density"), "set.random.density");
    if (density.sign() < 0 || density > Rational(1)) bad("set.random.density", "must lie in [0, 1]");
    std::uint64_t seed = r.contains("seed") ? get_u64(r["seed"], "set.random.seed") : 0;
    out = random_set(geometry, density, seed);
  }
  return out;
}

ShapeSpec parse_shape(const Json& j) {
  only_keys(j, "shape", {"boxes"});
  const Json& boxes = require(j, "shape", "boxes");
  if (!boxes.is_array() || boxes.empty()) bad("shape.boxes", "expected a nonempty array");
  ShapeSpec shape;
  std::size_t arity = 0;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const std::string field = "shape.boxes[" + std::to_string(i) + "]";
    only_keys(boxes[i], field, {"lo", "hi"});
    const Json& lo = require(boxes[i], field, "lo");
    const Json& hi = require(boxes[i], field, "hi");
    if (!lo.is_array() || !hi.is_array() || lo.size() != hi.size() || lo.empty() || lo.size() > 3)
      bad(field, "lo and hi need the same arity in 1..3");
    if (arity != 0 && lo.size() != arity) bad(field, "every box needs the same arity");
    arity = lo.size();
    FractionalBox fb;
    for (std::size_t a = 0; a < lo.size(); ++a) {
      fb.lo.push_back(get_rational(lo[a], field + ".lo"));
      fb.hi.push_back(get_rational(hi[a], field + ".hi"));
      if (fb.lo[a].sign() < 0 || !(fb.lo[a] < fb.hi[a]) || fb.hi[a] > Rational(1))
        bad(field, "need 0 <= lo < hi <= 1 on every axis");
    }
    shape.boxes.push_back(std::move(fb));
  }
  return shape;
}

void check_open_unit(const Rational& value, const std::string& field) {
  if (value.sign() <= 0 || value >= Rational(1)) bad(field, "must lie strictly between 0 and 1");
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::string current;
  for (char ch : path) {
    if (ch == '.') {
      parts.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  parts.push_back(current);
  return parts;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"maximal", "halo-curve", "jump-demo", "iterate",
                                                 "augment-check", "strict-gap", "oracle", "bench"};
  return names;
}

Json defaults_for(const std::string& subcommand) {
  Json d = {
      {"subcommand", subcommand},
      {"workers", 0},
      {"seed", 0},
      {"budget",
       {{"cells", kDefaultCellBudget}, {"elements", kDefaultElementBudget}, {"subsets", kDefaultSubsetBudget},
        {"search", 64}}},
      {"output", "halolab-" + subcommand + ".csv"},
      {"format", "csv"},
  };
  if (subcommand == "maximal") {
    d["geometry"] = geometry_json(16, "1/16");
    d["family"] = intervals_family();
    d["set"] = {{"cells", {7, 8}}};
  } else if (subcommand == "halo-curve") {
    d["geometry"] = geometry_json(12, "1/12");
    d["family"] = intervals_family();
    d["u_grid"] = {"11/10", "3/2", "2", "3"};
    d["strategy"] = "structured";
    d["pooling"] = true;
  } else if (subcommand == "jump-demo") {
    d["geometry"] = geometry_json(2000, "1/1000");
    d["family"] = {{"kind", "jump_example"}, {"jump", {{"scales", {1000}}, {"gaps", {1, 2, 4}}, {"stride", 1}}}};
    d["u_grid"] = {"101/100", "11/10", "3/2"};
    d["strategy"] = "structured";
    d["pooling"] = true;
    d["budget"]["search"] = 16;
  } else if (subcommand == "iterate") {
    d["geometry"] = geometry_json(8, "1/8");
    d["family"] = intervals_family();
    d["set"] = {{"cells", {3, 4}}};
    d["alpha"] = "1/4";
    d["gamma"] = "1/2";
    d["k"] = nullptr;
    d["element"] = nullptr;
    d["c_probe"] = "2";
    d["output_json"] = "halolab-iterate-containment.json";
  } else if (subcommand == "augment-check") {
    d["geometry"] = geometry_json(64, "1/64");
    d["family"] = intervals_family();
    d["set"] = {{"random", {{"density", "1/2"}, {"seed", 1}}}};
    d["alpha"] = "3/4";
    d["eps"] = "1/32";
    d["format"] = "json";
    d["output"] = "halolab-augment-check.json";
  } else if (subcommand == "strict-gap") {
    d["family"] = intervals_family();
    d["shape"] = {{"boxes", {{{"lo", {"1/4"}}, {"hi", {"3/4"}}}}}};
    d["gamma"] = "1/2";
    d["ladder"] = {16, 64, 256};
    d["domain"] = "1";
    d["scale_max_fraction"] = "1/2";
  } else if (subcommand == "oracle") {
    d["geometry"] = geometry_json(12, "1/12");
    d["family"] = intervals_family();
    d["u"] = "5/2";
    d["format"] = "json";
    d["output"] = "halolab-oracle.json";
  } else if (subcommand == "bench") {
    d["geometry"] = {{"extent", {128, 128}}, {"h", "1/128"}};
    d["family"] = {{"kind", "cubes"}, {"scale_min", 1}, {"scale_max", 16}};
    d["set"] = {{"random", {{"density", "1/2"}, {"seed", 1}}}};
    d["repeats"] = 3;
  } else {
    bad("subcommand", "unknown subcommand '" + subcommand + "'");
  }
  return d;
}

void apply_override(Json& config, std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) bad("--set", "expected key=value, got '" + std::string(assignment) + "'");
  auto path = split_path(assignment.substr(0, eq));
  for (const auto& p : path)
    if (p.empty()) bad("--set", "empty path component in '" + std::string(assignment) + "'");
  std::string text(assignment.substr(eq + 1));
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  // "set" is one-of: choosing a new representation drops the previous one.
  if (path.size() >= 2 && path[0] == "set" && (!config.contains("set") || !config["set"].contains(path[1])))
    config["set"] = Json::object();

  Json* node = &config;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!node->is_object()) bad(path[0], "cannot set a nested key on a non-object");
    Json& child = (*node)[path[i]];
    if (child.is_null()) child = Json::object();
    node = &child;
  }
  if (!node->is_object()) bad(path[0], "cannot set a nested key on a non-object");
  (*node)[path.back()] = std::move(value);
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("config", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json doc = Json::parse(buffer.str(), nullptr, false);
  if (doc.is_discarded()) bad("config", "'" + path + "' is not valid JSON");
  if (!doc.is_object()) bad("config", "top level must be an object");
  return doc;
}

Config resolve(const std::string& subcommand, const Json& user, const std::vector<std::string>& overrides) {
  Json doc = defaults_for(subcommand);
  const auto& keys = subcommand_keys().at(subcommand);
  auto allowed = [&](const std::string& key) { return kCommon.count(key) || keys.count(key); };

  if (!user.is_null() && !user.is_object()) bad("config", "top level must be an object");
  if (user.is_object()) {
    for (const auto& [key, value] : user.items()) {
      if (!allowed(key)) bad(key, "not a setting of '" + subcommand + "'");
      if (key == "subcommand") continue;
      if (key == "budget" && value.is_object()) doc["budget"].merge_patch(value);
      else doc[key] = value;
    }
  }
  for (const auto& o : overrides) {
    apply_override(doc, o);
    for (const auto& [key, value] : doc.items())
      if (!allowed(key)) bad(key, "not a setting of '" + subcommand + "'");
  }
  doc["subcommand"] = subcommand;

  Config c;
  c.subcommand = subcommand;

  only_keys(doc["budget"], "budget", {"cells", "elements", "subsets", "search"});
  const Json& budget = doc["budget"];
  if (budget.contains("cells")) c.budget.cells = get_u64(budget["cells"], "budget.cells");
  if (budget.contains("elements")) c.budget.elements = get_u64(budget["elements"], "budget.elements");
  if (budget.contains("subsets")) c.budget.subsets = get_u64(budget["subsets"], "budget.subsets");
  if (budget.contains("search")) c.budget.search = get_u64(budget["search"], "budget.search");
  if (c.budget.elements == 0) bad("budget.elements", "must be positive");
  if (c.budget.search == 0) bad("budget.search", "must be positive");

  c.workers = static_cast<unsigned>(get_u32(doc["workers"], "workers"));
  if (c.workers > 1024) bad("workers", "at most 1024");
  c.seed = get_u64(doc["seed"], "seed");
  c.output = get_string(doc["output"], "output");
  if (c.output.empty()) bad("output", "must name a file");
  c.format = get_string(doc["format"], "format");
  const bool json_only = subcommand == "augment-check" || subcommand == "oracle";
  const bool csv_only = subcommand == "bench" || subcommand == "iterate";
  if (c.format != "csv" && c.format != "json") bad("format", "expected \"csv\" or \"json\"");
  if (json_only && c.format != "json") bad("format", "'" + subcommand + "' writes JSON only");
  if (csv_only && c.format != "csv") bad("format", "'" + subcommand + "' writes CSV only");

  c.family = parse_family(doc["family"]);

  if (keys.count("geometry")) {
    c.geometry = parse_geometry(doc["geometry"], c.budget.cells);
    try {
      require_element_budget(c.family, *c.geometry, c.budget.elements);
    } catch (const InvalidArgument& e) {
      bad("family", e.what());
    }
  }
  if (keys.count("set")) c.set = parse_set(doc["set"], c.geometry);

  if (keys.count("u_grid")) {
    const Json& grid = doc["u_grid"];
    if (!grid.is_array() || grid.empty()) bad("u_grid", "expected a nonempty array of rationals");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      c.u_grid.push_back(get_rational(grid[i], "u_grid[" + std::to_string(i) + "]"));
      if (c.u_grid.back().sign() < 0) bad("u_grid", "values must be non-negative");
      if (i > 0 && !(c.u_grid[i - 1] < c.u_grid[i])) bad("u_grid", "must be strictly increasing");
    }
    try {
      c.strategy = parse_search_method(get_string(doc["strategy"], "strategy"));
    } catch (const InvalidArgument& e) {
      if (e.field() != "strategy") throw;
      bad("strategy", "expected exhaustive, random, hillclimb or structured");
    }
    c.pooling = get_bool(doc["pooling"], "pooling");
    if (c.strategy == SearchMethod::exhaustive) {
      std::uint64_t cells = c.geometry->cell_count();
      std::uint64_t required = cells >= 64 ? UINT64_MAX : (std::uint64_t{1} << cells) - 1;
      if (required > c.budget.subsets) throw BudgetExceeded("subset", required, c.budget.subsets);
    }
  }

  if (subcommand == "oracle") {
    c.u = get_rational(doc["u"], "u");
    if (!(c.u > Rational(1))) bad("u", "must exceed 1");
    std::uint64_t cells = c.geometry->cell_count();
    std::uint64_t required = cells >= 64 ? UINT64_MAX : (std::uint64_t{1} << cells) - 1;
    if (required > c.budget.subsets) throw BudgetExceeded("subset", required, c.budget.subsets);
  }

  if (subcommand == "iterate") {
    c.alpha = get_rational(doc["alpha"], "alpha");
    c.gamma = get_rational(doc["gamma"], "gamma");
    check_open_unit(c.alpha, "alpha");
    check_open_unit(c.gamma, "gamma");
    if (!(c.alpha < c.gamma)) bad("alpha", "must be strictly below gamma");
    c.c_probe = get_rational(doc["c_probe"], "c_probe");
    if (c.c_probe < Rational(1)) bad("c_probe", "must be >= 1");
    if (!doc["k"].is_null()) c.k = get_u64(doc["k"], "k");
    if (c.set->empty()) bad("set", "the orbit needs a nonempty set");
    if (!doc["element"].is_null()) {
      c.element = parse_box(doc["element"], "element", c.geometry.get());
    } else {
      // Bounding box of the set.
      std::array<std::uint32_t, 3> lo{}, hi{};
      const int n = c.geometry->dimension();
      for (int a = 0; a < n; ++a) {
        lo[static_cast<std::size_t>(a)] = UINT32_MAX;
        hi[static_cast<std::size_t>(a)] = 0;
      }
      for (auto cell : c.set->cells()) {
        auto xy = c.geometry->coords(cell);
        for (int a = 0; a < n; ++a) {
          auto i = static_cast<std::size_t>(a);
          lo[i] = std::min(lo[i], xy[i]);
          hi[i] = std::max(hi[i], xy[i] + 1);
        }
      }
      auto dims = static_cast<std::size_t>(n);
      c.element = Box::make(std::span(lo.data(), dims), std::span(hi.data(), dims));
    }
    if (average(BasisElement{0, {*c.element}}, *c.set) < c.alpha)
      bad("element", "average of the element over the set is below alpha");
  }

  if (subcommand == "augment-check") {
    c.alpha = get_rational(doc["alpha"], "alpha");
    c.eps = get_rational(doc["eps"], "eps");
    check_open_unit(c.alpha, "alpha");
    const Rational half = c.alpha / Rational(2), rest = Rational(1) - c.alpha;
    if (c.eps.sign() <= 0 || c.eps >= (half < rest ? half : rest))
      bad("eps", "need 0 < eps < min(alpha/2, 1 - alpha)");
    if (c.set->empty()) bad("set", "the construction needs a nonempty set");
  }

  if (subcommand == "strict-gap") {
    c.gamma = get_rational(doc["gamma"], "gamma");
    if (c.gamma.sign() <= 0 || c.gamma > Rational(1)) bad("gamma", "must lie in (0, 1]");
    c.shape = parse_shape(doc["shape"]);
    c.ladder = get_u32_list(doc["ladder"], "ladder");
    if (c.ladder.empty()) bad("ladder", "needs at least one resolution");
    c.domain = get_rational(doc["domain"], "domain");
    if (c.domain.sign() <= 0) bad("domain", "must be positive");
    if (!doc["scale_max_fraction"].is_null()) {
      c.scale_max_fraction = get_rational(doc["scale_max_fraction"], "scale_max_fraction");
      if (c.scale_max_fraction->sign() <= 0 || *c.scale_max_fraction > Rational(1))
        bad("scale_max_fraction", "must lie in (0, 1]");
    }
    const LadderFamily ladder{c.family, c.scale_max_fraction};
    const std::size_t dims = c.shape.boxes.front().lo.size();
    for (auto n : c.ladder) {
      if (n == 0) bad("ladder", "every rung needs at least one cell per axis");
      auto g = make_geometry(std::vector<std::uint32_t>(dims, n), c.domain / Rational(n), c.budget.cells);
      try {
        require_element_budget(ladder.on(*g), *g, c.budget.elements);
      } catch (const InvalidArgument& e) {
        bad("family", e.what());
      }
      c.rungs.push_back(std::move(g));
    }
  }

  if (subcommand == "bench") {
    c.repeats = get_u64(doc["repeats"], "repeats");
    if (c.repeats == 0) bad("repeats", "must be positive");
  }

  if (subcommand == "maximal" || subcommand == "bench") {
    if (c.set->empty() && subcommand == "bench") bad("set", "benchmarks need a nonempty set");
  }

  if (keys.count("output_json")) {
    c.output_json = get_string(doc["output_json"], "output_json");
    if (c.output_json.empty() || c.output_json == c.output) bad("output_json", "must name a second file");
  }

  c.resolved = std::move(doc);
  return c;
}

}  // namespace halolab::cli
