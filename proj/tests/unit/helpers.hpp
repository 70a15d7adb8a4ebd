#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "brute_force.hpp"
#include "halolab/basis.hpp"
#include "halolab/grid.hpp"
#include "halolab/rational.hpp"

namespace testing {

inline oracle::Cells to_cells(const halolab::CellSet& s) {
  oracle::Cells out(s.universe());
  for (auto c : s.cells()) out[c] = true;
  return out;
}

inline halolab::CellSet from_cells(const halolab::GeometryPtr& g, const oracle::Cells& cells) {
  halolab::CellSet out(g);
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i]) out.insert(i);
  return out;
}

inline halolab::Rational to_rational(const oracle::Frac& f) { return halolab::Rational(f.num, f.den); }

inline oracle::Frac to_frac(const halolab::Rational& r) {
  return {r.num().convert_to<std::int64_t>(), r.den().convert_to<std::int64_t>()};
}

/// Library enumeration as a set of sorted cell lists.
inline std::set<oracle::Element> element_cells(const halolab::BasisFamily& family, const halolab::GeometryPtr& g) {
  std::set<oracle::Element> out;
  for (const auto& e : halolab::enumerate_elements(family, *g)) {
    auto cells = e.cells(g).cells();
    out.insert(oracle::Element(cells.begin(), cells.end()));
  }
  return out;
}

inline halolab::GeometryPtr line(std::uint32_t n) { return halolab::make_geometry({n}, halolab::Rational(1, n)); }

}  // namespace testing
