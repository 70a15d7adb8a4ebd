#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "halolab/grid.hpp"

namespace halolab {

inline constexpr std::uint64_t kDefaultElementBudget = std::uint64_t{1} << 26;

/// Half-open integer box [lo_i, hi_i) in cell coordinates, one range per axis.
struct Box {
  std::uint8_t dims = 1;
  std::array<std::uint32_t, 3> lo{};
  std::array<std::uint32_t, 3> hi{};

  static Box interval(std::uint32_t lo, std::uint32_t hi);
  static Box make(std::span<const std::uint32_t> lo, std::span<const std::uint32_t> hi);

  std::uint64_t cell_count() const;
  bool contains(const std::array<std::uint32_t, 3>& coords) const;
  bool intersects(const Box& other) const;
  bool fits(const GridGeometry& geometry) const;

  friend bool operator==(const Box&, const Box&) = default;
  friend auto operator<=>(const Box&, const Box&) = default;
};

/// Calls `fn(begin, end)` for each run of consecutive linear cell indices in `box`.
template <class Fn>
void for_each_row(const GridGeometry& geometry, const Box& box, Fn&& fn) {
  const auto& ext = geometry.padded_extent();
  std::array<std::uint32_t, 3> lo{0, 0, 0}, hi{1, 1, 1};
  for (int a = 0; a < box.dims; ++a) {
    int p = 3 - box.dims + a;
    lo[static_cast<std::size_t>(p)] = box.lo[static_cast<std::size_t>(a)];
    hi[static_cast<std::size_t>(p)] = box.hi[static_cast<std::size_t>(a)];
  }
  for (std::uint64_t i = lo[0]; i < hi[0]; ++i)
    for (std::uint64_t j = lo[1]; j < hi[1]; ++j) {
      std::uint64_t base = (i * ext[1] + j) * ext[2];
      fn(base + lo[2], base + hi[2]);
    }
}

/// One member of a basis: a nonempty union of pairwise disjoint boxes.
struct BasisElement {
  std::uint64_t id = 0;
  std::vector<Box> boxes;

  std::uint64_t cell_count() const;
  bool contains_cell(const GridGeometry& geometry, std::uint64_t cell) const;
  CellSet cells(const GeometryPtr& geometry) const;

  friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

enum class FamilyKind { intervals, cubes, axis_rects, jump_example, explicit_list };

std::string_view to_string(FamilyKind kind);
FamilyKind parse_family_kind(std::string_view text);

/// Parameters of the discretized family ((0,1) ∪ (x, x+e)) ∩ (0,2), scaled by s.
struct JumpParams {
  std::vector<std::uint32_t> scales;
  std::vector<std::uint32_t> gaps;
  std::uint32_t stride = 1;
};

/// Generator for a translation- and scale-closed collection of elements.
///
/// `scale_min` / `scale_max` hold side lengths in cells, either one value for
/// every axis or one per axis. A `scale_max` entry of 0 (or an empty vector)
/// means "up to the grid extent".
struct BasisFamily {
  FamilyKind kind = FamilyKind::intervals;
  std::vector<std::uint32_t> scale_min{1};
  std::vector<std::uint32_t> scale_max{};
  JumpParams jump;
  std::vector<std::vector<Box>> explicit_elements;

  static BasisFamily intervals(std::uint32_t min_len = 1, std::uint32_t max_len = 0);
  static BasisFamily cubes(std::uint32_t min_side = 1, std::uint32_t max_side = 0);
  static BasisFamily axis_rects(std::vector<std::uint32_t> min_sides, std::vector<std::uint32_t> max_sides);
  static BasisFamily jump_example(JumpParams params);
  static BasisFamily explicit_list(std::vector<std::vector<Box>> elements);

  /// Canonical one-line JSON description, used for provenance.
  std::string descriptor() const;
};

struct IntervalSpec {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
};

struct JumpSpec {
  std::uint32_t translate = 0;
  std::uint32_t scale = 0;
  std::uint32_t offset = 0;
  std::uint32_t gap = 0;
};

using ElementSpec = std::variant<IntervalSpec, Box, JumpSpec, std::vector<Box>>;

/// Builds one element; rejects anything that leaves the grid instead of clipping.
BasisElement rasterize_element(const ElementSpec& spec, const GridGeometry& geometry, std::uint64_t id = 0);

/// Streams the members of a family in canonical order.
///
/// Every family is a list of shapes, each swept over its lattice of
/// translations. Shapes are ordered by size (intervals by length, cubes by side,
/// rectangles by side vector, jump elements by scale then shape); translations
/// are row-major. Element ids are positions in this stream.
class ElementCursor {
 public:
  ElementCursor(const BasisFamily& family, const GridGeometry& geometry);

  std::uint64_t total() const { return total_; }
  /// Positions the cursor so the next call to `next()` yields element `id`.
  void seek(std::uint64_t id);
  bool next();
  const BasisElement& current() const { return current_; }

 private:
  struct Shape {
    std::vector<Box> boxes;
    std::array<std::uint32_t, 3> span{};
    std::array<std::uint64_t, 3> positions{};
    std::uint32_t stride = 1;
    std::uint64_t count = 0;
  };
  struct JumpShape {
    std::uint32_t first_len;
    std::uint32_t second_off;
    std::uint32_t second_len;
  };

  std::uint64_t shape_total() const;
  std::uint64_t shape_count(std::uint64_t index) const;
  void load_shape(std::uint64_t index);
  void finish_shape(Shape& shape) const;

  const BasisFamily* family_;
  const GridGeometry* geometry_;
  int dims_;
  std::array<std::uint32_t, 3> min_{};
  std::array<std::uint32_t, 3> max_{};
  std::vector<JumpShape> jump_shapes_;
  std::uint64_t total_ = 0;

  std::uint64_t shape_index_ = 0;
  std::uint64_t position_ = 0;
  std::uint64_t next_id_ = 0;
  bool loaded_ = false;
  Shape shape_;
  BasisElement current_;
};

/// Exact number of elements the family has on this grid.
std::uint64_t count_elements(const BasisFamily& family, const GridGeometry& geometry);

/// Throws BudgetExceeded unless the family fits the element budget; returns the count.
std::uint64_t require_element_budget(const BasisFamily& family, const GridGeometry& geometry,
                                     std::uint64_t budget);

std::vector<BasisElement> enumerate_elements(const BasisFamily& family, const GridGeometry& geometry,
                                             std::uint64_t budget = kDefaultElementBudget);

/// The subsequence of `enumerate_elements` whose cells include `cell`.
std::vector<BasisElement> elements_through(const BasisFamily& family, const GridGeometry& geometry,
                                           std::uint64_t cell, std::uint64_t budget = kDefaultElementBudget);

}  // namespace halolab
