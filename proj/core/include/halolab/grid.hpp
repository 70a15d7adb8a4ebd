#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "halolab/rational.hpp"

namespace halolab {

inline constexpr std::uint64_t kDefaultCellBudget = std::uint64_t{1} << 24;

/// A box in R^n cut into N_1 x ... x N_n cells of side h.
///
/// Cells are indexed row-major with the last axis varying fastest. Internally
/// every geometry is padded to three axes by prepending axes of extent 1, so a
/// 1D grid of N cells is the 1 x 1 x N grid.
class GridGeometry {
 public:
  GridGeometry(std::vector<std::uint32_t> extent, Rational cell_width,
               std::uint64_t cell_budget = kDefaultCellBudget);

  int dimension() const { return static_cast<int>(extent_.size()); }
  std::span<const std::uint32_t> extent() const { return extent_; }
  std::uint32_t extent(int axis) const { return extent_.at(static_cast<std::size_t>(axis)); }
  const Rational& cell_width() const { return cell_width_; }
  std::uint64_t cell_count() const { return cell_count_; }
  /// h^n.
  const Rational& cell_measure() const { return cell_measure_; }

  /// Linear index of a cell; rejects coordinates outside the extent.
  std::uint64_t index(std::span<const std::uint32_t> coords) const;
  /// Per-axis coordinates (first `dimension()` entries meaningful).
  std::array<std::uint32_t, 3> coords(std::uint64_t index) const;

  const std::array<std::uint32_t, 3>& padded_extent() const { return padded_; }
  /// Maps a user axis to its padded axis.
  int padded_axis(int axis) const { return 3 - dimension() + axis; }

  /// "n=<dims>;extent=<N_1,..>;h=<num>/<den>;"
  std::string descriptor() const;

  friend bool operator==(const GridGeometry& a, const GridGeometry& b) {
    return a.extent_ == b.extent_ && a.cell_width_ == b.cell_width_;
  }

 private:
  std::vector<std::uint32_t> extent_;
  Rational cell_width_;
  Rational cell_measure_;
  std::uint64_t cell_count_ = 0;
  std::array<std::uint32_t, 3> padded_{1, 1, 1};
};

using GeometryPtr = std::shared_ptr<const GridGeometry>;

GeometryPtr make_geometry(std::vector<std::uint32_t> extent, Rational cell_width,
                          std::uint64_t cell_budget = kDefaultCellBudget);

/// A finite union of grid cells, stored as a bit-vector in row-major order.
class CellSet {
 public:
  explicit CellSet(GeometryPtr geometry);

  static CellSet full(GeometryPtr geometry);
  static CellSet from_cells(GeometryPtr geometry, std::span<const std::uint64_t> cells);
  /// Parses the serialized form produced by `to_string()`.
  static CellSet parse(std::string_view text, std::uint64_t cell_budget = kDefaultCellBudget);
  /// Reads the bare hex payload against a known geometry.
  static CellSet from_hex(GeometryPtr geometry, std::string_view hex);

  const GridGeometry& geometry() const { return *geometry_; }
  const GeometryPtr& geometry_ptr() const { return geometry_; }
  std::uint64_t universe() const { return geometry_->cell_count(); }

  bool contains(std::uint64_t cell) const;
  void insert(std::uint64_t cell);
  void erase(std::uint64_t cell);
  void flip(std::uint64_t cell);
  /// Sets cells [begin, end) without per-cell bounds checks beyond the range itself.
  void insert_range(std::uint64_t begin, std::uint64_t end);

  std::uint64_t count() const;
  bool empty() const;
  Rational measure() const;
  std::vector<std::uint64_t> cells() const;
  bool is_subset_of(const CellSet& other) const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> mutable_words() { return words_; }

  /// Lowercase hex of the bit-vector; cell 4k+j is bit j of hex digit k, so
  /// the most significant cell comes last.
  std::string hex() const;
  /// descriptor() of the geometry followed by hex().
  std::string to_string() const;

  friend bool operator==(const CellSet& a, const CellSet& b);
  /// Orders sets as binary numbers whose most significant bit is the highest cell.
  friend std::strong_ordering lex_compare(const CellSet& a, const CellSet& b);

 private:
  void check_cell(std::uint64_t cell) const;
  void clear_padding();

  GeometryPtr geometry_;
  std::vector<std::uint64_t> words_;
};

enum class SetOp { set_union, intersect, difference, complement };

/// Bitwise set algebra. `complement` ignores `rhs`; the others require it and
/// reject operands on different geometries.
CellSet set_algebra(SetOp op, const CellSet& lhs, const CellSet* rhs = nullptr);

CellSet operator|(const CellSet& a, const CellSet& b);
CellSet operator&(const CellSet& a, const CellSet& b);
CellSet operator-(const CellSet& a, const CellSet& b);
CellSet operator~(const CellSet& a);

/// Each cell included independently with probability `density`.
CellSet random_set(GeometryPtr geometry, const Rational& density, std::uint64_t seed);

}  // namespace halolab
