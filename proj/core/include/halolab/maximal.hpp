#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "halolab/basis.hpp"
#include "halolab/grid.hpp"
#include "halolab/rational.hpp"

namespace halolab {

struct EvalOptions {
  std::uint64_t element_budget = kDefaultElementBudget;
  /// Worker threads for element-parallel kernels; 0 means one per processor.
  /// Results never depend on this value.
  unsigned workers = 1;
};

enum class Bound { strict, inclusive };

/// Summed-area table of a cell set: the count of any box in eight lookups.
class PrefixCounts {
 public:
  explicit PrefixCounts(const CellSet& set);

  std::uint64_t count(const Box& box) const;
  std::uint64_t count(const BasisElement& element) const;

 private:
  std::array<std::uint64_t, 3> dims_{};
  std::vector<std::uint32_t> table_;
  int dimension_;
};

/// Exact test of hits/size against theta, without materializing the fraction.
class Threshold {
 public:
  Threshold(const Rational& theta, Bound bound);

  bool passes(std::uint64_t hits, std::uint64_t size) const;
  const Rational& theta() const { return theta_; }
  Bound bound() const { return bound_; }

 private:
  Rational theta_;
  Bound bound_;
  bool small_ = false;
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

/// |E ∩ R| / |R|; the cell width cancels.
Rational average(const BasisElement& element, const CellSet& set);

/// Per-cell values of the maximal operator applied to an indicator set.
class MaximalField {
 public:
  const GridGeometry& geometry() const { return *geometry_; }
  const GeometryPtr& geometry_ptr() const { return geometry_; }
  std::uint64_t size() const { return num_.size(); }

  Rational value(std::uint64_t cell) const;
  std::uint64_t value_num(std::uint64_t cell) const { return num_.at(cell); }
  std::uint64_t value_den(std::uint64_t cell) const { return den_.at(cell); }
  /// False for cells that no enumerated element contains; their value is 0.
  bool covered(std::uint64_t cell) const { return covered_.contains(cell); }
  std::uint64_t uncovered_count() const { return covered_.universe() - covered_.count(); }
  /// Family descriptor and element budget the field was computed with.
  const std::string& provenance() const { return provenance_; }

  friend bool operator==(const MaximalField& a, const MaximalField& b) {
    return a.num_ == b.num_ && a.den_ == b.den_ && a.covered_ == b.covered_;
  }

 private:
  friend MaximalField maximal_field(const CellSet&, const BasisFamily&, const EvalOptions&);

  explicit MaximalField(GeometryPtr geometry)
      : geometry_(geometry), num_(geometry->cell_count(), 0), den_(geometry->cell_count(), 1), covered_(geometry) {}

  GeometryPtr geometry_;
  std::vector<std::uint32_t> num_;
  std::vector<std::uint32_t> den_;
  CellSet covered_;
  std::string provenance_;
};

MaximalField maximal_field(const CellSet& set, const BasisFamily& family, const EvalOptions& options = {});

/// Cells whose value is > theta (strict) or >= theta (inclusive).
CellSet superlevel(const MaximalField& field, const Rational& theta, Bound bound);

/// Same result as superlevel(maximal_field(...)) by marking the cells of every
/// element whose average passes theta.
CellSet superlevel_direct(const CellSet& set, const BasisFamily& family, const Rational& theta, Bound bound,
                          const EvalOptions& options = {});

}  // namespace halolab
