#include "halolab/maximal.hpp"

#include <algorithm>
#include <numeric>

#include "halolab/errors.hpp"
#include "parallel.hpp"

namespace halolab {

namespace {

using u128 = unsigned __int128;

void require_addressable(const GridGeometry& geometry) {
  if (geometry.cell_count() >= (std::uint64_t{1} << 32))
    throw InvalidArgument("extent", "maximal kernels address at most 2^32 - 1 cells");
}

struct Record {
  std::uint64_t hits;
  std::uint64_t size;
  std::uint64_t first_box;
  std::uint32_t box_count;
};

// a/b > c/d with all operands below 2^64.
bool greater(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return static_cast<u128>(a) * d > static_cast<u128>(c) * b;
}

}  // namespace

// ---------------------------------------------------------------------------

PrefixCounts::PrefixCounts(const CellSet& set) : dimension_(set.geometry().dimension()) {
  const auto& ext = set.geometry().padded_extent();
  for (int a = 0; a < 3; ++a) dims_[static_cast<std::size_t>(a)] = ext[static_cast<std::size_t>(a)] + 1;
  table_.assign(dims_[0] * dims_[1] * dims_[2], 0);
  auto at = [&](std::uint64_t i, std::uint64_t j, std::uint64_t k) -> std::uint32_t& {
    return table_[(i * dims_[1] + j) * dims_[2] + k];
  };
  auto words = set.words();
  std::uint64_t cell = 0;
  for (std::uint64_t i = 1; i < dims_[0]; ++i)
    for (std::uint64_t j = 1; j < dims_[1]; ++j)
      for (std::uint64_t k = 1; k < dims_[2]; ++k, ++cell) {
        std::uint32_t bit = static_cast<std::uint32_t>((words[cell / 64] >> (cell % 64)) & 1U);
        at(i, j, k) = bit + at(i - 1, j, k) + at(i, j - 1, k) + at(i, j, k - 1) - at(i - 1, j - 1, k) -
                      at(i - 1, j, k - 1) - at(i, j - 1, k - 1) + at(i - 1, j - 1, k - 1);
      }
}

std::uint64_t PrefixCounts::count(const Box& box) const {
  std::array<std::uint64_t, 3> lo{0, 0, 0}, hi{1, 1, 1};
  for (int a = 0; a < box.dims; ++a) {
    auto p = static_cast<std::size_t>(3 - dimension_ + a);
    lo[p] = box.lo[static_cast<std::size_t>(a)];
    hi[p] = box.hi[static_cast<std::size_t>(a)];
  }
  auto at = [&](std::uint64_t i, std::uint64_t j, std::uint64_t k) -> std::int64_t {
    return table_[(i * dims_[1] + j) * dims_[2] + k];
  };
  std::int64_t v = at(hi[0], hi[1], hi[2]) - at(lo[0], hi[1], hi[2]) - at(hi[0], lo[1], hi[2]) -
                   at(hi[0], hi[1], lo[2]) + at(lo[0], lo[1], hi[2]) + at(lo[0], hi[1], lo[2]) +
                   at(hi[0], lo[1], lo[2]) - at(lo[0], lo[1], lo[2]);
  return static_cast<std::uint64_t>(v);
}

std::uint64_t PrefixCounts::count(const BasisElement& element) const {
  std::uint64_t n = 0;
  for (const auto& b : element.boxes) n += count(b);
  return n;
}

// ---------------------------------------------------------------------------

Threshold::Threshold(const Rational& theta, Bound bound) : theta_(theta), bound_(bound) {
  auto n = to_u64(theta.num());
  auto d = to_u64(theta.den());
  if (n && d && *d < (std::uint64_t{1} << 63)) {
    small_ = true;
    num_ = *n;
    den_ = *d;
  }
}

bool Threshold::passes(std::uint64_t hits, std::uint64_t size) const {
  if (theta_.sign() < 0) return true;
  if (small_) {
    u128 lhs = static_cast<u128>(hits) * den_;
    u128 rhs = static_cast<u128>(num_) * size;
    return bound_ == Bound::strict ? lhs > rhs : lhs >= rhs;
  }
  BigInt lhs = BigInt(hits) * theta_.den();
  BigInt rhs = theta_.num() * BigInt(size);
  return bound_ == Bound::strict ? lhs > rhs : lhs >= rhs;
}

Rational average(const BasisElement& element, const CellSet& set) {
  std::uint64_t hits = 0;
  for (const auto& b : element.boxes) {
    if (!b.fits(set.geometry())) throw InvalidArgument("element", "element does not fit the set's grid");
    for_each_row(set.geometry(), b, [&](std::uint64_t lo, std::uint64_t hi) {
      for (std::uint64_t c = lo; c < hi; ++c) hits += set.contains(c) ? 1 : 0;
    });
  }
  std::uint64_t size = element.cell_count();
  if (size == 0) throw InvalidArgument("element", "element has no cells");
  return Rational(BigInt(hits), BigInt(size));
}

// ---------------------------------------------------------------------------

Rational MaximalField::value(std::uint64_t cell) const { return Rational(BigInt(num_.at(cell)), BigInt(den_.at(cell))); }

MaximalField maximal_field(const CellSet& set, const BasisFamily& family, const EvalOptions& options) {
  const auto& geometry = set.geometry();
  require_addressable(geometry);
  const std::uint64_t total = require_element_budget(family, geometry, options.element_budget);
  const PrefixCounts prefix(set);
  const unsigned workers = detail::resolve_workers(options.workers, total);
  const std::uint64_t cells = geometry.cell_count();

  struct Partial {
    std::vector<std::uint32_t> num, den;
    std::vector<std::uint8_t> painted;
  };
  std::vector<Partial> partials(workers);

  detail::parallel_slices(workers, total, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
    std::vector<Record> records;
    std::vector<Box> boxes;
    records.reserve(end - begin);
    ElementCursor cursor(family, geometry);
    cursor.seek(begin);
    for (std::uint64_t id = begin; id < end && cursor.next(); ++id) {
      const auto& e = cursor.current();
      records.push_back({prefix.count(e), e.cell_count(), boxes.size(), static_cast<std::uint32_t>(e.boxes.size())});
      boxes.insert(boxes.end(), e.boxes.begin(), e.boxes.end());
    }
    std::stable_sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
      return greater(a.hits, a.size, b.hits, b.size);
    });

    // Highest averages paint first, so the first value a cell receives is its maximum.
    Partial& part = partials[w];
    part.num.assign(cells, 0);
    part.den.assign(cells, 1);
    part.painted.assign(cells, 0);
    detail::NextUnmarked next(cells);
    for (const auto& r : records) {
      std::uint64_t g = std::gcd(r.hits, r.size);
      auto num = static_cast<std::uint32_t>(r.hits / g);
      auto den = static_cast<std::uint32_t>(r.size / g);
      for (std::uint32_t k = 0; k < r.box_count; ++k)
        for_each_row(geometry, boxes[r.first_box + k], [&](std::uint64_t lo, std::uint64_t hi) {
          next.mark_range(lo, hi, [&](std::uint64_t c) {
            part.num[c] = num;
            part.den[c] = den;
            part.painted[c] = 1;
          });
        });
    }
  });

  MaximalField field(set.geometry_ptr());
  for (std::uint64_t c = 0; c < cells; ++c) {
    bool any = false;
    std::uint32_t num = 0, den = 1;
    for (const auto& part : partials) {
      if (part.painted.empty() || !part.painted[c]) continue;
      if (!any || greater(part.num[c], part.den[c], num, den)) {
        num = part.num[c];
        den = part.den[c];
      }
      any = true;
    }
    field.num_[c] = num;
    field.den_[c] = den;
    if (any) field.covered_.insert(c);
  }
  field.provenance_ = family.descriptor() + ";element_budget=" + std::to_string(options.element_budget);
  return field;
}

CellSet superlevel(const MaximalField& field, const Rational& theta, Bound bound) {
  if (theta.sign() < 0 || theta > Rational(1)) throw InvalidArgument("theta", "must lie in [0, 1]");
  const Threshold test(theta, bound);
  CellSet out(field.geometry_ptr());
  for (std::uint64_t c = 0; c < field.size(); ++c)
    if (test.passes(field.value_num(c), field.value_den(c))) out.insert(c);
  return out;
}

CellSet superlevel_direct(const CellSet& set, const BasisFamily& family, const Rational& theta, Bound bound,
                          const EvalOptions& options) {
  if (theta.sign() < 0 || theta > Rational(1)) throw InvalidArgument("theta", "must lie in [0, 1]");
  const auto& geometry = set.geometry();
  require_addressable(geometry);
  const std::uint64_t total = require_element_budget(family, geometry, options.element_budget);
  // Every cell, covered or not, has value >= 0.
  if (theta.is_zero() && bound == Bound::inclusive) return CellSet::full(set.geometry_ptr());

  const PrefixCounts prefix(set);
  const Threshold test(theta, bound);
  const unsigned workers = detail::resolve_workers(options.workers, total);
  std::vector<CellSet> marks(workers, CellSet(set.geometry_ptr()));

  detail::parallel_slices(workers, total, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
    CellSet& mark = marks[w];
    auto words = mark.mutable_words();
    detail::NextUnmarked next(geometry.cell_count());
    ElementCursor cursor(family, geometry);
    cursor.seek(begin);
    for (std::uint64_t id = begin; id < end && cursor.next(); ++id) {
      const auto& e = cursor.current();
      if (!test.passes(prefix.count(e), e.cell_count())) continue;
      for (const auto& b : e.boxes)
        for_each_row(geometry, b, [&](std::uint64_t lo, std::uint64_t hi) {
          next.mark_range(lo, hi, [&](std::uint64_t c) { words[c / 64] |= std::uint64_t{1} << (c % 64); });
        });
    }
  });

  CellSet out = std::move(marks[0]);
  for (unsigned w = 1; w < workers; ++w) out = out | marks[w];
  return out;
}

}  // namespace halolab
