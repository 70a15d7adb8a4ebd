#include "halolab/basis.hpp"

#include <algorithm>
#include <limits>

#include "halolab/errors.hpp"

namespace halolab {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  return p > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                        : static_cast<std::uint64_t>(p);
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

std::vector<std::uint32_t> sorted_unique(std::vector<std::uint32_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::uint32_t per_axis(const std::vector<std::uint32_t>& values, int axis, std::uint32_t fallback,
                       const char* field) {
  if (values.empty()) return fallback;
  if (values.size() == 1) return values[0];
  if (axis >= static_cast<int>(values.size()))
    throw InvalidArgument(field, "needs one value or one per axis");
  return values[static_cast<std::size_t>(axis)];
}

void append_list(std::string& out, const std::vector<std::uint32_t>& v) {
  out.push_back('[');
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(v[i]);
  }
  out.push_back(']');
}

std::vector<Box> normalized(std::vector<Box> boxes, const GridGeometry& geometry, const char* field) {
  if (boxes.empty()) throw InvalidArgument(field, "an element needs at least one box");
  for (const auto& b : boxes) {
    if (b.dims != geometry.dimension()) throw InvalidArgument(field, "box dimension does not match the grid");
    for (int a = 0; a < b.dims; ++a)
      if (b.lo[static_cast<std::size_t>(a)] >= b.hi[static_cast<std::size_t>(a)])
        throw InvalidArgument(field, "box ranges must satisfy lo < hi");
    if (!b.fits(geometry)) throw InvalidArgument(field, "element extends past the grid");
  }
  std::sort(boxes.begin(), boxes.end());
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j)
      if (boxes[i].intersects(boxes[j])) throw InvalidArgument(field, "boxes of one element must be disjoint");
  return boxes;
}

}  // namespace

// ---------------------------------------------------------------------------

Box Box::interval(std::uint32_t lo, std::uint32_t hi) {
  Box b;
  b.dims = 1;
  b.lo[0] = lo;
  b.hi[0] = hi;
  return b;
}

Box Box::make(std::span<const std::uint32_t> lo, std::span<const std::uint32_t> hi) {
  if (lo.size() != hi.size() || lo.empty() || lo.size() > 3)
    throw InvalidArgument("box", "lo and hi need the same arity in 1..3");
  Box b;
  b.dims = static_cast<std::uint8_t>(lo.size());
  std::copy(lo.begin(), lo.end(), b.lo.begin());
  std::copy(hi.begin(), hi.end(), b.hi.begin());
  return b;
}

std::uint64_t Box::cell_count() const {
  std::uint64_t n = 1;
  for (int a = 0; a < dims; ++a) {
    auto i = static_cast<std::size_t>(a);
    n *= hi[i] > lo[i] ? hi[i] - lo[i] : 0;
  }
  return n;
}

bool Box::contains(const std::array<std::uint32_t, 3>& coords) const {
  for (int a = 0; a < dims; ++a) {
    auto i = static_cast<std::size_t>(a);
    if (coords[i] < lo[i] || coords[i] >= hi[i]) return false;
  }
  return true;
}

bool Box::intersects(const Box& other) const {
  for (int a = 0; a < dims; ++a) {
    auto i = static_cast<std::size_t>(a);
    if (hi[i] <= other.lo[i] || other.hi[i] <= lo[i]) return false;
  }
  return true;
}

bool Box::fits(const GridGeometry& geometry) const {
  if (dims != geometry.dimension()) return false;
  for (int a = 0; a < dims; ++a)
    if (hi[static_cast<std::size_t>(a)] > geometry.extent(a)) return false;
  return true;
}

std::uint64_t BasisElement::cell_count() const {
  std::uint64_t n = 0;
  for (const auto& b : boxes) n += b.cell_count();
  return n;
}

bool BasisElement::contains_cell(const GridGeometry& geometry, std::uint64_t cell) const {
  auto c = geometry.coords(cell);
  return std::any_of(boxes.begin(), boxes.end(), [&](const Box& b) { return b.contains(c); });
}

CellSet BasisElement::cells(const GeometryPtr& geometry) const {
  CellSet s(geometry);
  for (const auto& b : boxes) for_each_row(*geometry, b, [&](std::uint64_t lo, std::uint64_t hi) { s.insert_range(lo, hi); });
  return s;
}

// ---------------------------------------------------------------------------

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::intervals: return "intervals";
    case FamilyKind::cubes: return "cubes";
    case FamilyKind::axis_rects: return "axis_rects";
    case FamilyKind::jump_example: return "jump_example";
    case FamilyKind::explicit_list: return "explicit";
  }
  return "?";
}

FamilyKind parse_family_kind(std::string_view text) {
  for (auto k : {FamilyKind::intervals, FamilyKind::cubes, FamilyKind::axis_rects, FamilyKind::jump_example,
                 FamilyKind::explicit_list})
    if (to_string(k) == text) return k;
  throw InvalidArgument("family.kind", "unknown family kind '" + std::string(text) + "'");
}

BasisFamily BasisFamily::intervals(std::uint32_t min_len, std::uint32_t max_len) {
  BasisFamily f;
  f.kind = FamilyKind::intervals;
  f.scale_min = {min_len};
  f.scale_max = {max_len};
  return f;
}

BasisFamily BasisFamily::cubes(std::uint32_t min_side, std::uint32_t max_side) {
  BasisFamily f = intervals(min_side, max_side);
  f.kind = FamilyKind::cubes;
  return f;
}

BasisFamily BasisFamily::axis_rects(std::vector<std::uint32_t> min_sides, std::vector<std::uint32_t> max_sides) {
  BasisFamily f;
  f.kind = FamilyKind::axis_rects;
  f.scale_min = std::move(min_sides);
  f.scale_max = std::move(max_sides);
  return f;
}

BasisFamily BasisFamily::jump_example(JumpParams params) {
  BasisFamily f;
  f.kind = FamilyKind::jump_example;
  f.jump = std::move(params);
  return f;
}

BasisFamily BasisFamily::explicit_list(std::vector<std::vector<Box>> elements) {
  BasisFamily f;
  f.kind = FamilyKind::explicit_list;
  f.explicit_elements = std::move(elements);
  return f;
}

std::string BasisFamily::descriptor() const {
  std::string out = "{\"kind\":\"" + std::string(to_string(kind)) + "\"";
  switch (kind) {
    case FamilyKind::intervals:
    case FamilyKind::cubes:
    case FamilyKind::axis_rects:
      out += ",\"scale_min\":";
      append_list(out, scale_min);
      out += ",\"scale_max\":";
      append_list(out, scale_max);
      break;
    case FamilyKind::jump_example:
      out += ",\"jump\":{\"scales\":";
      append_list(out, jump.scales);
      out += ",\"gaps\":";
      append_list(out, jump.gaps);
      out += ",\"stride\":" + std::to_string(jump.stride) + "}";
      break;
    case FamilyKind::explicit_list:
      out += ",\"explicit\":" + std::to_string(explicit_elements.size());
      break;
  }
  out += "}";
  return out;
}

// ---------------------------------------------------------------------------

BasisElement rasterize_element(const ElementSpec& spec, const GridGeometry& geometry, std::uint64_t id) {
  BasisElement e;
  e.id = id;
  if (const auto* iv = std::get_if<IntervalSpec>(&spec)) {
    if (geometry.dimension() != 1) throw InvalidArgument("element", "intervals need a 1D grid");
    e.boxes = normalized({Box::interval(iv->lo, iv->hi)}, geometry, "element");
  } else if (const auto* box = std::get_if<Box>(&spec)) {
    e.boxes = normalized({*box}, geometry, "element");
  } else if (const auto* js = std::get_if<JumpSpec>(&spec)) {
    if (geometry.dimension() != 1) throw InvalidArgument("element", "jump elements need a 1D grid");
    if (js->gap == 0 || js->gap >= js->scale) throw InvalidArgument("element.gap", "need 1 <= gap < scale");
    if (js->offset > 2 * js->scale - js->gap)
      throw InvalidArgument("element.offset", "need offset <= 2*scale - gap");
    std::uint64_t t = js->translate, s = js->scale, x = js->offset, g = js->gap;
    std::uint64_t end = std::max(t + s, t + x + g);
    if (end > geometry.extent(0)) throw InvalidArgument("element", "element extends past the grid");
    auto u32 = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    if (x <= s) {
      e.boxes = {Box::interval(u32(t), u32(end))};
    } else {
      e.boxes = {Box::interval(u32(t), u32(t + s)), Box::interval(u32(t + x), u32(t + x + g))};
    }
  } else {
    e.boxes = normalized(std::get<std::vector<Box>>(spec), geometry, "element");
  }
  return e;
}

// ---------------------------------------------------------------------------

ElementCursor::ElementCursor(const BasisFamily& family, const GridGeometry& geometry)
    : family_(&family), geometry_(&geometry), dims_(geometry.dimension()) {
  switch (family.kind) {
    case FamilyKind::intervals:
    case FamilyKind::cubes:
    case FamilyKind::axis_rects: {
      if (family.kind == FamilyKind::intervals && dims_ != 1)
        throw InvalidArgument("family.kind", "intervals need a 1D grid");
      if (family.kind != FamilyKind::axis_rects && (family.scale_min.size() > 1 || family.scale_max.size() > 1))
        throw InvalidArgument("family.scale_min", "intervals and cubes take a single scale bound");
      for (int a = 0; a < dims_; ++a) {
        auto i = static_cast<std::size_t>(a);
        std::uint32_t lo = per_axis(family.scale_min, a, 1, "family.scale_min");
        std::uint32_t hi = per_axis(family.scale_max, a, 0, "family.scale_max");
        if (lo == 0) throw InvalidArgument("family.scale_min", "side lengths start at 1");
        if (hi != 0 && hi < lo) throw InvalidArgument("family.scale_max", "must be >= scale_min");
        std::uint32_t cap = geometry.extent(a);
        if (family.kind == FamilyKind::cubes)
          for (int b = 0; b < dims_; ++b) cap = std::min(cap, geometry.extent(b));
        min_[i] = lo;
        max_[i] = hi == 0 ? cap : std::min(hi, cap);
      }
      break;
    }
    case FamilyKind::jump_example: {
      if (dims_ != 1) throw InvalidArgument("family.kind", "the jump family needs a 1D grid");
      const auto& jp = family.jump;
      if (jp.scales.empty()) throw InvalidArgument("family.jump.scales", "need at least one scale");
      if (jp.gaps.empty()) throw InvalidArgument("family.jump.gaps", "need at least one gap");
      if (jp.stride == 0) throw InvalidArgument("family.jump.stride", "must be >= 1");
      auto scales = sorted_unique(jp.scales);
      auto gaps = sorted_unique(jp.gaps);
      const std::uint64_t n = geometry.extent(0);
      for (std::uint32_t s : scales) {
        for (std::uint32_t g : gaps)
          if (g == 0 || g >= s) throw InvalidArgument("family.jump.gaps", "need 1 <= gap < scale for every scale");
        auto push = [&](std::uint32_t first, std::uint32_t off, std::uint32_t len) {
          std::uint64_t span = len ? std::uint64_t{off} + len : first;
          if (span <= n) jump_shapes_.push_back({first, off, len});
        };
        push(s, 0, 0);
        for (std::uint32_t len = s + 1; len <= s + gaps.back(); ++len) push(len, 0, 0);
        for (std::uint32_t g : gaps)
          for (std::uint32_t x = s + 1; x <= 2 * s - g; ++x) push(s, x, g);
      }
      break;
    }
    case FamilyKind::explicit_list: {
      for (const auto& boxes : family.explicit_elements) (void)normalized(boxes, geometry, "family.explicit");
      break;
    }
  }

  if (family.kind == FamilyKind::axis_rects) {
    std::uint64_t total = 1;
    for (int a = 0; a < dims_; ++a) {
      auto i = static_cast<std::size_t>(a);
      std::uint64_t sum = 0;
      std::uint64_t n = geometry.extent(a);
      for (std::uint64_t s = min_[i]; s <= max_[i]; ++s) sum += n - s + 1;
      total = saturating_mul(total, sum);
    }
    total_ = total;
  } else {
    std::uint64_t total = 0;
    for (std::uint64_t i = 0, n = shape_total(); i < n; ++i) total = saturating_add(total, shape_count(i));
    total_ = total;
  }
}

std::uint64_t ElementCursor::shape_total() const {
  switch (family_->kind) {
    case FamilyKind::intervals:
    case FamilyKind::cubes:
      return max_[0] >= min_[0] ? max_[0] - min_[0] + 1 : 0;
    case FamilyKind::axis_rects: {
      std::uint64_t n = 1;
      for (int a = 0; a < dims_; ++a) {
        auto i = static_cast<std::size_t>(a);
        if (max_[i] < min_[i]) return 0;
        n = saturating_mul(n, max_[i] - min_[i] + 1);
      }
      return n;
    }
    case FamilyKind::jump_example:
      return jump_shapes_.size();
    case FamilyKind::explicit_list:
      return family_->explicit_elements.size();
  }
  return 0;
}

std::uint64_t ElementCursor::shape_count(std::uint64_t index) const {
  switch (family_->kind) {
    case FamilyKind::intervals:
      return geometry_->extent(0) - (min_[0] + index) + 1;
    case FamilyKind::cubes: {
      std::uint64_t side = min_[0] + index, n = 1;
      for (int a = 0; a < dims_; ++a) n *= geometry_->extent(a) - side + 1;
      return n;
    }
    case FamilyKind::axis_rects: {
      std::uint64_t n = 1;
      for (int a = dims_; a-- > 0;) {
        auto i = static_cast<std::size_t>(a);
        std::uint64_t radix = max_[i] - min_[i] + 1;
        std::uint64_t side = min_[i] + index % radix;
        index /= radix;
        n *= geometry_->extent(a) - side + 1;
      }
      return n;
    }
    case FamilyKind::jump_example: {
      const auto& js = jump_shapes_[index];
      std::uint64_t span = js.second_len ? std::uint64_t{js.second_off} + js.second_len : js.first_len;
      return (geometry_->extent(0) - span) / family_->jump.stride + 1;
    }
    case FamilyKind::explicit_list:
      return 1;
  }
  return 0;
}

void ElementCursor::finish_shape(Shape& shape) const {
  shape.span = {0, 0, 0};
  for (const auto& b : shape.boxes)
    for (int a = 0; a < dims_; ++a) {
      auto i = static_cast<std::size_t>(a);
      shape.span[i] = std::max(shape.span[i], b.hi[i]);
    }
  shape.count = 1;
  for (int a = 0; a < dims_; ++a) {
    auto i = static_cast<std::size_t>(a);
    shape.positions[i] = (geometry_->extent(a) - shape.span[i]) / shape.stride + 1;
    shape.count *= shape.positions[i];
  }
}

void ElementCursor::load_shape(std::uint64_t index) {
  Shape& sh = shape_;
  sh.boxes.clear();
  sh.stride = 1;
  switch (family_->kind) {
    case FamilyKind::intervals:
      sh.boxes.push_back(Box::interval(0, static_cast<std::uint32_t>(min_[0] + index)));
      break;
    case FamilyKind::cubes: {
      Box b;
      b.dims = static_cast<std::uint8_t>(dims_);
      for (int a = 0; a < dims_; ++a) b.hi[static_cast<std::size_t>(a)] = static_cast<std::uint32_t>(min_[0] + index);
      sh.boxes.push_back(b);
      break;
    }
    case FamilyKind::axis_rects: {
      Box b;
      b.dims = static_cast<std::uint8_t>(dims_);
      for (int a = dims_; a-- > 0;) {
        auto i = static_cast<std::size_t>(a);
        std::uint64_t radix = max_[i] - min_[i] + 1;
        b.hi[i] = static_cast<std::uint32_t>(min_[i] + index % radix);
        index /= radix;
      }
      sh.boxes.push_back(b);
      break;
    }
    case FamilyKind::jump_example: {
      const auto& js = jump_shapes_[index];
      sh.boxes.push_back(Box::interval(0, js.first_len));
      if (js.second_len) sh.boxes.push_back(Box::interval(js.second_off, js.second_off + js.second_len));
      sh.stride = family_->jump.stride;
      break;
    }
    case FamilyKind::explicit_list: {
      sh.boxes = family_->explicit_elements[index];
      std::sort(sh.boxes.begin(), sh.boxes.end());
      // Explicit elements are placed as given: a single "translation" by zero.
      sh.count = 1;
      sh.positions = {1, 1, 1};
      sh.span = {0, 0, 0};
      loaded_ = true;
      return;
    }
  }
  finish_shape(sh);
  loaded_ = true;
}

void ElementCursor::seek(std::uint64_t id) {
  shape_index_ = 0;
  position_ = 0;
  loaded_ = false;
  next_id_ = id;
  std::uint64_t remaining = id;
  const std::uint64_t shapes = shape_total();
  while (shape_index_ < shapes) {
    std::uint64_t c = shape_count(shape_index_);
    if (remaining < c) break;
    remaining -= c;
    ++shape_index_;
  }
  position_ = remaining;
}

bool ElementCursor::next() {
  const std::uint64_t shapes = shape_total();
  while (shape_index_ < shapes) {
    if (!loaded_) load_shape(shape_index_);
    if (position_ < shape_.count) break;
    ++shape_index_;
    position_ = 0;
    loaded_ = false;
  }
  if (shape_index_ >= shapes) return false;

  std::array<std::uint32_t, 3> offset{0, 0, 0};
  std::uint64_t p = position_;
  for (int a = dims_; a-- > 0;) {
    auto i = static_cast<std::size_t>(a);
    offset[i] = static_cast<std::uint32_t>((p % shape_.positions[i]) * shape_.stride);
    p /= shape_.positions[i];
  }
  current_.id = next_id_;
  current_.boxes.resize(shape_.boxes.size());
  for (std::size_t k = 0; k < shape_.boxes.size(); ++k) {
    Box b = shape_.boxes[k];
    for (int a = 0; a < dims_; ++a) {
      auto i = static_cast<std::size_t>(a);
      b.lo[i] += offset[i];
      b.hi[i] += offset[i];
    }
    current_.boxes[k] = b;
  }
  ++position_;
  ++next_id_;
  return true;
}

// ---------------------------------------------------------------------------

std::uint64_t count_elements(const BasisFamily& family, const GridGeometry& geometry) {
  return ElementCursor(family, geometry).total();
}

std::uint64_t require_element_budget(const BasisFamily& family, const GridGeometry& geometry,
                                     std::uint64_t budget) {
  if (budget == 0) throw InvalidArgument("budget", "element budget must be positive");
  std::uint64_t n = count_elements(family, geometry);
  if (n > budget) throw BudgetExceeded("element", n, budget);
  return n;
}

std::vector<BasisElement> enumerate_elements(const BasisFamily& family, const GridGeometry& geometry,
                                             std::uint64_t budget) {
  require_element_budget(family, geometry, budget);
  ElementCursor cursor(family, geometry);
  std::vector<BasisElement> out;
  out.reserve(cursor.total());
  while (cursor.next()) out.push_back(cursor.current());
  return out;
}

std::vector<BasisElement> elements_through(const BasisFamily& family, const GridGeometry& geometry,
                                           std::uint64_t cell, std::uint64_t budget) {
  auto coords = geometry.coords(cell);
  require_element_budget(family, geometry, budget);
  ElementCursor cursor(family, geometry);
  std::vector<BasisElement> out;
  while (cursor.next()) {
    const auto& e = cursor.current();
    if (std::any_of(e.boxes.begin(), e.boxes.end(), [&](const Box& b) { return b.contains(coords); }))
      out.push_back(e);
  }
  return out;
}

}  // namespace halolab
