#include "halolab/grid.hpp"

#include <bit>
#include <stdexcept>

#include "halolab/errors.hpp"
#include "halolab/random.hpp"

namespace halolab {

namespace {

constexpr std::uint64_t word_count(std::uint64_t bits) { return (bits + 63) / 64; }

void require_same_geometry(const CellSet& a, const CellSet& b) {
  if (a.geometry_ptr() != b.geometry_ptr() && !(a.geometry() == b.geometry()))
    throw InvalidArgument("geometry", "operands live on different grids");
}

}  // namespace

GridGeometry::GridGeometry(std::vector<std::uint32_t> extent, Rational cell_width,
                           std::uint64_t cell_budget)
    : extent_(std::move(extent)), cell_width_(std::move(cell_width)) {
  if (extent_.empty() || extent_.size() > 3)
    throw InvalidArgument("extent", "dimension must be 1, 2 or 3");
  if (cell_width_.sign() <= 0) throw InvalidArgument("h", "cell width must be positive");
  unsigned __int128 total = 1;
  for (std::uint32_t n : extent_) {
    if (n == 0) throw InvalidArgument("extent", "every axis needs at least one cell");
    total *= n;
  }
  if (total > cell_budget) {
    std::uint64_t required = total > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(total);
    throw BudgetExceeded("cell", required, cell_budget);
  }
  cell_count_ = static_cast<std::uint64_t>(total);
  cell_measure_ = pow(cell_width_, static_cast<unsigned>(extent_.size()));
  for (std::size_t i = 0; i < extent_.size(); ++i) padded_[3 - extent_.size() + i] = extent_[i];
}

std::uint64_t GridGeometry::index(std::span<const std::uint32_t> coords) const {
  if (coords.size() != extent_.size()) throw std::out_of_range("cell coordinates: wrong arity");
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < extent_.size(); ++i) {
    if (coords[i] >= extent_[i]) throw std::out_of_range("cell coordinates outside the grid");
    idx = idx * extent_[i] + coords[i];
  }
  return idx;
}

std::array<std::uint32_t, 3> GridGeometry::coords(std::uint64_t index) const {
  if (index >= cell_count_) throw std::out_of_range("cell index outside the grid");
  std::array<std::uint32_t, 3> out{};
  for (std::size_t i = extent_.size(); i-- > 0;) {
    out[i] = static_cast<std::uint32_t>(index % extent_[i]);
    index /= extent_[i];
  }
  return out;
}

std::string GridGeometry::descriptor() const {
  std::string out = "n=" + std::to_string(extent_.size()) + ";extent=";
  for (std::size_t i = 0; i < extent_.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(extent_[i]);
  }
  out += ";h=" + cell_width_.num().str() + "/" + cell_width_.den().str() + ";";
  return out;
}

GeometryPtr make_geometry(std::vector<std::uint32_t> extent, Rational cell_width,
                          std::uint64_t cell_budget) {
  return std::make_shared<const GridGeometry>(std::move(extent), std::move(cell_width), cell_budget);
}

// ---------------------------------------------------------------------------

CellSet::CellSet(GeometryPtr geometry) : geometry_(std::move(geometry)) {
  if (!geometry_) throw InvalidArgument("geometry", "null geometry");
  words_.assign(word_count(geometry_->cell_count()), 0);
}

CellSet CellSet::full(GeometryPtr geometry) {
  CellSet s(std::move(geometry));
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  s.clear_padding();
  return s;
}

CellSet CellSet::from_cells(GeometryPtr geometry, std::span<const std::uint64_t> cells) {
  CellSet s(std::move(geometry));
  for (auto c : cells) s.insert(c);
  return s;
}

void CellSet::check_cell(std::uint64_t cell) const {
  if (cell >= geometry_->cell_count()) throw std::out_of_range("cell index outside the grid");
}

void CellSet::clear_padding() {
  std::uint64_t tail = geometry_->cell_count() % 64;
  if (tail != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << tail) - 1;
}

bool CellSet::contains(std::uint64_t cell) const {
  check_cell(cell);
  return (words_[cell / 64] >> (cell % 64)) & 1U;
}

void CellSet::insert(std::uint64_t cell) {
  check_cell(cell);
  words_[cell / 64] |= std::uint64_t{1} << (cell % 64);
}

void CellSet::erase(std::uint64_t cell) {
  check_cell(cell);
  words_[cell / 64] &= ~(std::uint64_t{1} << (cell % 64));
}

void CellSet::flip(std::uint64_t cell) {
  check_cell(cell);
  words_[cell / 64] ^= std::uint64_t{1} << (cell % 64);
}

void CellSet::insert_range(std::uint64_t begin, std::uint64_t end) {
  if (begin > end || end > geometry_->cell_count()) throw std::out_of_range("cell range outside the grid");
  while (begin < end) {
    std::uint64_t w = begin / 64, off = begin % 64;
    std::uint64_t span = std::min<std::uint64_t>(64 - off, end - begin);
    std::uint64_t mask = span == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << span) - 1) << off;
    words_[w] |= mask;
    begin += span;
  }
}

std::uint64_t CellSet::count() const {
  std::uint64_t n = 0;
  for (auto w : words_) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

bool CellSet::empty() const {
  for (auto w : words_)
    if (w) return false;
  return true;
}

Rational CellSet::measure() const { return Rational(static_cast<long long>(count())) * geometry_->cell_measure(); }

std::vector<std::uint64_t> CellSet::cells() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      out.push_back(w * 64 + static_cast<std::uint64_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

bool CellSet::is_subset_of(const CellSet& other) const {
  require_same_geometry(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~other.words_[i]) return false;
  return true;
}

std::string CellSet::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::uint64_t n = geometry_->cell_count();
  std::string out((n + 3) / 4, '0');
  for (std::uint64_t k = 0; k < out.size(); ++k) {
    std::uint64_t bit = 4 * k;
    unsigned nibble = static_cast<unsigned>((words_[bit / 64] >> (bit % 64)) & 0xF);
    out[k] = kDigits[nibble];
  }
  return out;
}

std::string CellSet::to_string() const { return geometry_->descriptor() + hex(); }

CellSet CellSet::from_hex(GeometryPtr geometry, std::string_view hex) {
  CellSet s(std::move(geometry));
  std::uint64_t n = s.geometry_->cell_count();
  if (hex.size() != (n + 3) / 4)
    throw InvalidArgument("set_hex", "expected " + std::to_string((n + 3) / 4) + " hex digits");
  for (std::uint64_t k = 0; k < hex.size(); ++k) {
    char ch = hex[k];
    unsigned v;
    if (ch >= '0' && ch <= '9') v = static_cast<unsigned>(ch - '0');
    else if (ch >= 'a' && ch <= 'f') v = static_cast<unsigned>(ch - 'a' + 10);
    else throw InvalidArgument("set_hex", "not a lowercase hex digit");
    std::uint64_t bit = 4 * k;
    s.words_[bit / 64] |= static_cast<std::uint64_t>(v) << (bit % 64);
  }
  std::uint64_t before = s.count();
  s.clear_padding();
  if (s.count() != before) throw InvalidArgument("set_hex", "bits set past the last cell");
  return s;
}

CellSet CellSet::parse(std::string_view text, std::uint64_t cell_budget) {
  auto field = [&](std::string_view key) -> std::string_view {
    if (text.substr(0, key.size()) != key) throw InvalidArgument("set", "expected '" + std::string(key) + "'");
    text.remove_prefix(key.size());
    auto semi = text.find(';');
    if (semi == std::string_view::npos) throw InvalidArgument("set", "missing ';'");
    auto value = text.substr(0, semi);
    text.remove_prefix(semi + 1);
    return value;
  };
  auto dims_text = field("n=");
  auto extent_text = field("extent=");
  auto h_text = field("h=");

  std::vector<std::uint32_t> extent;
  std::size_t start = 0;
  while (start <= extent_text.size()) {
    auto comma = extent_text.find(',', start);
    auto piece = extent_text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    auto value = Rational::parse(piece);
    auto n = to_u64(value.num());
    if (value.den() != 1 || !n || *n > UINT32_MAX) throw InvalidArgument("set", "bad extent");
    extent.push_back(static_cast<std::uint32_t>(*n));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (std::to_string(extent.size()) != dims_text) throw InvalidArgument("set", "dimension does not match extent");
  return from_hex(make_geometry(std::move(extent), Rational::parse(h_text), cell_budget), text);
}

bool operator==(const CellSet& a, const CellSet& b) {
  return a.geometry() == b.geometry() && a.words_ == b.words_;
}

std::strong_ordering lex_compare(const CellSet& a, const CellSet& b) {
  require_same_geometry(a, b);
  for (std::size_t i = a.words_.size(); i-- > 0;) {
    if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i] ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

CellSet set_algebra(SetOp op, const CellSet& lhs, const CellSet* rhs) {
  CellSet out = lhs;
  auto words = out.mutable_words();
  if (op == SetOp::complement) {
    for (auto& w : words) w = ~w;
    std::uint64_t tail = lhs.universe() % 64;
    if (tail != 0 && !words.empty()) words.back() &= (std::uint64_t{1} << tail) - 1;
    return out;
  }
  if (rhs == nullptr) throw InvalidArgument("rhs", "binary set operation needs two operands");
  require_same_geometry(lhs, *rhs);
  auto other = rhs->words();
  for (std::size_t i = 0; i < words.size(); ++i) {
    switch (op) {
      case SetOp::set_union: words[i] |= other[i]; break;
      case SetOp::intersect: words[i] &= other[i]; break;
      case SetOp::difference: words[i] &= ~other[i]; break;
      case SetOp::complement: break;
    }
  }
  return out;
}

CellSet operator|(const CellSet& a, const CellSet& b) { return set_algebra(SetOp::set_union, a, &b); }
CellSet operator&(const CellSet& a, const CellSet& b) { return set_algebra(SetOp::intersect, a, &b); }
CellSet operator-(const CellSet& a, const CellSet& b) { return set_algebra(SetOp::difference, a, &b); }
CellSet operator~(const CellSet& a) { return set_algebra(SetOp::complement, a); }

CellSet random_set(GeometryPtr geometry, const Rational& density, std::uint64_t seed) {
  if (density.sign() < 0 || density > Rational(1)) throw InvalidArgument("density", "must lie in [0, 1]");
  auto p = to_u64(density.num());
  auto q = to_u64(density.den());
  if (!p || !q) throw InvalidArgument("density", "denominator does not fit 64 bits");
  CellSet s(std::move(geometry));
  if (*p == 0) return s;
  if (*p == *q) return CellSet::full(s.geometry_ptr());
  std::mt19937_64 rng(seed);
  for (std::uint64_t c = 0; c < s.universe(); ++c)
    if (bounded_draw(rng, *q) < *p) s.mutable_words()[c / 64] |= std::uint64_t{1} << (c % 64);
  return s;
}

}  // namespace halolab
