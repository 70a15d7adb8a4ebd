#pragma once

// Reference implementations written straight from the definitions: plain
// vectors of cell indices, no prefix sums, no shared code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace oracle {

struct Frac {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

inline int cmp(const Frac& a, const Frac& b) {
  __int128 l = static_cast<__int128>(a.num) * b.den, r = static_cast<__int128>(b.num) * a.den;
  return l < r ? -1 : (l > r ? 1 : 0);
}

inline std::int64_t gcd(std::int64_t a, std::int64_t b) {
  while (b) {
    auto t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

inline Frac reduce(Frac f) {
  auto g = gcd(f.num, f.den);
  if (g > 1) {
    f.num /= g;
    f.den /= g;
  }
  return f;
}

using Element = std::vector<std::size_t>;  // sorted cell indices
using Cells = std::vector<bool>;

/// Every box with side in [lo_side, hi_side] on each axis of a row-major grid (last axis fastest).
inline std::vector<Element> boxes(const std::vector<std::size_t>& extent, const std::vector<std::size_t>& min_side,
                                  const std::vector<std::size_t>& max_side) {
  std::vector<Element> out;
  const std::size_t n = extent.size();
  std::vector<std::size_t> lo(n), len(n);
  // Odometer over (lo, len) pairs for every axis.
  std::function<void(std::size_t)> rec = [&](std::size_t axis) {
    if (axis == n) {
      Element e;
      std::vector<std::size_t> at(lo);
      std::function<void(std::size_t)> fill = [&](std::size_t a) {
        if (a == n) {
          std::size_t idx = 0;
          for (std::size_t k = 0; k < n; ++k) idx = idx * extent[k] + at[k];
          e.push_back(idx);
          return;
        }
        for (at[a] = lo[a]; at[a] < lo[a] + len[a]; ++at[a]) fill(a + 1);
      };
      fill(0);
      std::sort(e.begin(), e.end());
      out.push_back(std::move(e));
      return;
    }
    for (len[axis] = min_side[axis]; len[axis] <= std::min(max_side[axis], extent[axis]); ++len[axis])
      for (lo[axis] = 0; lo[axis] + len[axis] <= extent[axis]; ++lo[axis]) rec(axis + 1);
  };
  rec(0);
  return out;
}

inline std::vector<Element> intervals(std::size_t n, std::size_t min_len = 1, std::size_t max_len = 0) {
  return boxes({n}, {min_len}, {max_len ? max_len : n});
}

/// Translates of [0, s) ∪ [x, x + e) for every x in [0, 2s - e], deduplicated as
/// cell sets, kept only when they lie inside [0, n).
inline std::vector<Element> jump_family(std::size_t n, const std::vector<std::size_t>& scales,
                                        const std::vector<std::size_t>& gaps) {
  std::set<Element> shapes;
  for (auto s : scales) {
    shapes.insert([&] {
      Element e;
      for (std::size_t c = 0; c < s; ++c) e.push_back(c);
      return e;
    }());
    for (auto e : gaps) {
      if (e == 0 || e >= s) continue;
      for (std::size_t x = 0; x + e <= 2 * s; ++x) {
        std::set<std::size_t> cells;
        for (std::size_t c = 0; c < s; ++c) cells.insert(c);
        for (std::size_t c = x; c < x + e; ++c) cells.insert(c);
        shapes.insert(Element(cells.begin(), cells.end()));
      }
    }
  }
  std::set<Element> out;
  for (const auto& shape : shapes) {
    std::size_t last = shape.back();
    for (std::size_t t = 0; t + last < n; ++t) {
      Element e;
      for (auto c : shape) e.push_back(c + t);
      out.insert(std::move(e));
    }
  }
  return {out.begin(), out.end()};
}

inline Frac average(const Element& e, const Cells& set) {
  std::int64_t hits = 0;
  for (auto c : e) hits += set[c] ? 1 : 0;
  return reduce({hits, static_cast<std::int64_t>(e.size())});
}

/// Per-cell max average over elements through the cell; 0 where none pass through.
inline std::vector<Frac> maximal(const Cells& set, const std::vector<Element>& family) {
  std::vector<Frac> out(set.size(), Frac{0, 1});
  for (const auto& e : family) {
    Frac a = average(e, set);
    for (auto c : e)
      if (cmp(a, out[c]) > 0) out[c] = a;
  }
  return out;
}

inline Cells superlevel(const std::vector<Frac>& values, Frac theta, bool strict) {
  Cells out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    int c = cmp(values[i], theta);
    out[i] = strict ? c > 0 : c >= 0;
  }
  return out;
}

inline std::size_t count(const Cells& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), true)); }

inline Cells from_mask(std::uint64_t mask, std::size_t n) {
  Cells s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (mask >> i) & 1;
  return s;
}

/// |{M χ_E > 1/u}| / |E|, u = u_num / u_den.
inline Frac halo_ratio(const Cells& set, const std::vector<Element>& family, Frac u) {
  auto level = superlevel(maximal(set, family), Frac{u.den, u.num}, true);
  return reduce({static_cast<std::int64_t>(count(level)), static_cast<std::int64_t>(count(set))});
}

struct HaloMax {
  Frac ratio;
  std::uint64_t mask = 0;  ///< bit i = cell i; the smallest mask wins ties
};

/// Maximum over every nonempty subset, counting masks upward.
inline HaloMax exhaustive_halo(std::size_t n, const std::vector<Element>& family, Frac u) {
  HaloMax best{{-1, 1}, 0};
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    Frac r = halo_ratio(from_mask(mask, n), family, u);
    if (cmp(r, best.ratio) > 0) best = {r, mask};
  }
  return best;
}

/// H^j = {M χ_{H^{j-1}} >= gamma}.
inline std::vector<Cells> orbit(const Cells& set, const std::vector<Element>& family, Frac gamma, std::size_t k) {
  std::vector<Cells> out{set};
  for (std::size_t j = 0; j < k; ++j) out.push_back(superlevel(maximal(out.back(), family), gamma, false));
  return out;
}

/// ceil(log(g/a)/log(1/g)) * ceil(2 + max(log(g 2^n), 0)/log(1/g)) + 1, in long double.
inline std::uint64_t k_alpha_gamma(long double alpha, long double gamma, int n) {
  long double base = std::log(1.0L / gamma);
  long double rounds = std::ceil(std::log(gamma / alpha) / base - 1e-12L);
  long double spread = std::max(std::log(gamma * std::pow(2.0L, n)), 0.0L);
  long double per = std::ceil(2.0L + spread / base - 1e-12L);
  return static_cast<std::uint64_t>(rounds * per) + 1;
}

}  // namespace oracle
