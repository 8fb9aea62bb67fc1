#pragma once

#include "tailgame/errors.hpp"
#include "tailgame/rational.hpp"

#include <utility>
#include <vector>

namespace tailgame {

// Dense square system over the rationals, row-major.
struct LinearSystem {
  std::size_t n = 0;
  std::vector<Rational> a;  // n * n
  std::vector<Rational> b;  // n

  explicit LinearSystem(std::size_t size) : n(size), a(size * size), b(size) {}

  Rational& at(std::size_t r, std::size_t c) { return a[r * n + c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

// Gauss-Jordan elimination in exact arithmetic; any nonzero pivot is fine
// since there is no rounding. Throws InternalError on a singular matrix.
inline std::vector<Rational> solve(LinearSystem sys) {
  const std::size_t n = sys.n;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sys.at(pivot, col) == 0) ++pivot;
    if (pivot == n) throw InternalError("singular linear system");
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c) std::swap(sys.at(pivot, c), sys.at(col, c));
      std::swap(sys.b[pivot], sys.b[col]);
    }
    const Rational inv = 1 / sys.at(col, col);
    for (std::size_t c = col; c < n; ++c) sys.at(col, c) *= inv;
    sys.b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sys.at(r, col) == 0) continue;
      const Rational f = sys.at(r, col);
      for (std::size_t c = col; c < n; ++c) {
        if (sys.at(col, c) != 0) sys.at(r, c) -= f * sys.at(col, c);
      }
      sys.b[r] -= f * sys.b[col];
    }
  }
  return std::move(sys.b);
}

}  // namespace tailgame
