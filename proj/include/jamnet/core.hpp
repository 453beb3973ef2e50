// core.hpp -- small shared value types: 2-d points and flat row-major matrices.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace jamnet {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Row-major dense matrix. Kept deliberately minimal: the model works with
// N x M tables of link quantities, nothing more.
template <typename T>
struct Table {
  int rows = 0;
  int cols = 0;
  std::vector<T> data;

  Table() = default;
  Table(int r, int c, T fill = T{}) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {
    if (r < 0 || c < 0) throw std::invalid_argument("Table: negative dimension");
  }

  T& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  const T& at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  bool operator==(const Table& o) const {
    return rows == o.rows && cols == o.cols && data == o.data;
  }
};

using Matrix = Table<double>;
using BitMatrix = Table<std::uint8_t>;  // 0/1 entries
using BitVector = std::vector<std::uint8_t>;

}  // namespace jamnet
