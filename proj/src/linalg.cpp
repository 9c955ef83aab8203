#include "hjpath/linalg.hpp"

#include <cmath>

namespace hjpath {

RrefResult rref(SymMatrix m, int pivot_width) {
  RrefResult out;
  const int nrows = static_cast<int>(m.size());
  std::vector<int> order(static_cast<std::size_t>(nrows));
  for (int i = 0; i < nrows; ++i) order[static_cast<std::size_t>(i)] = i;
  int r = 0;
  for (int c = 0; c < pivot_width && r < nrows; ++c) {
    int p = -1;
    for (int i = r; i < nrows; ++i)
      if (!m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[static_cast<std::size_t>(r)], m[static_cast<std::size_t>(p)]);
    std::swap(order[static_cast<std::size_t>(r)], order[static_cast<std::size_t>(p)]);
    auto& prow = m[static_cast<std::size_t>(r)];
    NormalForm inv = prow[static_cast<std::size_t>(c)].reciprocal();
    for (auto& x : prow) x = x * inv;
    for (int i = 0; i < nrows; ++i) {
      if (i == r) continue;
      auto& row = m[static_cast<std::size_t>(i)];
      NormalForm f = row[static_cast<std::size_t>(c)];
      if (f.is_zero()) continue;
      for (std::size_t j = 0; j < row.size(); ++j)
        if (!prow[j].is_zero()) row[j] = row[j] - f * prow[j];
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.rows = std::move(m);
  out.origin = std::move(order);
  return out;
}

int rank_exact(std::vector<std::vector<Rational>> m) {
  const std::size_t rows = m.size();
  if (rows == 0) return 0;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[r], m[p]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

int rank_numeric(std::vector<std::vector<double>> m, double tol) {
  const std::size_t rows = m.size();
  if (rows == 0) return 0;
  const std::size_t cols = m[0].size();
  double scale = 0;
  for (const auto& row : m)
    for (double x : row) scale = std::max(scale, std::abs(x));
  if (scale == 0) return 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    for (std::size_t i = r + 1; i < rows; ++i)
      if (std::abs(m[i][c]) > std::abs(m[p][c])) p = i;
    if (std::abs(m[p][c]) <= tol * scale) continue;
    std::swap(m[r], m[p]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      double f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

}  // namespace hjpath
