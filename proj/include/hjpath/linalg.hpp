#pragma once

#include <vector>

#include "hjpath/normal_form.hpp"

namespace hjpath {

using SymMatrix = std::vector<std::vector<NormalForm>>;

/// Reduced row echelon form over rational functions.
struct RrefResult {
  SymMatrix rows;               // reduced rows, pivot rows first in pivot order
  std::vector<int> origin;      // original row index of each reduced row
  std::vector<int> pivot_cols;  // pivot column of reduced row r, for r < rank
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};

/// Row-reduces `m`, choosing pivots only among the first `pivot_width`
/// columns (the remaining columns ride along, e.g. a right-hand side).
/// Columns are scanned left to right and the first row with a nonzero
/// entry becomes the pivot row, so the result is deterministic.
RrefResult rref(SymMatrix m, int pivot_width);

/// Exact rank of a rational matrix.
int rank_exact(std::vector<std::vector<Rational>> m);

/// Numerical rank with partial pivoting; entries below `tol` times the
/// largest magnitude count as zero.
int rank_numeric(std::vector<std::vector<double>> m, double tol = 1e-9);

}  // namespace hjpath
