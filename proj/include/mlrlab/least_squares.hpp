#pragma once

#include <span>
#include <string>

#include "mlrlab/types.hpp"

namespace mlrlab {

struct LsqOptions {
  /// Add 1e3 * eps * trace(Gram) / d to the Gram diagonal before solving.
  bool ridge = false;
  /// Prefixed to DegenerateSystem messages, e.g. "phase1 round 2".
  std::string context;
};

/// Minimizer of ||W^{1/2} (y - X beta)||^2 for nonnegative weights w.
///
/// Rows with zero weight are dropped, the remaining rows are scaled by
/// sqrt(w_i) and solved with a Householder QR; the Gram matrix is never
/// inverted. Throws DegenerateSystem when the smallest singular value of the
/// weighted Gram matrix is below 1e6 * eps times the largest (not checked
/// when the ridge is on).
Vector wls(const Matrix& X, const Vector& w, const Vector& y, const LsqOptions& opts = {});

/// Ordinary least squares: wls with unit weights.
Vector ols(const Matrix& X, const Vector& y, const LsqOptions& opts = {});

/// OLS restricted to the given rows of (X, y).
Vector ols_rows(const Matrix& X, const Vector& y, std::span<const Index> rows,
                const LsqOptions& opts = {});

}  // namespace mlrlab
