#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <vector>

#include "mlrlab/types.hpp"

namespace mlrlab::detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ceil(x), tolerant of products such as 0.07 * 100 landing just above an
// integer.
inline Index ceil_count(double x) {
  return static_cast<Index>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

// Positions of the `count` smallest entries (ties: lower position first),
// ascending.
inline std::vector<Index> bottom_positions(const Vector& values, Index count) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) < values(b); });
  order.resize(static_cast<std::size_t>(std::min<Index>(count, values.size())));
  std::sort(order.begin(), order.end());
  return order;
}

// 0/1 mask of the ceil((1-f) n) samples with the smallest entry in `best`.
inline Vector trim_mask(const Vector& best, double trim_fraction) {
  const Index n = best.size();
  if (trim_fraction <= 0.0) return Vector::Ones(n);
  const Index keep = std::max<Index>(1, ceil_count((1.0 - trim_fraction) * static_cast<double>(n)));
  Vector mask = Vector::Zero(n);
  for (Index i : bottom_positions(best, keep)) mask(i) = 1.0;
  return mask;
}

// n x K matrix of squared residuals (x_i^T beta_k - y_i)^2.
inline Matrix squared_residuals(const Matrix& X, const Vector& y, const MLRModel& model) {
  return ((X * model.as_matrix()).colwise() - y).array().square().matrix();
}

}  // namespace mlrlab::detail
