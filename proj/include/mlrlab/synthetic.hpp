#pragma once

#include <cstdint>

#include "mlrlab/types.hpp"

namespace mlrlab {

/// Draws a dataset from the mixed linear model: X and beta* entries i.i.d.
/// N(0, 1), labels i.i.d. from the proportions, noise i.i.d. N(0, sigma^2).
///
/// Each of beta*, labels, X and noise comes from its own sub-stream derived
/// from spec.seed, so the output depends on nothing but (spec, n).
Dataset generate_synthetic(const MixtureSpec& spec, Index n);

/// Replaces ceil(f * n) uniformly chosen responses by draws from
/// N(0, RMS(y)^2), independent of the original values. The corrupted row
/// indices are recorded (sorted) in the returned dataset.
Dataset inject_outliers(const Dataset& data, double f, std::uint64_t seed);

/// ceil(f * n) with a small guard against products like 0.07 * 100 landing
/// just above an integer.
Index corruption_count(double f, Index n);

/// K vectors of dimension d with i.i.d. N(0, 1) entries: the random
/// initialization shared by every solver.
MLRModel random_initialization(int K, Index d, std::uint64_t seed);

/// Root mean square of a vector.
double rms(const Vector& v);

}  // namespace mlrlab
