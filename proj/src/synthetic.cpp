#include "mlrlab/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlrlab/errors.hpp"
#include "mlrlab/random.hpp"

namespace mlrlab {

namespace {

enum StreamTag : std::uint64_t {
  kTruthStream = 1,
  kLabelStream = 2,
  kDesignStream = 3,
  kNoiseStream = 4,
};

}  // namespace

double rms(const Vector& v) {
  if (v.size() == 0) return 0.0;
  return std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
}

Dataset generate_synthetic(const MixtureSpec& spec, Index n) {
  spec.validate();
  if (n < 1) throw InvalidArgument("generate_synthetic: n must be >= 1");

  Dataset data;
  {
    Rng rng(derive_seed(spec.seed, kTruthStream));
    std::vector<Vector> betas;
    for (int k = 0; k < spec.K; ++k) {
      Vector b(spec.d);
      for (int j = 0; j < spec.d; ++j) b(j) = rng.normal();
      betas.push_back(std::move(b));
    }
    data.truth = MLRModel(std::move(betas));
  }

  std::vector<double> cumulative(spec.proportions.size());
  std::partial_sum(spec.proportions.begin(), spec.proportions.end(), cumulative.begin());
  Labels labels(static_cast<std::size_t>(n));
  {
    Rng rng(derive_seed(spec.seed, kLabelStream));
    for (auto& c : labels) {
      const double u = rng.uniform();
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      // Rounding in the cumulative sum can leave its last entry just below 1.
      c = static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative.begin(), spec.K - 1)) + 1;
    }
  }

  data.X.resize(n, spec.d);
  {
    Rng rng(derive_seed(spec.seed, kDesignStream));
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < spec.d; ++j) data.X(i, j) = rng.normal();
    }
  }

  data.y.resize(n);
  Rng noise(derive_seed(spec.seed, kNoiseStream));
  for (Index i = 0; i < n; ++i) {
    const auto& beta = data.truth->betas[labels[static_cast<std::size_t>(i)] - 1];
    data.y(i) = data.X.row(i).dot(beta);
    if (spec.sigma > 0.0) data.y(i) += spec.sigma * noise.normal();
  }
  data.true_labels = std::move(labels);
  data.noise_sigma = spec.sigma;
  return data;
}

Index corruption_count(double f, Index n) {
  if (f <= 0.0) return 0;
  const double raw = f * static_cast<double>(n);
  return std::min<Index>(n, static_cast<Index>(std::ceil(raw - 1e-9 * std::max(1.0, raw))));
}

Dataset inject_outliers(const Dataset& data, double f, std::uint64_t seed) {
  if (data.n() == 0) throw InvalidArgument("inject_outliers: empty dataset");
  if (!(f >= 0.0 && f < 1.0)) throw InvalidArgument("inject_outliers: f must lie in [0, 1)");

  Dataset out = data;
  const Index m = corruption_count(f, data.n());
  if (m == 0) return out;

  Rng rng(seed);
  // Partial Fisher-Yates: the first m entries become a uniform m-subset.
  std::vector<Index> order(static_cast<std::size_t>(data.n()));
  std::iota(order.begin(), order.end(), Index{0});
  for (Index i = 0; i < m; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(data.n() - i)));
    std::swap(order[i], order[j]);
  }
  order.resize(static_cast<std::size_t>(m));
  std::sort(order.begin(), order.end());

  const double scale = rms(data.y);
  for (Index i : order) out.y(i) = scale * rng.normal();

  std::vector<Index> merged;
  std::set_union(data.corrupted.begin(), data.corrupted.end(), order.begin(), order.end(),
                 std::back_inserter(merged));
  out.corrupted = std::move(merged);
  return out;
}

MLRModel random_initialization(int K, Index d, std::uint64_t seed) {
  if (K < 1 || d < 1) throw InvalidArgument("random_initialization: K and d must be >= 1");
  Rng rng(seed);
  std::vector<Vector> betas;
  for (int k = 0; k < K; ++k) {
    Vector b(d);
    for (Index j = 0; j < d; ++j) b(j) = rng.normal();
    betas.push_back(std::move(b));
  }
  return MLRModel(std::move(betas));
}

}  // namespace mlrlab
