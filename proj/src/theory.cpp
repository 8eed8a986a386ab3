#include "mlrlab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlrlab/errors.hpp"

namespace mlrlab::theory {

void TheoryInputs::validate() const {
  if (!(p1 > 0.0) || !(p2 >= 0.0) || p1 < p2) {
    throw InvalidArgument("theory: proportions must satisfy p1 >= p2 >= 0, p1 > 0");
  }
  if (std::abs(p1 + p2 - 1.0) > 1e-12) throw InvalidArgument("theory: p1 + p2 must equal 1");
  if (!(sigma_eps >= 0.0)) throw InvalidArgument("theory: sigma_eps must be nonnegative");
  if (!(delta_norm > 0.0)) throw InvalidArgument("theory: ||Delta|| must be positive");
  if (!(eta > 0.0)) throw InvalidArgument("theory: eta must be positive");
  if (!(R > 0.0)) throw InvalidArgument("theory: R must be positive");
  if (!(D >= 0.0)) throw InvalidArgument("theory: D must be nonnegative");
}

double TheoryInputs::xi_tilde() const { return xi() / std::sqrt(R); }

double gamma(double p1, double p2) {
  if (!(p1 > 0.0)) throw InvalidArgument("gamma: p1 must be positive");
  return 5.0 * p2 / (4.0 * p1);
}

QValue q_value(const TheoryInputs& in) {
  in.validate();
  QValue out;
  out.q = gamma(in.p1, in.p2) + (1.0 / in.p1 + 1.0 / std::sqrt(in.R)) * in.xi();
  out.applicable = out.q < 0.5;
  return out;
}

WthRange wth_range(const TheoryInputs& in) {
  const double q = q_value(in).q;
  const double scale = in.eta * in.delta_norm * in.delta_norm;
  WthRange range;
  range.lo = 1.0 / (1.0 + scale * (1.0 - q) * (1.0 - q));
  range.hi = 1.0 / (1.0 + scale * q * q);
  if (!(range.lo < range.hi)) {
    throw EmptyRange("wth_range: empty interval [" + std::to_string(range.lo) + ", " +
                     std::to_string(range.hi) + "] at q = " + std::to_string(q));
  }
  return range;
}

double r_lower_bound(const TheoryInputs& in) {
  const double q = q_value(in).q;
  const double xi_t = in.xi_tilde();
  if (!(q > xi_t)) throw Inapplicable("r_lower_bound: requires q > xi / sqrt(R)");
  const double delta2 = in.delta_norm * in.delta_norm;
  const double first = 1.0 / ((q - xi_t) * (q - xi_t) * delta2);
  const double lead = 3.0 * std::max(in.D, 0.5) + in.xi();
  const double second = 5.0 * lead * lead * delta2 * in.eta;
  return std::max(first, second);
}

double recovery_bound(const TheoryInputs& in) {
  if (!q_value(in).applicable) throw Inapplicable("recovery_bound: requires q < 1/2");
  const double g = gamma(in.p1, in.p2);
  const double denom = in.sigma_eps + g * in.delta_norm;
  if (!(denom > 0.0)) return 0.0;
  return in.sigma_eps / denom / std::sqrt(in.R);
}

}  // namespace mlrlab::theory
