#pragma once

#include "mlrlab/types.hpp"

namespace mlrlab::theory {

/// Two-component setting of the recovery guarantee.
struct TheoryInputs {
  double p1 = 0.5;
  double p2 = 0.5;
  double sigma_eps = 0.0;   // bound on |noise|
  double delta_norm = 1.0;  // ||beta*_1 - beta*_2||
  double eta = 1.0;
  double R = 1.0;  // squared-norm bound on admitted samples
  double D = 0.0;  // ||beta_1^init - beta*_1|| / ||Delta||

  void validate() const;
  /// sigma_eps / ||Delta||.
  double xi() const { return sigma_eps / delta_norm; }
  /// xi / sqrt(R).
  double xi_tilde() const;
};

struct QValue {
  double q = 0.0;
  /// q < 1/2: the guarantee applies.
  bool applicable = false;
};

struct WthRange {
  double lo = 0.0;
  double hi = 0.0;
  double midpoint() const { return 0.5 * (lo + hi); }
};

/// gamma = 5 p2 / (4 p1).
double gamma(double p1, double p2);

/// q = gamma + (1/p1 + 1/sqrt(R)) sigma_eps / ||Delta||.
QValue q_value(const TheoryInputs& in);

/// Admissible weight thresholds:
/// 1/(1 + eta (1-q)^2 ||Delta||^2) < w_th < 1/(1 + eta q^2 ||Delta||^2).
/// Throws EmptyRange when lo >= hi.
WthRange wth_range(const TheoryInputs& in);

/// max{ 1/((q - xi~)^2 ||Delta||^2), 5 (3 max{D, 1/2} + xi)^2 ||Delta||^2 eta }.
/// Throws Inapplicable when q <= xi~.
double r_lower_bound(const TheoryInputs& in);

/// (1/sqrt(R)) sigma_eps / (sigma_eps + gamma ||Delta||). Throws Inapplicable
/// when q >= 1/2.
double recovery_bound(const TheoryInputs& in);

}  // namespace mlrlab::theory
