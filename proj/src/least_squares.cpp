#include "mlrlab/least_squares.hpp"

#include <cmath>
#include <sstream>

#include "mlrlab/errors.hpp"

namespace mlrlab {

namespace {

// Smallest/largest singular value ratio of the weighted Gram matrix below
// which a system is reported as degenerate.
constexpr double kGramRankTolerance = 1e6 * kMachineEpsilon;
constexpr double kRidgeScale = 1e3 * kMachineEpsilon;

Vector solve_scaled(Matrix A, Vector b, const LsqOptions& opts) {
  const Index d = A.cols();
  if (opts.ridge) {
    const double lambda = kRidgeScale * A.squaredNorm() / static_cast<double>(d);
    const Index m = A.rows();
    A.conservativeResize(m + d, Eigen::NoChange);
    b.conservativeResize(m + d);
    A.bottomRows(d) = std::sqrt(lambda) * Matrix::Identity(d, d);
    b.tail(d).setZero();
  }
  if (A.rows() < d) {
    std::ostringstream msg;
    msg << "weighted least squares has " << A.rows() << " effective rows for dimension " << d;
    throw DegenerateSystem(msg.str(), opts.context);
  }

  Eigen::HouseholderQR<Matrix> qr(A);
  const Matrix R = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  // Singular values of R equal those of the scaled design; the Gram matrix
  // has their squares.
  const Vector s = Eigen::JacobiSVD<Matrix>(R).singularValues();
  const double s_max = s.size() ? s(0) : 0.0;
  const double s_min = s.size() ? s(s.size() - 1) : 0.0;
  // A ridge makes the system well posed by construction; its size sits below
  // the rank tolerance, so the check only applies to unregularized solves.
  const bool deficient = !opts.ridge && s_min * s_min < kGramRankTolerance * s_max * s_max;
  if (!(s_max > 0.0) || deficient) {
    std::ostringstream msg;
    msg << "weighted Gram matrix is rank deficient (singular values " << s_min * s_min << " / "
        << s_max * s_max << ")";
    throw DegenerateSystem(msg.str(), opts.context);
  }
  return qr.solve(b);
}

}  // namespace

Vector wls(const Matrix& X, const Vector& w, const Vector& y, const LsqOptions& opts) {
  if (X.rows() != y.size() || X.rows() != w.size()) {
    throw InvalidArgument("wls: X, w and y disagree in length");
  }
  Index m = 0;
  for (Index i = 0; i < w.size(); ++i) {
    if (!(w(i) >= 0.0) || !std::isfinite(w(i))) {
      throw InvalidArgument("wls: weights must be finite and nonnegative");
    }
    if (w(i) > 0.0) ++m;
  }
  Matrix A(m, X.cols());
  Vector b(m);
  Index row = 0;
  for (Index i = 0; i < w.size(); ++i) {
    if (w(i) > 0.0) {
      const double s = std::sqrt(w(i));
      A.row(row) = s * X.row(i);
      b(row) = s * y(i);
      ++row;
    }
  }
  return solve_scaled(std::move(A), std::move(b), opts);
}

Vector ols(const Matrix& X, const Vector& y, const LsqOptions& opts) {
  if (X.rows() != y.size()) throw InvalidArgument("ols: X and y disagree in length");
  return solve_scaled(X, y, opts);
}

Vector ols_rows(const Matrix& X, const Vector& y, std::span<const Index> rows,
                const LsqOptions& opts) {
  Matrix A(static_cast<Index>(rows.size()), X.cols());
  Vector b(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    A.row(static_cast<Index>(r)) = X.row(rows[r]);
    b(static_cast<Index>(r)) = y(rows[r]);
  }
  return solve_scaled(std::move(A), std::move(b), opts);
}

}  // namespace mlrlab
