#include "sievevar/var_core.hpp"

#include "sievevar/error.hpp"

#include <Eigen/Eigenvalues>

#include <utility>
#include <vector>

namespace sievevar {

CompanionMatrix companion_form(const MatrixSeq& ar) {
  if (ar.base() != IndexBase::one) {
    throw InputError("companion_form expects an AR sequence");
  }
  if (ar.empty()) {
    throw InputError("companion_form needs at least one lag");
  }
  const Index k = ar.dim();
  const auto p = static_cast<Index>(ar.size());
  CompanionMatrix c{k, p, MatrixXd::Zero(k * p, k * p)};
  c.data.topRows(k) = ar.stacked();
  if (p > 1) {
    c.data.bottomLeftCorner(k * (p - 1), k * (p - 1)).setIdentity();
  }
  return c;
}

MatrixSeq ma_from_ar(const MatrixSeq& ar, std::size_t horizon) {
  if (ar.base() != IndexBase::one) {
    throw InputError("ma_from_ar expects an AR sequence");
  }
  const Index k = ar.dim();
  const std::size_t p = ar.size();
  std::vector<MatrixXd> phi;
  phi.reserve(horizon + 1);
  phi.emplace_back(MatrixXd::Identity(k, k));
  for (std::size_t i = 1; i <= horizon; ++i) {
    MatrixXd acc = MatrixXd::Zero(k, k);
    // only lags i-m <= p contribute
    const std::size_t m_start = i > p ? i - p : 0;
    for (std::size_t m = m_start; m < i; ++m) {
      acc.noalias() += phi[m] * ar[i - m - 1];
    }
    phi.push_back(std::move(acc));
  }
  return MatrixSeq::ma(k, std::move(phi));
}

MatrixXd ma_via_companion(const MatrixSeq& ar, std::size_t i) {
  const Index k = ar.dim();
  if (i == 0) {
    return MatrixXd::Identity(k, k);
  }
  const CompanionMatrix c = companion_form(ar);
  // A^i J' only needs the first K columns of the running power.
  MatrixXd cols = MatrixXd::Zero(c.data.rows(), k);
  cols.topRows(k).setIdentity();
  for (std::size_t n = 0; n < i; ++n) {
    cols = c.data * cols;
  }
  return Selector{k, c.lags}.extract(cols);
}

double spectral_radius(const CompanionMatrix& c) {
  if (c.data.size() == 0) {
    return 0.0;
  }
  Eigen::EigenSolver<MatrixXd> solver(c.data, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue computation did not converge for a " +
                         std::to_string(c.data.rows()) + "x" + std::to_string(c.data.cols()) +
                         " companion matrix");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_radius(const MatrixSeq& ar) {
  if (ar.empty()) {
    return 0.0;
  }
  return spectral_radius(companion_form(ar));
}

Stability classify_stability(double radius) noexcept {
  if (radius < 1.0 - kStabilityMargin) {
    return Stability::stable;
  }
  if (radius < 1.0) {
    return Stability::near_unit_root;
  }
  return Stability::unstable;
}

}  // namespace sievevar
