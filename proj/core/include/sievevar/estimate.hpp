#pragma once

#include "sievevar/dgp.hpp"
#include "sievevar/matrix_seq.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace sievevar {

/// Divisor of the residual covariance: t_effective ("ml") or
/// t_effective - Kp - 1{intercept} ("adjusted").
enum class DfMode { ml, adjusted };

struct FitOptions {
  bool intercept = false;
  DfMode df = DfMode::adjusted;
};

/// Least-squares VAR(p) fit.
struct VarModel {
  Index dim = 0;
  Index lags = 0;
  MatrixSeq ar_hat;
  MatrixXd sigma_u_hat;
  std::optional<VectorXd> intercept;
  /// Kp x Kp second-moment matrix of the lagged regressors (demeaned when an
  /// intercept is fitted), divided by t_effective.
  MatrixXd moment_matrix;
  Index t_effective = 0;
};

struct VarFit {
  VarModel model;
  /// K x t_effective, column t holds u_hat for observation p + t.
  MatrixXd residuals;
};

/// Rows of y are observations. Conditions on the first p observations.
/// Throws InputError when T is too short and NumericalError on a singular
/// moment matrix (the message carries the condition-number estimate).
[[nodiscard]] VarFit fit_var_ls(const MatrixXd& y, Index p, FitOptions options = {});
[[nodiscard]] VarFit fit_var_ls(const SamplePath& y, Index p, FitOptions options = {});

/// (1/d) sum u_t u_t'; `regressors` is Kp + 1{intercept}, used only by the adjusted mode.
[[nodiscard]] MatrixXd residual_cov(const MatrixXd& residuals, DfMode mode, Index regressors);

struct AutocovSet {
  Index dim = 0;
  std::vector<MatrixXd> gammas;  // Gamma(0)..Gamma(h_max)
};

/// Mean-corrected sample autocovariances with divisor T.
[[nodiscard]] AutocovSet sample_autocov(const MatrixXd& y, std::size_t h_max);

/// Block-Toeplitz Kp x Kp matrix with (i, j) block Gamma(i - j), Gamma(-h) = Gamma(h)'.
[[nodiscard]] MatrixXd build_gamma_p(const AutocovSet& acov, Index p);

}  // namespace sievevar
