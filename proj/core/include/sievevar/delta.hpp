#pragma once

#include "sievevar/estimate.hpp"
#include "sievevar/intervals.hpp"
#include "sievevar/matrix_seq.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace sievevar {

enum class CovFlavor { finite_order, sieve };

/// Asymptotic covariance of sqrt(T) vec(Phi_hat_i - Phi_i), K^2 x K^2.
struct IrfCovariance {
  std::size_t horizon = 0;
  MatrixXd cov;
  CovFlavor flavor = CovFlavor::finite_order;
};

/// Standard normal inverse CDF (rational approximation plus one Halley step).
[[nodiscard]] double normal_quantile(double prob);

/// d vec(Phi_i) / d vec([A_1 ... A_p])', K^2 x K^2 p. Requires i >= 1.
[[nodiscard]] MatrixXd irf_jacobian(const MatrixSeq& ar, std::size_t i);
[[nodiscard]] MatrixXd irf_jacobian(const VarModel& model, std::size_t i);

/// G_i (gamma^-1 kron sigma) G_i'.
[[nodiscard]] IrfCovariance finite_order_cov(const MatrixSeq& ar, const MatrixXd& gamma,
                                             const MatrixXd& sigma, std::size_t i);
/// Uses the fitted regressor moment matrix and the model's sigma_u_hat.
[[nodiscard]] IrfCovariance finite_order_cov(const VarModel& model, std::size_t i);
/// Horizons 1..H in one pass.
[[nodiscard]] std::vector<IrfCovariance> finite_order_covs(const MatrixSeq& ar,
                                                           const MatrixXd& gamma,
                                                           const MatrixXd& sigma,
                                                           std::size_t horizon);

/**
 * Plug-in sieve covariance
 *
 *   sum_{m,n < i} [J (A')^{i-1-m} gamma_p^-1 A^{i-1-n} J'] kron [Phi_m sigma Phi_n'].
 *
 * Algebraically equal to finite_order_cov for identical inputs; the two are
 * computed along independent routes.
 */
[[nodiscard]] IrfCovariance sieve_cov(const MatrixSeq& ar, const MatrixXd& gamma_p,
                                      const MatrixXd& sigma, std::size_t i);
[[nodiscard]] IrfCovariance sieve_cov(const VarModel& model, const MatrixXd& gamma_p,
                                      std::size_t i);
[[nodiscard]] std::vector<IrfCovariance> sieve_covs(const MatrixSeq& ar, const MatrixXd& gamma_p,
                                                    const MatrixXd& sigma, std::size_t horizon);

/// point +- z * sqrt(var / T) per entry; horizon 0 is the exact identity.
/// covs[i - 1] must hold horizon i for every i in 1..H.
[[nodiscard]] IntervalSet delta_ci(const MatrixSeq& phi_hat, const std::vector<IrfCovariance>& covs,
                                   double level, std::size_t sample_size,
                                   std::string_view method = "LS");

struct HorizonValidity {
  std::size_t horizon = 0;
  bool sieve_valid = false;  // false marks an extrapolation horizon (i > p)
};

[[nodiscard]] std::vector<HorizonValidity> horizon_gate(std::size_t p, std::size_t horizon);

/**
 * Delta intervals for a fitted model with each tradition's plug-ins:
 * finite_order uses the regression moment matrix and the df-adjusted sigma,
 * sieve uses the Toeplitz autocovariance matrix of y and the ml sigma.
 */
[[nodiscard]] IntervalSet delta_intervals(const VarFit& fit, const MatrixXd& y,
                                          std::size_t horizon, double level, CovFlavor flavor);

}  // namespace sievevar
