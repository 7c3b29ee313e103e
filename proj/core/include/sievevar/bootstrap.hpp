#pragma once

#include "sievevar/dgp.hpp"
#include "sievevar/estimate.hpp"
#include "sievevar/intervals.hpp"
#include "sievevar/matrix_seq.hpp"
#include "sievevar/rng.hpp"

#include <cstddef>
#include <vector>

namespace sievevar {

/// Refits per replication before a replication is declared failed.
inline constexpr int kMaxBootstrapRetries = 10;

/// Bootstrap IRF estimates: draws[r] holds Phi*_0..Phi*_H of replication r.
struct BootstrapDraws {
  std::size_t replications = 0;
  std::size_t horizon = 0;
  Index dim = 0;
  std::vector<MatrixSeq> draws;
  StreamId seed_record;
};

/**
 * Recursive-design residual bootstrap pseudo-sample of the same length as
 * `original`. The first p values are a random contiguous block of the
 * original sample; the rest follow y*_t = [c] + sum A_j y*_{t-j} + u*_t with
 * u*_t drawn with replacement from the centered residuals.
 */
[[nodiscard]] SamplePath residual_bootstrap_sample(const VarModel& model,
                                                   const MatrixXd& residuals,
                                                   const MatrixXd& original, RandomStream stream);

/// Replication r uses stream.substream(r); failed refits retry on fresh
/// child streams up to kMaxBootstrapRetries times, then NumericalError.
[[nodiscard]] BootstrapDraws bootstrap_irf_distribution(const MatrixXd& y, Index p,
                                                        std::size_t horizon,
                                                        std::size_t replications,
                                                        RandomStream stream,
                                                        FitOptions options = {});

/// Same, resampling from an already fitted model and its residuals.
[[nodiscard]] BootstrapDraws bootstrap_irf_distribution(const VarFit& fit, const MatrixXd& y,
                                                        std::size_t horizon,
                                                        std::size_t replications,
                                                        RandomStream stream,
                                                        FitOptions options = {});

/// 1-based order-statistic indices ceil(M (1 -+ level) / 2), clamped to [1, M].
struct PercentileIndices {
  std::size_t lower = 0;
  std::size_t upper = 0;
};
[[nodiscard]] PercentileIndices percentile_indices(std::size_t replications, double level);

/// Equal-tailed Efron percentile intervals. Point is the sample median of the draws
/// unless `center` is supplied.
[[nodiscard]] IntervalSet percentile_ci(const BootstrapDraws& draws, double level,
                                        const MatrixSeq* center = nullptr);

/// Coefficients after subtracting delta * bias, with delta shrunk in steps of
/// 0.01 from 1 until the companion radius is below 1 (or delta reaches 0).
struct CorrectedCoefficients {
  MatrixXd stacked;  // K x Kp
  double delta = 1.0;
};
[[nodiscard]] CorrectedCoefficients apply_bias_correction(const MatrixXd& stacked,
                                                          const MatrixXd& bias);

/// First-stage bootstrap bias estimate mean(A*) - A_hat and the guarded correction.
struct BiasCorrection {
  MatrixXd bias;  // K x Kp
  MatrixSeq corrected;
  double delta = 1.0;
};
[[nodiscard]] BiasCorrection estimate_bias_correction(const VarFit& fit, const MatrixXd& y,
                                                      std::size_t replications,
                                                      RandomStream stream,
                                                      FitOptions options = {});

/**
 * Second stage of the bootstrap-after-bootstrap shortcut: resample from the
 * model with `corrected` coefficients, subtract the same `bias` (same guard
 * policy) from every refit, and return the IRF draws.
 */
[[nodiscard]] BootstrapDraws corrected_bootstrap_draws(const VarFit& fit, const MatrixXd& y,
                                                       const MatrixSeq& corrected,
                                                       const MatrixXd& bias,
                                                       std::size_t horizon,
                                                       std::size_t replications,
                                                       RandomStream stream,
                                                       FitOptions options = {});

/// Bias-corrected bootstrap-after-bootstrap percentile intervals (method "BOOT-db").
/// Stage 1 draws from stream.substream(0), stage 2 from stream.substream(1).
[[nodiscard]] IntervalSet bias_corrected_bootstrap(const MatrixXd& y, Index p,
                                                   std::size_t horizon,
                                                   std::size_t replications, double level,
                                                   RandomStream stream, FitOptions options = {});
[[nodiscard]] IntervalSet bias_corrected_bootstrap(const VarFit& fit, const MatrixXd& y,
                                                   std::size_t horizon,
                                                   std::size_t replications, double level,
                                                   RandomStream stream, FitOptions options = {});

}  // namespace sievevar
