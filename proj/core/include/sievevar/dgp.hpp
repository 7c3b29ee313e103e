#pragma once

#include "sievevar/matrix_seq.hpp"
#include "sievevar/rng.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sievevar {

/**
 * VARMA(p, q) data-generating process
 *
 *   y_t = sum_{j<=p} A_j y_{t-j} + u_t + sum_{j<=q} M_j u_{t-j},  u_t ~ N(0, sigma_u).
 *
 * Either coefficient list may be empty. A valid spec has a stable AR part,
 * an invertible MA part and a symmetric positive-definite sigma_u.
 */
struct VarmaSpec {
  Index dim = 0;
  MatrixSeq ar;
  MatrixSeq ma;  // M_1..M_q, stored with IndexBase::one
  MatrixXd sigma_u;

  VarmaSpec(MatrixSeq ar_coefs, MatrixSeq ma_coefs, MatrixXd innovation_cov);
};

/// Throws InputError naming the violated invariant (and the offending radius).
void validate(const VarmaSpec& spec);

/// Shipped 2-variable VARMA(1,1): A_1 radius 0.6, M_1 radius 0.3, identity noise.
[[nodiscard]] VarmaSpec default_desk_dgp();

/// Simulated observations, T x K, plus the stream that produced them.
struct SamplePath {
  MatrixXd values;
  std::optional<StreamId> seed_record;

  [[nodiscard]] Index length() const noexcept { return values.rows(); }
  [[nodiscard]] Index dim() const noexcept { return values.cols(); }
};

/// 200 + p_ar.
[[nodiscard]] std::size_t default_burn_in(const VarmaSpec& spec) noexcept;

/// Zero initial conditions; the first burn_in draws are discarded.
[[nodiscard]] SamplePath simulate_varma(const VarmaSpec& spec, std::size_t length,
                                        std::size_t burn_in, RandomStream stream);

struct LagScale {
  std::size_t lag = 0;
  double scale = 0.0;
};

/// {(1, 1), (12, 1/5), (14, 1/10)}.
[[nodiscard]] std::vector<LagScale> default_counterexample_plan();

/// AR sequence of length max(lag) holding base * scale at the listed lags, zero elsewhere.
[[nodiscard]] MatrixSeq counterexample_ar(const MatrixXd& base, std::span<const LagScale> plan);
[[nodiscard]] MatrixSeq counterexample_ar(const MatrixXd& base);

/// True impulse responses Phi_0..Phi_H of the VARMA process.
[[nodiscard]] MatrixSeq varma_true_irf(const VarmaSpec& spec, std::size_t horizon);

/// A_1..A_n of the VAR(infinity) representation y_t = sum A_i y_{t-i} + u_t.
[[nodiscard]] MatrixSeq varma_true_ar(const VarmaSpec& spec, std::size_t lags);

}  // namespace sievevar
