#pragma once

#include "sievevar/matrix_seq.hpp"

#include <cstddef>

namespace sievevar {

/// Kp x Kp companion matrix: [A_1 ... A_p] in the first block row, identity
/// blocks on the block subdiagonal, zeros elsewhere.
struct CompanionMatrix {
  Index block_dim = 0;
  Index lags = 0;
  MatrixXd data;
};

/// Selector J_p = [I_K, 0, ..., 0], applied as block extraction.
struct Selector {
  Index block_dim = 0;
  Index lags = 0;

  /// J_p M J_p' : the top-left K x K block.
  [[nodiscard]] MatrixXd extract(const MatrixXd& m) const {
    return m.topLeftCorner(block_dim, block_dim);
  }
};

/// Stability verdicts. Radius below 1 - 1e-8 counts as stable; [1 - 1e-8, 1)
/// is reported separately.
enum class Stability { stable, near_unit_root, unstable };

inline constexpr double kStabilityMargin = 1e-8;

[[nodiscard]] CompanionMatrix companion_form(const MatrixSeq& ar);

/// Phi_0..Phi_H by the recursion Phi_i = sum_{m<i} Phi_m A_{i-m}, A_j = 0 for j > p.
[[nodiscard]] MatrixSeq ma_from_ar(const MatrixSeq& ar, std::size_t horizon);

/// Top-left K x K block of the i-th companion power (repeated multiplication).
[[nodiscard]] MatrixXd ma_via_companion(const MatrixSeq& ar, std::size_t i);

/// Largest eigenvalue modulus. Throws NumericalError if the eigen-solver fails.
[[nodiscard]] double spectral_radius(const CompanionMatrix& c);
/// Companion radius of an AR sequence; 0 for an empty sequence.
[[nodiscard]] double spectral_radius(const MatrixSeq& ar);

[[nodiscard]] Stability classify_stability(double radius) noexcept;

}  // namespace sievevar
