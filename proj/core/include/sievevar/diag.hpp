#pragma once

#include "sievevar/matrix_seq.hpp"

#include <cstddef>
#include <optional>

namespace sievevar {

/// Growth-rate diagnostics for a sieve lag order p at sample size T.
struct AssumptionRatios {
  double ratio_p3_T = 0.0;  // p^3 / T, should be small
  /// p <= 3 log(T). The constant 3 is a diagnostic convention.
  bool log_rule_ok = false;
  /// p / log(T), the constant c_T in p = c_T log(T).
  double log_constant = 0.0;
  /// With a decay rate alpha: the lower bound -1 / (2 log alpha) on c_T and
  /// whether p / log(T) exceeds it.
  std::optional<double> required_log_constant;
  std::optional<bool> decay_rule_ok;
};

[[nodiscard]] AssumptionRatios assumption_ratios(std::size_t p, std::size_t sample_size,
                                                 std::optional<double> alpha = std::nullopt);

enum class NormKind { frobenius, spectral };

/// ||A_i|| ~ scale * rate^i.
struct GeometricDecay {
  double scale = 1.0;
  double rate = 0.5;
};

/// sqrt(T) * sum_{i > p} ||A_i||, summed up to the end of the sequence.
[[nodiscard]] double tail_norm(const MatrixSeq& ar_true, std::size_t p, std::size_t sample_size,
                               NormKind norm = NormKind::frobenius);
/// Closed form sqrt(T) * scale * rate^(p+1) / (1 - rate). Throws InputError if rate >= 1.
[[nodiscard]] double tail_norm(GeometricDecay decay, std::size_t p, std::size_t sample_size);

enum class GrowthRule { cubic, exponential };

/// Percentage increase of T needed to move from p_from to p_to lags under
/// T ~ p^3 (cubic) or T ~ exp(p) (exponential).
[[nodiscard]] double sample_growth(std::size_t p_from, std::size_t p_to, GrowthRule rule);

}  // namespace sievevar
