#include "sievevar/diag.hpp"

#include "sievevar/error.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace sievevar {

AssumptionRatios assumption_ratios(std::size_t p, std::size_t sample_size,
                                   std::optional<double> alpha) {
  if (p < 1 || sample_size < 2) {
    throw InputError("assumption_ratios needs p >= 1 and T >= 2");
  }
  const auto pd = static_cast<double>(p);
  const auto t = static_cast<double>(sample_size);
  AssumptionRatios out;
  out.ratio_p3_T = pd * pd * pd / t;
  out.log_constant = pd / std::log(t);
  out.log_rule_ok = pd <= 3.0 * std::log(t);
  if (alpha) {
    if (!(*alpha > 0.0 && *alpha < 1.0)) {
      throw InputError("decay rate alpha must lie in (0, 1)");
    }
    out.required_log_constant = -1.0 / (2.0 * std::log(*alpha));
    out.decay_rule_ok = out.log_constant > *out.required_log_constant;
  }
  return out;
}

double tail_norm(const MatrixSeq& ar_true, std::size_t p, std::size_t sample_size,
                 NormKind norm) {
  double sum = 0.0;
  for (std::size_t i = p; i < ar_true.size(); ++i) {
    const MatrixXd& a = ar_true[i];  // lag i + 1
    if (norm == NormKind::frobenius) {
      sum += a.norm();
    } else {
      sum += Eigen::JacobiSVD<MatrixXd>(a).singularValues()(0);
    }
  }
  return std::sqrt(static_cast<double>(sample_size)) * sum;
}

double tail_norm(GeometricDecay decay, std::size_t p, std::size_t sample_size) {
  if (!(decay.rate > 0.0 && decay.rate < 1.0)) {
    throw InputError("geometric tail diverges unless the decay rate lies in (0, 1)");
  }
  return std::sqrt(static_cast<double>(sample_size)) * decay.scale *
         std::pow(decay.rate, static_cast<double>(p + 1)) / (1.0 - decay.rate);
}

double sample_growth(std::size_t p_from, std::size_t p_to, GrowthRule rule) {
  if (p_from < 1 || p_to <= p_from) {
    throw InputError("sample_growth needs p_to > p_from >= 1");
  }
  const auto from = static_cast<double>(p_from);
  const auto to = static_cast<double>(p_to);
  const double factor =
      rule == GrowthRule::cubic ? std::pow(to / from, 3.0) : std::exp(to - from);
  return 100.0 * (factor - 1.0);
}

}  // namespace sievevar
