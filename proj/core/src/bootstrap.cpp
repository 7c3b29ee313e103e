#include "sievevar/bootstrap.hpp"

#include "sievevar/error.hpp"
#include "sievevar/var_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

namespace sievevar {

namespace {

/// Runs `attempt` on stream.substream(r), retrying on fresh children of it.
template <typename Fn>
auto with_retries(const RandomStream& stream, std::size_t r, Fn&& attempt) {
  const RandomStream base = stream.substream(r);
  for (int tries = 0;; ++tries) {
    try {
      return attempt(tries == 0 ? base : base.substream(static_cast<std::uint64_t>(tries)));
    } catch (const NumericalError&) {
      if (tries >= kMaxBootstrapRetries) {
        throw NumericalError("bootstrap replication " + std::to_string(r) + " failed after " +
                             std::to_string(kMaxBootstrapRetries) + " retries");
      }
    }
  }
}

VarModel with_coefficients(const VarModel& model, MatrixSeq ar) {
  VarModel out = model;
  out.ar_hat = std::move(ar);
  return out;
}

BootstrapDraws draw_irfs(const VarFit& fit, const MatrixXd& y, const VarModel& generator,
                         const MatrixXd* bias, std::size_t horizon, std::size_t replications,
                         const RandomStream& stream, FitOptions options) {
  if (replications < 2) {
    throw InputError("bootstrap needs at least 2 replications");
  }
  const Index p = fit.model.lags;
  BootstrapDraws out{replications, horizon, fit.model.dim, {}, stream.id()};
  out.draws.reserve(replications);
  for (std::size_t r = 0; r < replications; ++r) {
    out.draws.push_back(with_retries(stream, r, [&](RandomStream s) {
      const SamplePath pseudo = residual_bootstrap_sample(generator, fit.residuals, y, s);
      const VarFit refit = fit_var_ls(pseudo.values, p, options);
      if (bias == nullptr) {
        return ma_from_ar(refit.model.ar_hat, horizon);
      }
      const CorrectedCoefficients corrected =
          apply_bias_correction(refit.model.ar_hat.stacked(), *bias);
      return ma_from_ar(MatrixSeq::from_stacked(corrected.stacked), horizon);
    }));
  }
  return out;
}

}  // namespace

SamplePath residual_bootstrap_sample(const VarModel& model, const MatrixXd& residuals,
                                     const MatrixXd& original, RandomStream stream) {
  const Index k = model.dim;
  const Index p = model.lags;
  const Index t_total = original.rows();
  const Index n = residuals.cols();
  if (n < 2) {
    throw InputError("residual bootstrap needs at least 2 residual rows");
  }
  if (original.cols() != k || residuals.rows() != k || t_total <= p) {
    throw InputError("bootstrap inputs disagree with the model dimensions");
  }
  const StreamId record = stream.id();
  const VectorXd mean = residuals.rowwise().mean();
  const MatrixXd centered = residuals.colwise() - mean;

  MatrixXd path(k, t_total);  // column t is y*_t
  const auto start = static_cast<Index>(stream.index(static_cast<std::size_t>(t_total - p + 1)));
  path.leftCols(p) = original.middleRows(start, p).transpose();
  for (Index t = p; t < t_total; ++t) {
    VectorXd yt = centered.col(static_cast<Index>(stream.index(static_cast<std::size_t>(n))));
    if (model.intercept) {
      yt += *model.intercept;
    }
    for (Index j = 1; j <= p; ++j) {
      yt.noalias() += model.ar_hat[static_cast<std::size_t>(j - 1)] * path.col(t - j);
    }
    path.col(t) = yt;
  }
  if (!path.allFinite()) {
    throw NumericalError("bootstrap pseudo-sample diverged");
  }
  return SamplePath{path.transpose(), record};
}

BootstrapDraws bootstrap_irf_distribution(const MatrixXd& y, Index p, std::size_t horizon,
                                          std::size_t replications, RandomStream stream,
                                          FitOptions options) {
  return bootstrap_irf_distribution(fit_var_ls(y, p, options), y, horizon, replications, stream,
                                    options);
}

BootstrapDraws bootstrap_irf_distribution(const VarFit& fit, const MatrixXd& y,
                                          std::size_t horizon, std::size_t replications,
                                          RandomStream stream, FitOptions options) {
  return draw_irfs(fit, y, fit.model, nullptr, horizon, replications, stream, options);
}

PercentileIndices percentile_indices(std::size_t replications, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw InputError("confidence level must lie in (0, 1)");
  }
  const auto m = static_cast<double>(replications);
  // the small offset keeps exact products such as 100 * 0.05 from rounding up
  auto index_at = [&](double frac) {
    const double raw = std::ceil(m * frac - 1e-9);
    return static_cast<std::size_t>(std::clamp(raw, 1.0, m));
  };
  return {index_at((1.0 - level) / 2.0), index_at((1.0 + level) / 2.0)};
}

IntervalSet percentile_ci(const BootstrapDraws& draws, double level, const MatrixSeq* center) {
  const std::size_t m = draws.draws.size();
  if (m < 2) {
    throw InputError("percentile intervals need at least 2 draws");
  }
  const auto [lo, hi] = percentile_indices(m, level);
  const auto k = static_cast<std::size_t>(draws.dim);
  IntervalSet out{"BOOT", level, 0, {}, false};
  out.entries.reserve((draws.horizon + 1) * k * k);
  std::vector<double> values(m);
  for (std::size_t i = 0; i <= draws.horizon; ++i) {
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        const auto ri = static_cast<Index>(r);
        const auto ci = static_cast<Index>(c);
        for (std::size_t b = 0; b < m; ++b) {
          values[b] = draws.draws[b][i](ri, ci);
        }
        std::sort(values.begin(), values.end());
        const double median =
            m % 2 == 1 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
        const double point = center != nullptr ? (*center)[i](ri, ci) : median;
        out.entries.push_back({i, r, c, point, values[lo - 1], values[hi - 1]});
      }
    }
  }
  return out;
}

CorrectedCoefficients apply_bias_correction(const MatrixXd& stacked, const MatrixXd& bias) {
  if (bias.rows() != stacked.rows() || bias.cols() != stacked.cols()) {
    throw InputError("bias estimate does not match the coefficient block");
  }
  if (bias.isZero(0.0)) {
    return {stacked, 1.0};
  }
  for (int step = 100; step > 0; --step) {
    const double delta = step / 100.0;
    MatrixXd candidate = stacked - delta * bias;
    if (spectral_radius(MatrixSeq::from_stacked(candidate)) < 1.0) {
      return {std::move(candidate), delta};
    }
  }
  return {stacked, 0.0};
}

BiasCorrection estimate_bias_correction(const VarFit& fit, const MatrixXd& y,
                                        std::size_t replications, RandomStream stream,
                                        FitOptions options) {
  if (replications < 2) {
    throw InputError("bootstrap needs at least 2 replications");
  }
  const Index p = fit.model.lags;
  const MatrixXd a_hat = fit.model.ar_hat.stacked();
  MatrixXd mean = MatrixXd::Zero(a_hat.rows(), a_hat.cols());
  for (std::size_t r = 0; r < replications; ++r) {
    mean += with_retries(stream, r, [&](RandomStream s) {
      const SamplePath pseudo = residual_bootstrap_sample(fit.model, fit.residuals, y, s);
      return fit_var_ls(pseudo.values, p, options).model.ar_hat.stacked();
    });
  }
  mean /= static_cast<double>(replications);
  MatrixXd bias = mean - a_hat;
  CorrectedCoefficients corrected = apply_bias_correction(a_hat, bias);
  return {std::move(bias), MatrixSeq::from_stacked(corrected.stacked), corrected.delta};
}

BootstrapDraws corrected_bootstrap_draws(const VarFit& fit, const MatrixXd& y,
                                         const MatrixSeq& corrected, const MatrixXd& bias,
                                         std::size_t horizon, std::size_t replications,
                                         RandomStream stream, FitOptions options) {
  return draw_irfs(fit, y, with_coefficients(fit.model, corrected), &bias, horizon, replications,
                   stream, options);
}

IntervalSet bias_corrected_bootstrap(const MatrixXd& y, Index p, std::size_t horizon,
                                     std::size_t replications, double level, RandomStream stream,
                                     FitOptions options) {
  return bias_corrected_bootstrap(fit_var_ls(y, p, options), y, horizon, replications, level,
                                  stream, options);
}

IntervalSet bias_corrected_bootstrap(const VarFit& fit, const MatrixXd& y, std::size_t horizon,
                                     std::size_t replications, double level, RandomStream stream,
                                     FitOptions options) {
  const BiasCorrection stage1 =
      estimate_bias_correction(fit, y, replications, stream.substream(0), options);
  const BootstrapDraws draws = corrected_bootstrap_draws(
      fit, y, stage1.corrected, stage1.bias, horizon, replications, stream.substream(1), options);
  const MatrixSeq center = ma_from_ar(stage1.corrected, horizon);
  IntervalSet out = percentile_ci(draws, level, &center);
  out.method = "BOOT-db";
  out.sample_size = static_cast<std::size_t>(fit.model.t_effective);
  return out;
}

}  // namespace sievevar
