#include "sievevar/delta.hpp"

#include "sievevar/error.hpp"
#include "sievevar/var_core.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace sievevar {

namespace {

MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void add_kron(MatrixXd& out, const MatrixXd& a, const MatrixXd& b) {
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) += a(i, j) * b;
    }
  }
}

/// A^n J' for n = 0..count-1, each Kp x K.
std::vector<MatrixXd> companion_column_powers(const MatrixSeq& ar, std::size_t count) {
  const CompanionMatrix c = companion_form(ar);
  std::vector<MatrixXd> out;
  out.reserve(count);
  MatrixXd cur = MatrixXd::Zero(c.data.rows(), ar.dim());
  cur.topRows(ar.dim()).setIdentity();
  for (std::size_t n = 0; n < count; ++n) {
    out.push_back(cur);
    cur = c.data * cur;
  }
  return out;
}

MatrixXd inverse_spd(const MatrixXd& gamma, const char* what) {
  Eigen::LDLT<MatrixXd> ldlt(gamma);
  const VectorXd d = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-14) ||
      !(d.minCoeff() > 1e-14 * d.maxCoeff())) {
    throw NumericalError(std::string("singular ") + what);
  }
  return ldlt.solve(MatrixXd::Identity(gamma.rows(), gamma.cols()));
}

void check_inputs(const MatrixSeq& ar, const MatrixXd& gamma, const MatrixXd& sigma) {
  const Index kp = ar.dim() * static_cast<Index>(ar.size());
  if (ar.empty() || gamma.rows() != kp || gamma.cols() != kp) {
    throw InputError("moment matrix must be Kp x Kp (" + std::to_string(kp) + ")");
  }
  if (sigma.rows() != ar.dim() || sigma.cols() != ar.dim()) {
    throw InputError("innovation covariance must be K x K");
  }
}

MatrixXd symmetrized(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw InputError("normal quantile requires a probability in (0, 1)");
  }
  // Acklam's rational approximation
  constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
  constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
  constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x = 0.0;
  if (prob < p_low) {
    const double q = std::sqrt(-2.0 * std::log(prob));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (prob <= 1.0 - p_low) {
    const double q = prob - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-prob));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement against the exact CDF
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - prob;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

MatrixXd irf_jacobian(const MatrixSeq& ar, std::size_t i) {
  if (i < 1) {
    throw InputError("irf_jacobian requires horizon i >= 1");
  }
  const Index k = ar.dim();
  const auto p = static_cast<Index>(ar.size());
  const MatrixSeq phi = ma_from_ar(ar, i - 1);
  const auto powers = companion_column_powers(ar, i);
  MatrixXd g = MatrixXd::Zero(k * k, k * k * p);
  for (std::size_t m = 0; m < i; ++m) {
    add_kron(g, powers[i - 1 - m].transpose(), phi[m]);
  }
  return g;
}

MatrixXd irf_jacobian(const VarModel& model, std::size_t i) {
  return irf_jacobian(model.ar_hat, i);
}

std::vector<IrfCovariance> finite_order_covs(const MatrixSeq& ar, const MatrixXd& gamma,
                                             const MatrixXd& sigma, std::size_t horizon) {
  check_inputs(ar, gamma, sigma);
  const MatrixXd middle = kron(inverse_spd(gamma, "regressor moment matrix"), sigma);
  const Index k = ar.dim();
  const auto p = static_cast<Index>(ar.size());
  const MatrixSeq phi = ma_from_ar(ar, horizon);
  const auto powers = companion_column_powers(ar, horizon);

  std::vector<IrfCovariance> out;
  out.reserve(horizon);
  MatrixXd g = MatrixXd::Zero(k * k, k * k * p);
  for (std::size_t i = 1; i <= horizon; ++i) {
    g.setZero();
    for (std::size_t m = 0; m < i; ++m) {
      add_kron(g, powers[i - 1 - m].transpose(), phi[m]);
    }
    const MatrixXd gm = g * middle;
    out.push_back({i, symmetrized(gm * g.transpose()), CovFlavor::finite_order});
  }
  return out;
}

IrfCovariance finite_order_cov(const MatrixSeq& ar, const MatrixXd& gamma, const MatrixXd& sigma,
                               std::size_t i) {
  if (i < 1) {
    throw InputError("covariance horizon must be >= 1");
  }
  return finite_order_covs(ar, gamma, sigma, i).back();
}

IrfCovariance finite_order_cov(const VarModel& model, std::size_t i) {
  return finite_order_cov(model.ar_hat, model.moment_matrix, model.sigma_u_hat, i);
}

std::vector<IrfCovariance> sieve_covs(const MatrixSeq& ar, const MatrixXd& gamma_p,
                                      const MatrixXd& sigma, std::size_t horizon) {
  check_inputs(ar, gamma_p, sigma);
  const MatrixXd gamma_inv = inverse_spd(gamma_p, "autocovariance matrix Gamma_p");
  const Index k = ar.dim();
  const MatrixSeq phi = ma_from_ar(ar, horizon);
  const auto powers = companion_column_powers(ar, horizon);
  const std::size_t h = horizon;

  // bracket(a, b) = J (A')^a Gamma^-1 A^b J'; inner(m, n) = Phi_m Sigma Phi_n'
  std::vector<MatrixXd> weighted;
  weighted.reserve(h);
  for (const auto& x : powers) {
    weighted.emplace_back(gamma_inv * x);
  }
  std::vector<MatrixXd> bracket(h * h);
  std::vector<MatrixXd> inner(h * h);
  for (std::size_t a = 0; a < h; ++a) {
    const MatrixXd phi_sigma = phi[a] * sigma;
    for (std::size_t b = 0; b < h; ++b) {
      bracket[a * h + b] = powers[a].transpose() * weighted[b];
      inner[a * h + b] = phi_sigma * phi[b].transpose();
    }
  }

  std::vector<IrfCovariance> out;
  out.reserve(h);
  for (std::size_t i = 1; i <= h; ++i) {
    MatrixXd cov = MatrixXd::Zero(k * k, k * k);
    for (std::size_t m = 0; m < i; ++m) {
      for (std::size_t n = 0; n < i; ++n) {
        add_kron(cov, bracket[(i - 1 - m) * h + (i - 1 - n)], inner[m * h + n]);
      }
    }
    out.push_back({i, symmetrized(cov), CovFlavor::sieve});
  }
  return out;
}

IrfCovariance sieve_cov(const MatrixSeq& ar, const MatrixXd& gamma_p, const MatrixXd& sigma,
                        std::size_t i) {
  if (i < 1) {
    throw InputError("covariance horizon must be >= 1");
  }
  return sieve_covs(ar, gamma_p, sigma, i).back();
}

IrfCovariance sieve_cov(const VarModel& model, const MatrixXd& gamma_p, std::size_t i) {
  return sieve_cov(model.ar_hat, gamma_p, model.sigma_u_hat, i);
}

IntervalSet delta_ci(const MatrixSeq& phi_hat, const std::vector<IrfCovariance>& covs,
                     double level, std::size_t sample_size, std::string_view method) {
  if (!(level > 0.0 && level < 1.0)) {
    throw InputError("confidence level must lie in (0, 1)");
  }
  if (sample_size == 0) {
    throw InputError("sample size must be positive");
  }
  const std::size_t horizon = phi_hat.size() - 1;
  if (covs.size() < horizon) {
    throw InputError("covariances do not cover every requested horizon");
  }
  const auto k = static_cast<std::size_t>(phi_hat.dim());
  const double z = normal_quantile(1.0 - (1.0 - level) / 2.0);
  const double t = static_cast<double>(sample_size);

  IntervalSet out{std::string(method), level, sample_size, {}, false};
  out.entries.reserve((horizon + 1) * k * k);
  for (std::size_t i = 0; i <= horizon; ++i) {
    if (i > 0 && (covs[i - 1].horizon != i ||
                  covs[i - 1].cov.rows() != static_cast<Index>(k * k))) {
      throw InputError("covariance list is not ordered by horizon 1..H");
    }
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        const double point = phi_hat[i](static_cast<Index>(r), static_cast<Index>(c));
        double half = 0.0;
        if (i > 0) {
          const auto idx = static_cast<Index>(c * k + r);  // vec() is column-major
          double var = covs[i - 1].cov(idx, idx);
          if (var < 0.0) {
            var = 0.0;
            out.clamped = true;
          }
          half = z * std::sqrt(var / t);
        }
        out.entries.push_back({i, r, c, point, point - half, point + half});
      }
    }
  }
  return out;
}

std::vector<HorizonValidity> horizon_gate(std::size_t p, std::size_t horizon) {
  std::vector<HorizonValidity> out;
  out.reserve(horizon + 1);
  for (std::size_t i = 0; i <= horizon; ++i) {
    out.push_back({i, i <= p});
  }
  return out;
}

IntervalSet delta_intervals(const VarFit& fit, const MatrixXd& y, std::size_t horizon,
                            double level, CovFlavor flavor) {
  const VarModel& model = fit.model;
  const Index regressors = model.dim * model.lags + (model.intercept ? 1 : 0);
  const MatrixSeq phi_hat = ma_from_ar(model.ar_hat, horizon);
  const auto t_eff = static_cast<std::size_t>(model.t_effective);
  if (horizon == 0) {
    return delta_ci(phi_hat, {}, level, t_eff, flavor == CovFlavor::sieve ? "S-LS" : "LS");
  }
  if (flavor == CovFlavor::finite_order) {
    const MatrixXd sigma = residual_cov(fit.residuals, DfMode::adjusted, regressors);
    return delta_ci(phi_hat, finite_order_covs(model.ar_hat, model.moment_matrix, sigma, horizon),
                    level, t_eff, "LS");
  }
  const MatrixXd sigma = residual_cov(fit.residuals, DfMode::ml, regressors);
  const MatrixXd gamma_p =
      build_gamma_p(sample_autocov(y, static_cast<std::size_t>(model.lags - 1)), model.lags);
  return delta_ci(phi_hat, sieve_covs(model.ar_hat, gamma_p, sigma, horizon), level, t_eff,
                  "S-LS");
}

}  // namespace sievevar
