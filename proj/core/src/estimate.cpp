#include "sievevar/estimate.hpp"

#include "sievevar/error.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

namespace sievevar {

namespace {

// reciprocal condition estimate below which the normal equations are refused
constexpr double kMinRcond = 1e-13;

}  // namespace

VarFit fit_var_ls(const MatrixXd& y, Index p, FitOptions options) {
  const Index t_total = y.rows();
  const Index k = y.cols();
  if (p < 1) {
    throw InputError("lag order p must be at least 1");
  }
  if (k < 1) {
    throw InputError("sample has no columns");
  }
  const Index n_reg = k * p + (options.intercept ? 1 : 0);
  if (t_total <= k * p + (options.intercept ? 1 : 0) + 1 || t_total <= p) {
    throw InputError("sample of length " + std::to_string(t_total) + " is too short for a VAR(" +
                     std::to_string(p) + ") in " + std::to_string(k) + " variables");
  }
  if (!y.allFinite()) {
    throw InputError("sample contains non-finite values");
  }
  const Index n = t_total - p;

  // Z stacks (y_{t-1}', ..., y_{t-p}', [1])' column by column
  MatrixXd z(n_reg, n);
  for (Index t = 0; t < n; ++t) {
    for (Index j = 0; j < p; ++j) {
      z.block(j * k, t, k, 1) = y.row(p + t - 1 - j).transpose();
    }
  }
  if (options.intercept) {
    z.row(n_reg - 1).setOnes();
  }
  const MatrixXd yt = y.bottomRows(n).transpose();  // K x n

  MatrixXd zz = MatrixXd::Zero(n_reg, n_reg);
  zz.selfadjointView<Eigen::Lower>().rankUpdate(z);
  zz = zz.selfadjointView<Eigen::Lower>();
  Eigen::LDLT<MatrixXd> ldlt(zz);
  double rcond = 0.0;
  if (ldlt.info() == Eigen::Success) {
    // an exactly zero pivot can slip past the norm-based estimate
    const VectorXd d = ldlt.vectorD().cwiseAbs();
    rcond = std::min(ldlt.rcond(), d.maxCoeff() > 0.0 ? d.minCoeff() / d.maxCoeff() : 0.0);
  }
  if (!(rcond > kMinRcond)) {
    std::ostringstream os;
    os << "singular regressor moment matrix in VAR(" << p << ") fit (condition number ~ "
       << (rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity()) << ")";
    throw NumericalError(os.str());
  }
  const MatrixXd coef = ldlt.solve(z * yt.transpose()).transpose();  // K x n_reg
  MatrixXd resid = yt;
  resid.noalias() -= coef * z;

  const MatrixXd lag_block = coef.leftCols(k * p);
  std::optional<VectorXd> intercept;
  MatrixXd moment = zz.topLeftCorner(k * p, k * p) / static_cast<double>(n);
  if (options.intercept) {
    intercept = coef.col(n_reg - 1);
    const VectorXd zbar = z.topRows(k * p).rowwise().mean();
    moment -= zbar * zbar.transpose();
  }

  VarModel model{k,
                 p,
                 MatrixSeq::from_stacked(lag_block),
                 residual_cov(resid, options.df, n_reg),
                 std::move(intercept),
                 std::move(moment),
                 n};
  return VarFit{std::move(model), std::move(resid)};
}

VarFit fit_var_ls(const SamplePath& y, Index p, FitOptions options) {
  return fit_var_ls(y.values, p, options);
}

MatrixXd residual_cov(const MatrixXd& residuals, DfMode mode, Index regressors) {
  const Index n = residuals.cols();
  if (n < 2) {
    throw InputError("residual covariance needs at least 2 residual rows");
  }
  const Index d = mode == DfMode::ml ? n : n - regressors;
  if (d <= 0) {
    throw InputError("non-positive degrees of freedom (" + std::to_string(d) +
                     ") for residual covariance");
  }
  MatrixXd s = MatrixXd::Zero(residuals.rows(), residuals.rows());
  s.selfadjointView<Eigen::Lower>().rankUpdate(residuals);
  s = s.selfadjointView<Eigen::Lower>();
  return s / static_cast<double>(d);
}

AutocovSet sample_autocov(const MatrixXd& y, std::size_t h_max) {
  const Index t_total = y.rows();
  if (static_cast<Index>(h_max) >= t_total) {
    throw InputError("autocovariance lag " + std::to_string(h_max) +
                     " must be below the sample length " + std::to_string(t_total));
  }
  const MatrixXd centered = (y.rowwise() - y.colwise().mean()).transpose();  // K x T
  AutocovSet out{y.cols(), {}};
  out.gammas.reserve(h_max + 1);
  for (std::size_t h = 0; h <= h_max; ++h) {
    const auto hi = static_cast<Index>(h);
    const Index len = t_total - hi;
    out.gammas.emplace_back(centered.rightCols(len) * centered.leftCols(len).transpose() /
                            static_cast<double>(t_total));
  }
  // Gamma(0) is symmetric in exact arithmetic; remove roundoff asymmetry
  out.gammas[0] = (0.5 * (out.gammas[0] + out.gammas[0].transpose())).eval();
  return out;
}

MatrixXd build_gamma_p(const AutocovSet& acov, Index p) {
  if (p < 1 || static_cast<std::size_t>(p) > acov.gammas.size()) {
    throw InputError("autocovariance set does not cover lags 0.." + std::to_string(p - 1));
  }
  const Index k = acov.dim;
  MatrixXd g(k * p, k * p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      // block (i, j) = E[y_{t-i} y_{t-j}'], matching the regressor moment layout
      g.block(i * k, j * k, k, k) = i >= j ? acov.gammas[static_cast<std::size_t>(i - j)].transpose()
                                           : acov.gammas[static_cast<std::size_t>(j - i)];
    }
  }
  return g;
}

}  // namespace sievevar
