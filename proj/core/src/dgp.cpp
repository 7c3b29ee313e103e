#include "sievevar/dgp.hpp"

#include "sievevar/error.hpp"
#include "sievevar/var_core.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace sievevar {

namespace {

std::string format_radius(double r) {
  std::ostringstream os;
  os.precision(6);
  os << r;
  return os.str();
}

MatrixSeq negated(const MatrixSeq& seq) {
  std::vector<MatrixXd> out;
  out.reserve(seq.size());
  for (const auto& m : seq.entries()) {
    out.emplace_back(-m);
  }
  return MatrixSeq::ar(seq.dim(), std::move(out));
}

}  // namespace

VarmaSpec::VarmaSpec(MatrixSeq ar_coefs, MatrixSeq ma_coefs, MatrixXd innovation_cov)
    : dim(ar_coefs.dim()),
      ar(std::move(ar_coefs)),
      ma(std::move(ma_coefs)),
      sigma_u(std::move(innovation_cov)) {
  if (ar.base() != IndexBase::one || ma.base() != IndexBase::one) {
    throw InputError("VARMA coefficient lists must be lag-indexed (first entry is lag 1)");
  }
  if (ma.dim() != dim || sigma_u.rows() != dim || sigma_u.cols() != dim) {
    throw InputError("VARMA components disagree on the dimension K");
  }
}

void validate(const VarmaSpec& spec) {
  const double ar_radius = spectral_radius(spec.ar);
  if (classify_stability(ar_radius) != Stability::stable) {
    throw InputError("unstable AR part: companion spectral radius " + format_radius(ar_radius) +
                     " is not below 1");
  }
  // det(I + sum M_j z^j) != 0 on the closed unit disk iff the companion of -M is stable
  const double ma_radius = spectral_radius(negated(spec.ma));
  if (classify_stability(ma_radius) != Stability::stable) {
    throw InputError("non-invertible MA part: companion spectral radius " +
                     format_radius(ma_radius) + " is not below 1");
  }
  if (!spec.sigma_u.allFinite() ||
      (spec.sigma_u - spec.sigma_u.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InputError("innovation covariance sigma_u is not symmetric");
  }
  Eigen::LLT<MatrixXd> llt(spec.sigma_u);
  if (llt.info() != Eigen::Success) {
    throw InputError("innovation covariance sigma_u is not positive definite");
  }
}

VarmaSpec default_desk_dgp() {
  MatrixXd a1(2, 2);
  a1 << 0.5, 0.1, 0.2, 0.4;
  MatrixXd m1(2, 2);
  m1 << 0.3, 0.0, 0.1, 0.2;
  return VarmaSpec(MatrixSeq::ar(2, {a1}), MatrixSeq::ar(2, {m1}), MatrixXd::Identity(2, 2));
}

std::size_t default_burn_in(const VarmaSpec& spec) noexcept { return 200 + spec.ar.size(); }

SamplePath simulate_varma(const VarmaSpec& spec, std::size_t length, std::size_t burn_in,
                          RandomStream stream) {
  if (length < 1) {
    throw InputError("simulation length T must be at least 1");
  }
  validate(spec);
  const Index k = spec.dim;
  const std::size_t p = spec.ar.size();
  const std::size_t q = spec.ma.size();
  const std::size_t total = burn_in + length;
  const MatrixXd chol = spec.sigma_u.llt().matrixL();
  const StreamId record = stream.id();

  MatrixXd y = MatrixXd::Zero(k, static_cast<Index>(total));
  MatrixXd u(k, static_cast<Index>(total));
  VectorXd z(k);
  for (std::size_t t = 0; t < total; ++t) {
    for (Index r = 0; r < k; ++r) {
      z(r) = stream.normal();
    }
    const auto tc = static_cast<Index>(t);
    u.col(tc).noalias() = chol * z;
    VectorXd yt = u.col(tc);
    for (std::size_t j = 1; j <= std::min(t, p); ++j) {
      yt.noalias() += spec.ar[j - 1] * y.col(tc - static_cast<Index>(j));
    }
    for (std::size_t j = 1; j <= std::min(t, q); ++j) {
      yt.noalias() += spec.ma[j - 1] * u.col(tc - static_cast<Index>(j));
    }
    y.col(tc) = yt;
  }
  SamplePath out{y.rightCols(static_cast<Index>(length)).transpose(), record};
  if (!out.values.allFinite()) {
    throw NumericalError("simulated path contains non-finite values");
  }
  return out;
}

std::vector<LagScale> default_counterexample_plan() {
  return {{1, 1.0}, {12, 1.0 / 5.0}, {14, 1.0 / 10.0}};
}

MatrixSeq counterexample_ar(const MatrixXd& base, std::span<const LagScale> plan) {
  if (base.rows() != base.cols() || base.rows() < 1) {
    throw InputError("counterexample base must be a square matrix");
  }
  std::size_t max_lag = 0;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (plan[i].lag == 0) {
      throw InputError("counterexample lags must be positive");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (plan[j].lag == plan[i].lag) {
        throw InputError("counterexample lags must be distinct");
      }
    }
    max_lag = std::max(max_lag, plan[i].lag);
  }
  const Index k = base.rows();
  std::vector<MatrixXd> seq(max_lag, MatrixXd::Zero(k, k));
  for (const auto& [lag, scale] : plan) {
    seq[lag - 1] = base * scale;
  }
  return MatrixSeq::ar(k, std::move(seq));
}

MatrixSeq counterexample_ar(const MatrixXd& base) {
  const auto plan = default_counterexample_plan();
  return counterexample_ar(base, plan);
}

MatrixSeq varma_true_irf(const VarmaSpec& spec, std::size_t horizon) {
  const Index k = spec.dim;
  std::vector<MatrixXd> phi;
  phi.reserve(horizon + 1);
  phi.emplace_back(MatrixXd::Identity(k, k));
  for (std::size_t i = 1; i <= horizon; ++i) {
    MatrixXd acc = i <= spec.ma.size() ? spec.ma[i - 1] : MatrixXd::Zero(k, k);
    for (std::size_t j = 1; j <= std::min(i, spec.ar.size()); ++j) {
      acc.noalias() += spec.ar[j - 1] * phi[i - j];
    }
    phi.push_back(std::move(acc));
  }
  return MatrixSeq::ma(k, std::move(phi));
}

MatrixSeq varma_true_ar(const VarmaSpec& spec, std::size_t lags) {
  // (I + M(L)) (I - sum A_i L^i) = I - a(L), matched coefficient by coefficient
  const Index k = spec.dim;
  const std::size_t q = spec.ma.size();
  std::vector<MatrixXd> a;
  a.reserve(lags);
  for (std::size_t i = 1; i <= lags; ++i) {
    MatrixXd acc = spec.ar.lag(i);
    if (i <= q) {
      acc += spec.ma[i - 1];
    }
    for (std::size_t j = 1; j <= std::min(i - 1, q); ++j) {
      acc.noalias() -= spec.ma[j - 1] * a[i - j - 1];
    }
    a.push_back(std::move(acc));
  }
  return MatrixSeq::ar(k, std::move(a));
}

}  // namespace sievevar
