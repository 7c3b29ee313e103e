#include "sievevar/bootstrap.hpp"
#include "sievevar/dgp.hpp"
#include "sievevar/error.hpp"
#include "sievevar/estimate.hpp"
#include "sievevar/var_core.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace sievevar;

namespace {

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

SamplePath desk_path(std::size_t t, std::uint64_t seed) {
  return simulate_varma(default_desk_dgp(), t, 201, RandomStream(seed));
}

}  // namespace

TEST_CASE("residual bootstrap from zeros stays at zero") {
  VarModel model{1, 1, MatrixSeq::ar(1, {scalar(0.5)}), scalar(1.0), std::nullopt, scalar(1.0), 9};
  const MatrixXd resid = MatrixXd::Zero(1, 9);
  const MatrixXd original = MatrixXd::Zero(10, 1);
  const auto path = residual_bootstrap_sample(model, resid, original, RandomStream(1));
  CHECK(path.values.rows() == 10);
  CHECK(path.values.isZero(0.0));
}

TEST_CASE("residual bootstrap is deterministic and starts from an observed block") {
  const auto y = desk_path(200, 3);
  const auto fit = fit_var_ls(y, 2);
  const auto a = residual_bootstrap_sample(fit.model, fit.residuals, y.values, RandomStream(9));
  const auto b = residual_bootstrap_sample(fit.model, fit.residuals, y.values, RandomStream(9));
  CHECK(a.values == b.values);
  bool found = false;
  for (Index s = 0; s + 1 < y.values.rows(); ++s) {
    if (y.values.middleRows(s, 2) == a.values.topRows(2)) found = true;
  }
  CHECK(found);
}

TEST_CASE("resampled residuals are centered (unbiasedness over 10^4 draws)") {
  // a VAR with zero coefficients makes the pseudo-sample equal to the resampled residuals
  VarModel model{1, 1, MatrixSeq::ar(1, {scalar(0.0)}), scalar(1.0), std::nullopt, scalar(1.0), 19};
  MatrixXd resid(1, 19);
  for (Index i = 0; i < 19; ++i) resid(0, i) = std::pow(static_cast<double>(i), 1.5);  // skewed
  const MatrixXd centered = resid.array() - resid.mean();
  const double sd = std::sqrt(centered.array().square().mean());
  const MatrixXd original = MatrixXd::Zero(20, 1);
  const RandomStream root(77);
  double sum = 0.0;
  const int m = 10000;
  for (int r = 0; r < m; ++r) {
    const auto path = residual_bootstrap_sample(model, resid, original, root.substream(r));
    sum += path.values(5, 0);
  }
  CHECK(std::abs(sum / m) < 3.0 * sd / std::sqrt(m));
}

TEST_CASE("bootstrap_irf_distribution") {
  const auto y = desk_path(150, 4);
  const auto draws = bootstrap_irf_distribution(y.values, 2, 6, 40, RandomStream(5));
  REQUIRE(draws.draws.size() == 40);
  for (const auto& d : draws.draws) {
    CHECK(d[0] == MatrixXd::Identity(2, 2));
    CHECK(d.size() == 7);
  }
  CHECK_THROWS_AS((void)bootstrap_irf_distribution(y.values, 2, 6, 1, RandomStream(5)),
                  InputError);

  SUBCASE("replication r depends only on its own stream") {
    const auto fit = fit_var_ls(y, 2);
    const auto more = bootstrap_irf_distribution(fit, y.values, 6, 60, RandomStream(5));
    for (std::size_t r = 0; r < 40; ++r) {
      CHECK(more.draws[r][3] == draws.draws[r][3]);
    }
  }
}

TEST_CASE("white-noise bootstrap draws of Phi_1 center on zero") {
  const VarmaSpec wn(MatrixSeq::ar(1, {}), MatrixSeq::ar(1, {}), scalar(1.0));
  const auto y = simulate_varma(wn, 5000, 0, RandomStream(12));
  const auto draws = bootstrap_irf_distribution(y.values, 1, 1, 200, RandomStream(13));
  double sum = 0.0;
  double sq = 0.0;
  for (const auto& d : draws.draws) {
    sum += d[1](0, 0);
    sq += d[1](0, 0) * d[1](0, 0);
  }
  const double mean = sum / 200.0;
  const double disp = std::sqrt(sq / 200.0 - mean * mean);
  // bootstrap draws center on the sample estimate, which itself is O(1/sqrt(T)) from 0
  CHECK(std::abs(mean) < 3.0 * disp / std::sqrt(200.0) + 3.0 / std::sqrt(5000.0));
}

TEST_CASE("percentile_indices and percentile_ci") {
  CHECK(percentile_indices(100, 0.90).lower == 5);
  CHECK(percentile_indices(100, 0.90).upper == 95);
  CHECK(percentile_indices(300, 0.95).lower == 8);
  CHECK(percentile_indices(300, 0.95).upper == 293);
  CHECK(percentile_indices(10, 0.999).lower == 1);

  BootstrapDraws draws{100, 1, 1, {}, {}};
  for (int b = 100; b >= 1; --b) {  // unsorted on purpose
    draws.draws.push_back(MatrixSeq::ma(1, {scalar(1.0), scalar(b / 100.0)}));
  }
  const auto set = percentile_ci(draws, 0.90);
  REQUIRE(set.entries.size() == 2);
  CHECK(set.entries[1].lower == doctest::Approx(0.05));
  CHECK(set.entries[1].upper == doctest::Approx(0.95));
  CHECK(set.entries[0].lower == 1.0);
  CHECK(set.entries[0].upper == 1.0);

  BootstrapDraws flat{5, 1, 1, {}, {}};
  for (int b = 0; b < 5; ++b) flat.draws.push_back(MatrixSeq::ma(1, {scalar(1.0), scalar(0.3)}));
  const auto fs = percentile_ci(flat, 0.95);
  CHECK(fs.entries[1].lower == 0.3);
  CHECK(fs.entries[1].upper == 0.3);
}

TEST_CASE("property: percentile intervals contain the median for level >= 0.5") {
  const auto y = desk_path(120, 6);
  const auto draws = bootstrap_irf_distribution(y.values, 1, 4, 31, RandomStream(7));
  for (double level : {0.5, 0.68, 0.9, 0.95, 0.99}) {
    for (const auto& e : percentile_ci(draws, level).entries) {
      CHECK(e.lower <= e.point);  // point defaults to the median
      CHECK(e.point <= e.upper);
    }
  }
}

TEST_CASE("apply_bias_correction guard") {
  MatrixXd a(1, 1);
  a << 0.95;
  SUBCASE("zero bias short-circuits") {
    const auto c = apply_bias_correction(a, MatrixXd::Zero(1, 1));
    CHECK(c.delta == 1.0);
    CHECK(c.stacked == a);
  }
  SUBCASE("small bias on a well-inside model is applied in full") {
    MatrixXd small(1, 1);
    small << 0.01;
    MatrixXd inside(1, 1);
    inside << 0.5;
    const auto c = apply_bias_correction(inside, small);
    CHECK(c.delta == 1.0);
    CHECK(c.stacked(0, 0) == doctest::Approx(0.49));
  }
  SUBCASE("correction pushing past the unit root is shrunk") {
    MatrixXd bias(1, 1);
    bias << -0.1;  // 0.95 + 0.1 would be explosive
    const auto c = apply_bias_correction(a, bias);
    CHECK(c.delta < 1.0);
    CHECK(c.delta >= 0.0);
    CHECK(std::abs(c.stacked(0, 0)) < 1.0);
    CHECK(c.delta == doctest::Approx(0.49));
  }
  SUBCASE("already explosive estimate cancels the correction") {
    MatrixXd exp_a(1, 1);
    exp_a << 1.2;
    MatrixXd bias(1, 1);
    bias << -0.01;
    const auto c = apply_bias_correction(exp_a, bias);
    CHECK(c.delta == 0.0);
    CHECK(c.stacked == exp_a);
  }
}

TEST_CASE("bias-corrected bootstrap") {
  const auto y = desk_path(150, 8);
  const auto fit = fit_var_ls(y, 2);

  SUBCASE("zero bias equals the plain bootstrap of the corrected model") {
    const MatrixXd zero = MatrixXd::Zero(2, 4);
    const auto a = corrected_bootstrap_draws(fit, y.values, fit.model.ar_hat, zero, 5, 30,
                                             RandomStream(3));
    const auto b = bootstrap_irf_distribution(fit, y.values, 5, 30, RandomStream(3));
    for (std::size_t r = 0; r < 30; ++r) {
      for (std::size_t h = 0; h <= 5; ++h) {
        CHECK(a.draws[r][h] == b.draws[r][h]);
      }
    }
    const auto pa = percentile_ci(a, 0.9);
    const auto pb = percentile_ci(b, 0.9);
    for (std::size_t e = 0; e < pa.entries.size(); ++e) {
      CHECK(pa.entries[e].lower == pb.entries[e].lower);
      CHECK(pa.entries[e].upper == pb.entries[e].upper);
    }
  }

  SUBCASE("output is deterministic and stationary") {
    const auto a = bias_corrected_bootstrap(fit, y.values, 5, 30, 0.9, RandomStream(4));
    const auto b = bias_corrected_bootstrap(y.values, 2, 5, 30, 0.9, RandomStream(4));
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t e = 0; e < a.entries.size(); ++e) {
      CHECK(a.entries[e].lower == b.entries[e].lower);
      CHECK(a.entries[e].upper == b.entries[e].upper);
      if (a.entries[e].horizon == 0) CHECK(a.entries[e].length() == 0.0);
    }
    CHECK(a.method == "BOOT-db");
    const auto bc = estimate_bias_correction(fit, y.values, 30, RandomStream(4).substream(0));
    CHECK((spectral_radius(bc.corrected) < 1.0 || bc.delta == 0.0));
  }
}

TEST_CASE("bias correction moves a persistent AR(1) estimate toward the truth") {
  const VarmaSpec spec(MatrixSeq::ar(1, {scalar(0.9)}), MatrixSeq::ar(1, {}), scalar(1.0));
  const RandomStream root(2718);
  double raw = 0.0;
  double corrected = 0.0;
  const int runs = 100;
  for (int r = 0; r < runs; ++r) {
    const auto y = simulate_varma(spec, 80, 200, root.substream(r));
    const auto fit = fit_var_ls(y, 1);
    const auto bc = estimate_bias_correction(fit, y.values, 100, root.substream(r).substream(1));
    raw += fit.model.ar_hat[0](0, 0);
    corrected += bc.corrected[0](0, 0);
  }
  CHECK(std::abs(corrected / runs - 0.9) < std::abs(raw / runs - 0.9));
}
