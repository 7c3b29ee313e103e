// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance               run all criteria
//   acceptance --criterion N run one

#include "../oracles.hpp"

#include "commands.hpp"

#include "sievevar/bootstrap.hpp"
#include "sievevar/delta.hpp"
#include "sievevar/dgp.hpp"
#include "sievevar/diag.hpp"
#include "sievevar/estimate.hpp"
#include "sievevar/mc.hpp"
#include "sievevar/var_core.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace sievevar;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return buf;
}

MatrixXd random_spd(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  MatrixXd b(n, n + 3);
  for (Index i = 0; i < b.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) b(i, j) = nd(rng);
  }
  return b * b.transpose() / static_cast<double>(n) + 0.1 * MatrixXd::Identity(n, n);
}

double rel_gap(const MatrixXd& a, const MatrixXd& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return scale == 0.0 ? 0.0 : (a - b).cwiseAbs().maxCoeff() / scale;
}

Outcome rate_arithmetic() {
  const double cubic = sample_growth(9, 10, GrowthRule::cubic);
  const double expo = sample_growth(9, 10, GrowthRule::exponential);
  const bool cubic_ok = std::round(cubic * 100.0) / 100.0 == 37.17;
  const bool expo_ok = std::round(expo * 100.0) / 100.0 == 171.83 && std::round(expo / 10.0) == 17.0;
  return {cubic_ok && expo_ok, fmt("cubic %.4f%%, exponential %.4f%%", cubic, expo)};
}

Outcome algebraic_equivalence() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> kd(1, 3);
  std::uniform_int_distribution<int> pd(1, 5);
  double worst = 0.0;
  for (int model = 0; model < 100; ++model) {
    const Index k = kd(rng);
    const auto p = static_cast<std::size_t>(pd(rng));
    const auto ar = oracle::random_stable_ar(k, p, rng, 0.9);
    const MatrixXd gamma = random_spd(k * static_cast<Index>(p), rng);
    const MatrixXd sigma = random_spd(k, rng);
    const auto a = finite_order_covs(ar, gamma, sigma, 10);
    const auto b = sieve_covs(ar, gamma, sigma, 10);
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst = std::max(worst, rel_gap(a[i].cov, b[i].cov));
    }
  }
  return {worst <= 1e-10, fmt("100 models, i <= 10, max relative gap %.3e", worst)};
}

Outcome jacobian_correctness() {
  std::mt19937_64 rng(20240602);
  std::uniform_int_distribution<int> kd(1, 3);
  std::uniform_int_distribution<int> pd(1, 5);
  double worst = 0.0;
  for (int model = 0; model < 50; ++model) {
    const Index k = kd(rng);
    const auto p = static_cast<std::size_t>(pd(rng));
    const auto ar = oracle::random_stable_ar(k, p, rng, 0.85);
    const Eigen::VectorXd theta = ar.stacked().reshaped();
    for (std::size_t i = 1; i <= 2 * p; ++i) {
      auto f = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        const MatrixXd stacked = x.reshaped(k, k * static_cast<Index>(p));
        return ma_from_ar(MatrixSeq::from_stacked(stacked), i)[i].reshaped();
      };
      const MatrixXd fd = oracle::finite_difference_jacobian(f, theta, 1e-5);
      worst = std::max(worst, (irf_jacobian(ar, i) - fd).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-6, fmt("50 models, i <= 2p, max abs gap %.3e", worst)};
}

Outcome recursion_companion() {
  std::mt19937_64 rng(20240603);
  std::uniform_int_distribution<int> kd(1, 4);
  std::uniform_int_distribution<int> pd(1, 8);
  double worst = 0.0;
  for (int model = 0; model < 100; ++model) {
    const Index k = kd(rng);
    const auto p = static_cast<std::size_t>(pd(rng));
    const auto ar = oracle::random_stable_ar(k, p, rng, 0.95);
    const auto phi = ma_from_ar(ar, p);
    for (std::size_t i = 0; i <= p; ++i) {
      worst = std::max(worst, (phi[i] - ma_via_companion(ar, i)).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-10, fmt("100 models, i <= p, max abs gap %.3e", worst)};
}

Outcome coverage_calibration() {
  ExperimentConfig cfg;
  cfg.dgp = VarmaSpec(MatrixSeq::ar(2, {}), MatrixSeq::ar(2, {}), MatrixXd::Identity(2, 2));
  cfg.sample_size = 500;
  cfg.lags = 1;
  cfg.horizon = 1;
  cfg.level = 0.95;
  cfg.methods = {Method::ls};
  cfg.replications = 2000;
  cfg.master_seed = 20240604;
  const auto s = run_experiment(cfg);
  const double cov = s.by_horizon[0][1].coverage;
  return {cov >= 0.93 && cov <= 0.97,
          fmt("white noise K=2, p=1, T=500, R=%zu: LS coverage at i=1 = %.4f", s.replications,
              cov)};
}

Outcome desk_scale_lengths() {
  ExperimentConfig cfg;
  cfg.sample_size = 300;
  cfg.lags = 10;
  cfg.horizon = 30;
  cfg.level = 0.95;
  cfg.methods = {Method::ls, Method::sieve_ls, Method::boot};
  cfg.replications = 200;
  cfg.bootstrap_draws = 100;
  cfg.master_seed = 20240501;
  const auto small = run_experiment(cfg);
  cfg.sample_size = 1000;
  const auto large = run_experiment(cfg);

  const auto sieve_gap = [&](const McSummary& s) {
    double worst = 0.0;
    for (std::size_t i = 1; i < cfg.lags; ++i) {
      worst = std::max(worst, std::abs(s.by_horizon[1][i].avg_length /
                                           s.by_horizon[0][i].avg_length - 1.0));
    }
    return worst;
  };
  const double gap_large = sieve_gap(large);
  const double gap_small = sieve_gap(small);
  const bool a = gap_large <= 0.10 && gap_small > 0.10;

  double boot_gap = 0.0;
  std::size_t worst_h = 0;
  for (std::size_t i = 1; i <= cfg.horizon; ++i) {
    const double g =
        std::abs(small.by_horizon[2][i].avg_length / small.by_horizon[0][i].avg_length - 1.0);
    if (g > boot_gap) {
      boot_gap = g;
      worst_h = i;
    }
  }
  std::size_t within = 0;
  for (std::size_t i = 1; i <= cfg.horizon; ++i) {
    within += std::abs(small.by_horizon[2][i].avg_length / small.by_horizon[0][i].avg_length -
                       1.0) <= 0.15;
  }
  const bool b = boot_gap <= 0.15;
  return {a && b,
          fmt("(a) %s: max |S-LS/LS - 1| over i < p is %.3f at T=1000, %.3f at T=300 "
              "(need <= 0.10 and > 0.10); (b) %s: max |BOOT/LS - 1| at T=300 is %.3f at i=%zu, "
              "%zu of %zu horizons within 0.15",
              a ? "pass" : "FAIL", gap_large, gap_small, b ? "pass" : "FAIL", boot_gap, worst_h,
              within, cfg.horizon)};
}

Outcome counterexample_direction() {
  ExperimentConfig cfg;
  cfg.dgp = counterexample_dgp(default_desk_dgp(), default_counterexample_plan());
  cfg.sample_size = 300;
  cfg.horizon = 30;
  cfg.level = 0.95;
  cfg.methods = {Method::ls, Method::sieve_ls};
  cfg.replications = 500;
  cfg.master_seed = 20240501;
  const auto thresholds = CoverageThresholds::for_level(cfg.level);

  cfg.lags = 10;
  const auto p10 = counterexample_experiment(cfg, thresholds);
  std::size_t under10 = 0;
  std::size_t over10 = 0;
  for (const auto& f : p10.flags) {
    if (f.horizon > 10) {
      (f.kind == FlagKind::under ? under10 : over10) += 1;
    }
  }
  cfg.lags = 30;
  const auto p30 = counterexample_experiment(cfg, thresholds);
  std::size_t under30 = 0;
  for (const auto& f : p30.flags) {
    under30 += f.kind == FlagKind::under && f.horizon <= 14;
  }
  return {under10 > 0 && over10 > 0 && under30 == 0,
          fmt("p=10: %zu under / %zu over flags at i > 10; p=30: %zu under flags at i <= 14",
              under10, over10, under30)};
}

Outcome bias_correction() {
  const VarmaSpec spec(MatrixSeq::ar(1, {MatrixXd::Constant(1, 1, 0.9)}), MatrixSeq::ar(1, {}),
                       MatrixXd::Identity(1, 1));
  const RandomStream root(20240608);
  double raw = 0.0;
  double corrected = 0.0;
  const int reps = 500;
  for (int r = 0; r < reps; ++r) {
    const auto path = simulate_varma(spec, 80, default_burn_in(spec), root.substream(r).substream(0));
    const auto fit = fit_var_ls(path, 1);
    const auto bc = estimate_bias_correction(fit, path.values, 200, root.substream(r).substream(1));
    raw += fit.model.ar_hat[0](0, 0);
    corrected += bc.corrected[0](0, 0);
  }
  raw /= reps;
  corrected /= reps;
  return {std::abs(corrected - 0.9) < std::abs(raw - 0.9),
          fmt("mean LS %.4f, mean bias-corrected %.4f (true 0.9)", raw, corrected)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism() {
  const fs::path root =
      fs::temp_directory_path() / ("sievevar-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(root);
  const auto run = [&](const std::string& name, const std::string& workers) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = app::run_cli({"mc", "--preset", "fig2-desk", "--seed", "20240501",
                                   "--workers", workers, "--out", (root / name).string()},
                                  out, err);
    return code;
  };
  const int c1 = run("w1a", "1");
  const int c2 = run("w1b", "1");
  const int c3 = run("w4", "4");
  bool same = c1 == 0 && c2 == 0 && c3 == 0;
  std::size_t bytes = 0;
  for (const char* file : {"mc_results.csv", "mc_entries.csv"}) {
    const auto a = slurp(root / "w1a" / file);
    same = same && !a.empty() && a == slurp(root / "w1b" / file) && a == slurp(root / "w4" / file);
    bytes += a.size();
  }
  fs::remove_all(root);
  return {same, fmt("fig2-desk x3 (workers 1, 1, 4): exit %d/%d/%d, %zu bytes compared", c1, c2,
                    c3, bytes)};
}

Outcome diagnostics_exactness() {
  const double tail = tail_norm(GeometricDecay{1.0, 0.5}, 3, 100);
  const double ratio = assumption_ratios(10, 300).ratio_p3_T;
  return {std::abs(tail - 1.25) <= 1e-12 && std::abs(ratio - 10.0 / 3.0) <= 1e-12,
          fmt("tail_norm = %.17g, p^3/T = %.17g", tail, ratio)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "rate arithmetic", rate_arithmetic},
      {2, "sieve/finite-order covariance equivalence", algebraic_equivalence},
      {3, "IRF Jacobian vs finite differences", jacobian_correctness},
      {4, "recursion vs companion", recursion_companion},
      {5, "white-noise coverage calibration", coverage_calibration},
      {6, "desk-scale LS/S-LS/BOOT lengths", desk_scale_lengths},
      {7, "counterexample coverage direction", counterexample_direction},
      {8, "bias-correction sanity", bias_correction},
      {9, "mc determinism across runs and workers", determinism},
      {10, "diagnostics exactness", diagnostics_exactness},
  };
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    only = std::atoi(argv[2]);
  } else if (argc != 1) {
    std::cerr << "usage: acceptance [--criterion N]\n";
    return 2;
  }

  int failed = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) {
      continue;
    }
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail
              << fmt(" (%.1fs)", secs) << std::endl;
    failed += o.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::cerr << "no criterion " << only << '\n';
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
