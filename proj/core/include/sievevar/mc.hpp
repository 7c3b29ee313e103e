#pragma once

#include "sievevar/dgp.hpp"
#include "sievevar/estimate.hpp"
#include "sievevar/matrix_seq.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sievevar {

/// Interval families compared in the coverage experiments.
enum class Method {
  ls,        // finite-order delta method
  sieve_ls,  // sieve delta method
  boot,      // residual bootstrap percentile
  boot_db,   // bias-corrected bootstrap-after-bootstrap
};

[[nodiscard]] std::string_view method_name(Method m) noexcept;
[[nodiscard]] std::optional<Method> parse_method(std::string_view name) noexcept;

struct ExperimentConfig {
  VarmaSpec dgp = default_desk_dgp();
  std::size_t sample_size = 300;  // T
  std::size_t lags = 10;          // fitted p
  std::size_t horizon = 30;       // H
  double level = 0.95;
  std::vector<Method> methods{Method::ls, Method::sieve_ls, Method::boot, Method::boot_db};
  std::size_t replications = 1000;  // R
  std::size_t bootstrap_draws = 300;  // M
  std::uint64_t master_seed = 20240501;
  unsigned workers = 0;  // 0: one per hardware thread
  std::optional<std::size_t> burn_in;
  FitOptions fit{};
};

/// Throws InputError on an inconsistent configuration.
void validate(const ExperimentConfig& cfg);

/// Per-replication outcome. hits/lengths are indexed [method][h K^2 + r K + c].
struct ReplicationRecord {
  bool failed = false;
  std::vector<std::vector<std::uint8_t>> hits;
  std::vector<std::vector<double>> lengths;
};

struct McCell {
  double coverage = 0.0;
  double avg_length = 0.0;

  friend bool operator==(const McCell&, const McCell&) = default;
};

struct McSummary {
  std::vector<Method> methods;
  std::size_t horizon = 0;
  Index dim = 0;
  std::size_t replications = 0;  // successful replications aggregated
  std::size_t failures = 0;
  std::vector<std::vector<McCell>> by_horizon;  // [method][h]
  std::vector<std::vector<McCell>> by_entry;    // [method][h K^2 + r K + c]

  friend bool operator==(const McSummary&, const McSummary&) = default;
};

/// Means over successful replications, taken in replication order.
[[nodiscard]] McSummary aggregate(std::span<const Method> methods, std::size_t horizon, Index dim,
                                  std::span<const ReplicationRecord> records);

/// One replication on stream (master_seed, r): simulate, fit, build every
/// method's intervals and score them against `truth`.
[[nodiscard]] ReplicationRecord run_replication(const ExperimentConfig& cfg,
                                                const MatrixSeq& truth, std::size_t r);

/// Replications run on cfg.workers threads; the result does not depend on
/// the worker count. Throws NumericalError when more than 1% fail.
[[nodiscard]] McSummary run_experiment(const ExperimentConfig& cfg);

/// Absolute coverage thresholds: under-coverage below `under`, over-coverage above `over`.
struct CoverageThresholds {
  double under = 0.85;
  double over = 0.99;

  /// level - 0.1 and min(1, level + 0.04).
  [[nodiscard]] static CoverageThresholds for_level(double level) noexcept;
};

enum class FlagKind { under, over };

struct CoverageFlag {
  Method method = Method::ls;
  std::size_t horizon = 0;
  FlagKind kind = FlagKind::under;
  double coverage = 0.0;
};

/// Horizon 0 is never flagged: Phi_0 = I is known and always covered.
[[nodiscard]] std::vector<CoverageFlag> coverage_flags(const McSummary& summary,
                                                       CoverageThresholds thresholds);

/// Replaces the AR part of `base` with counterexample_ar(base.ar[0], plan).
[[nodiscard]] VarmaSpec counterexample_dgp(const VarmaSpec& base, std::span<const LagScale> plan);

struct CounterexampleReport {
  McSummary summary;
  std::vector<CoverageFlag> flags;
};

/// run_experiment plus coverage flags; cfg.dgp should come from counterexample_dgp.
[[nodiscard]] CounterexampleReport counterexample_experiment(const ExperimentConfig& cfg,
                                                             CoverageThresholds thresholds);

}  // namespace sievevar
