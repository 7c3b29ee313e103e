#include "sievevar/mc.hpp"

#include "sievevar/bootstrap.hpp"
#include "sievevar/delta.hpp"
#include "sievevar/error.hpp"
#include "sievevar/var_core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace sievevar {

namespace {

constexpr std::uint64_t kRetryTag = 0x5EED;

struct MethodInfo {
  Method method;
  std::string_view name;
};

constexpr MethodInfo kMethods[] = {
    {Method::ls, "LS"},
    {Method::sieve_ls, "S-LS"},
    {Method::boot, "BOOT"},
    {Method::boot_db, "BOOT-db"},
};

void score(const IntervalSet& set, const MatrixSeq& truth, std::vector<std::uint8_t>& hits,
           std::vector<double>& lengths) {
  hits.resize(set.entries.size());
  lengths.resize(set.entries.size());
  for (std::size_t e = 0; e < set.entries.size(); ++e) {
    const auto& entry = set.entries[e];
    const double value =
        truth[entry.horizon](static_cast<Index>(entry.row), static_cast<Index>(entry.col));
    hits[e] = entry.contains(value) ? 1 : 0;
    lengths[e] = entry.length();
  }
}

ReplicationRecord attempt_replication(const ExperimentConfig& cfg, const MatrixSeq& truth,
                                      const RandomStream& stream) {
  const std::size_t burn_in = cfg.burn_in.value_or(default_burn_in(cfg.dgp));
  const SamplePath path = simulate_varma(cfg.dgp, cfg.sample_size, burn_in, stream.substream(0));
  const auto p = static_cast<Index>(cfg.lags);
  const VarFit fit = fit_var_ls(path.values, p, cfg.fit);

  ReplicationRecord rec;
  rec.hits.resize(cfg.methods.size());
  rec.lengths.resize(cfg.methods.size());
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    IntervalSet set;
    switch (cfg.methods[mi]) {
      case Method::ls:
        set = delta_intervals(fit, path.values, cfg.horizon, cfg.level, CovFlavor::finite_order);
        break;
      case Method::sieve_ls:
        set = delta_intervals(fit, path.values, cfg.horizon, cfg.level, CovFlavor::sieve);
        break;
      case Method::boot: {
        const auto draws = bootstrap_irf_distribution(fit, path.values, cfg.horizon,
                                                      cfg.bootstrap_draws, stream.substream(1),
                                                      cfg.fit);
        set = percentile_ci(draws, cfg.level);
        break;
      }
      case Method::boot_db:
        set = bias_corrected_bootstrap(fit, path.values, cfg.horizon, cfg.bootstrap_draws,
                                       cfg.level, stream.substream(2), cfg.fit);
        break;
    }
    score(set, truth, rec.hits[mi], rec.lengths[mi]);
    for (double len : rec.lengths[mi]) {
      if (!std::isfinite(len)) {
        throw NumericalError("non-finite interval length");
      }
    }
  }
  return rec;
}

}  // namespace

std::string_view method_name(Method m) noexcept {
  for (const auto& info : kMethods) {
    if (info.method == m) {
      return info.name;
    }
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  for (const auto& info : kMethods) {
    if (info.name == name) {
      return info.method;
    }
  }
  return std::nullopt;
}

void validate(const ExperimentConfig& cfg) {
  validate(cfg.dgp);
  if (cfg.horizon < 1) {
    throw InputError("experiment horizon H must be at least 1");
  }
  if (cfg.replications < 1) {
    throw InputError("experiment needs at least one replication");
  }
  if (!(cfg.level > 0.0 && cfg.level < 1.0)) {
    throw InputError("confidence level must lie in (0, 1)");
  }
  if (cfg.lags < 1) {
    throw InputError("fitted lag order p must be at least 1");
  }
  if (cfg.methods.empty()) {
    throw InputError("experiment needs at least one method");
  }
  const bool needs_boot = std::any_of(cfg.methods.begin(), cfg.methods.end(), [](Method m) {
    return m == Method::boot || m == Method::boot_db;
  });
  if (needs_boot && cfg.bootstrap_draws < 2) {
    throw InputError("bootstrap methods need at least 2 draws");
  }
  const auto k = static_cast<std::size_t>(cfg.dgp.dim);
  if (cfg.sample_size <= k * cfg.lags + cfg.lags + 2) {
    throw InputError("sample size T is too small for the fitted VAR(p)");
  }
}

McSummary aggregate(std::span<const Method> methods, std::size_t horizon, Index dim,
                    std::span<const ReplicationRecord> records) {
  const auto k2 = static_cast<std::size_t>(dim * dim);
  const std::size_t n_entries = (horizon + 1) * k2;
  McSummary out;
  out.methods.assign(methods.begin(), methods.end());
  out.horizon = horizon;
  out.dim = dim;
  out.by_horizon.assign(methods.size(), std::vector<McCell>(horizon + 1));
  out.by_entry.assign(methods.size(), std::vector<McCell>(n_entries));

  std::vector<std::vector<double>> hit_sum(methods.size(), std::vector<double>(n_entries, 0.0));
  std::vector<std::vector<double>> len_sum(methods.size(), std::vector<double>(n_entries, 0.0));
  for (const auto& rec : records) {
    if (rec.failed) {
      ++out.failures;
      continue;
    }
    if (rec.hits.size() != methods.size()) {
      throw InputError("replication record does not match the method list");
    }
    ++out.replications;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      if (rec.hits[mi].size() != n_entries || rec.lengths[mi].size() != n_entries) {
        throw InputError("replication record has inconsistent dimensions");
      }
      for (std::size_t e = 0; e < n_entries; ++e) {
        hit_sum[mi][e] += rec.hits[mi][e];
        len_sum[mi][e] += rec.lengths[mi][e];
      }
    }
  }
  if (out.replications == 0) {
    return out;
  }
  const auto r = static_cast<double>(out.replications);
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t h = 0; h <= horizon; ++h) {
      double hits = 0.0;
      double lens = 0.0;
      for (std::size_t e = h * k2; e < (h + 1) * k2; ++e) {
        out.by_entry[mi][e] = {hit_sum[mi][e] / r, len_sum[mi][e] / r};
        hits += hit_sum[mi][e];
        lens += len_sum[mi][e];
      }
      out.by_horizon[mi][h] = {hits / (r * static_cast<double>(k2)),
                               lens / (r * static_cast<double>(k2))};
    }
  }
  return out;
}

ReplicationRecord run_replication(const ExperimentConfig& cfg, const MatrixSeq& truth,
                                  std::size_t r) {
  const RandomStream stream = RandomStream(cfg.master_seed).substream(r);
  try {
    return attempt_replication(cfg, truth, stream);
  } catch (const NumericalError&) {
  }
  try {
    return attempt_replication(cfg, truth, stream.substream(kRetryTag));
  } catch (const NumericalError&) {
    ReplicationRecord failed;
    failed.failed = true;
    return failed;
  }
}

McSummary run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const MatrixSeq truth = varma_true_irf(cfg.dgp, cfg.horizon);
  std::vector<ReplicationRecord> records(cfg.replications);

  unsigned workers = cfg.workers != 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.replications));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= cfg.replications) {
        return;
      }
      try {
        records[r] = run_replication(cfg, truth, r);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) {
          error = std::current_exception();
        }
        next = cfg.replications;
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }

  McSummary summary = aggregate(cfg.methods, cfg.horizon, cfg.dgp.dim, records);
  if (static_cast<double>(summary.failures) > 0.01 * static_cast<double>(cfg.replications)) {
    throw NumericalError(std::to_string(summary.failures) + " of " +
                         std::to_string(cfg.replications) +
                         " replications failed (limit is 1%)");
  }
  return summary;
}

CoverageThresholds CoverageThresholds::for_level(double level) noexcept {
  return {level - 0.1, std::min(1.0, level + 0.04)};
}

std::vector<CoverageFlag> coverage_flags(const McSummary& summary, CoverageThresholds thresholds) {
  std::vector<CoverageFlag> out;
  for (std::size_t mi = 0; mi < summary.methods.size(); ++mi) {
    for (std::size_t h = 1; h <= summary.horizon; ++h) {
      const double cov = summary.by_horizon[mi][h].coverage;
      if (cov < thresholds.under) {
        out.push_back({summary.methods[mi], h, FlagKind::under, cov});
      } else if (cov > thresholds.over) {
        out.push_back({summary.methods[mi], h, FlagKind::over, cov});
      }
    }
  }
  return out;
}

VarmaSpec counterexample_dgp(const VarmaSpec& base, std::span<const LagScale> plan) {
  if (base.ar.empty()) {
    throw InputError("counterexample needs a base AR matrix (the DGP's A_1)");
  }
  return VarmaSpec(counterexample_ar(base.ar[0], plan), base.ma, base.sigma_u);
}

CounterexampleReport counterexample_experiment(const ExperimentConfig& cfg,
                                               CoverageThresholds thresholds) {
  McSummary summary = run_experiment(cfg);
  auto flags = coverage_flags(summary, thresholds);
  return {std::move(summary), std::move(flags)};
}

}  // namespace sievevar
