#include "commands.hpp"

#include "config.hpp"
#include "csv.hpp"
#include "svg.hpp"

#include "sievevar/bootstrap.hpp"
#include "sievevar/delta.hpp"
#include "sievevar/diag.hpp"
#include "sievevar/error.hpp"
#include "sievevar/estimate.hpp"
#include "sievevar/var_core.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace sievevar::app {

namespace fs = std::filesystem;

namespace {

std::vector<Method> parse_method_list(const std::string& text) {
  std::vector<Method> out;
  for (const auto& field : split_csv_line(text)) {
    const auto m = parse_method(field);
    if (!m) {
      throw InputError("unknown method \"" + field + "\" (known: LS, S-LS, BOOT, BOOT-db)");
    }
    if (std::find(out.begin(), out.end(), *m) == out.end()) {
      out.push_back(*m);
    }
  }
  if (out.empty()) {
    throw InputError("--methods is empty");
  }
  return out;
}

void emit(const std::optional<std::string>& path, const std::string& content, std::ostream& out) {
  if (path) {
    write_text_file(*path, content);
  } else {
    out << content;
  }
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> seed;
};

void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto cfg = parse_simulate_config(load_json_file(a.config));
  const auto seed = resolve_seed(a.seed, cfg.seed);
  const auto burn = cfg.burn_in.value_or(default_burn_in(cfg.dgp));
  const auto path = simulate_varma(cfg.dgp, cfg.sample_size, burn, RandomStream(seed));
  std::string csv;
  for (Index c = 0; c < path.dim(); ++c) {
    csv += (c ? ",y" : "y") + std::to_string(c + 1);
  }
  csv += '\n';
  for (Index t = 0; t < path.length(); ++t) {
    for (Index c = 0; c < path.dim(); ++c) {
      if (c) csv += ',';
      csv += format_double(path.values(t, c));
    }
    csv += '\n';
  }
  emit(a.out, csv, out);
}

// --- ci ---------------------------------------------------------------------

struct CiArgs {
  std::string data;
  std::size_t p = 0;
  std::size_t horizon = 0;
  double level = 0.95;
  std::string methods = "LS,S-LS";
  std::size_t draws = 300;
  bool intercept = false;
  std::optional<std::string> out;
  std::optional<std::string> seed;
};

void cmd_ci(const CiArgs& a, std::ostream& out, std::ostream& err) {
  const auto methods = parse_method_list(a.methods);
  if (!(a.level > 0.0 && a.level < 1.0)) {
    throw InputError("--level must lie in (0, 1)");
  }
  if (a.p < 1) {
    throw InputError("--p must be at least 1");
  }
  const MatrixXd y = read_data_csv(a.data);
  const FitOptions options{a.intercept, DfMode::adjusted};
  const VarFit fit = fit_var_ls(y, static_cast<Index>(a.p), options);
  const RandomStream stream(resolve_seed(a.seed, std::nullopt));

  if (a.horizon > a.p &&
      std::find(methods.begin(), methods.end(), Method::sieve_ls) != methods.end()) {
    err << "warning: S-LS intervals at horizons " << a.p + 1 << ".." << a.horizon
        << " extrapolate beyond p = " << a.p
        << "; the sieve delta method is only valid for i <= p\n";
  }

  std::vector<IntervalSet> sets;
  for (Method m : methods) {
    switch (m) {
      case Method::ls:
        sets.push_back(delta_intervals(fit, y, a.horizon, a.level, CovFlavor::finite_order));
        break;
      case Method::sieve_ls:
        sets.push_back(delta_intervals(fit, y, a.horizon, a.level, CovFlavor::sieve));
        break;
      case Method::boot: {
        const auto draws = bootstrap_irf_distribution(fit, y, a.horizon, a.draws,
                                                      stream.substream(1), options);
        const auto phi_hat = ma_from_ar(fit.model.ar_hat, a.horizon);
        sets.push_back(percentile_ci(draws, a.level, &phi_hat));
        break;
      }
      case Method::boot_db:
        sets.push_back(bias_corrected_bootstrap(fit, y, a.horizon, a.draws, a.level,
                                                stream.substream(2), options));
        break;
    }
    if (sets.back().clamped) {
      err << "warning: " << sets.back().method
          << " produced a negative variance estimate; clamped to zero\n";
    }
  }
  emit(a.out, interval_csv(sets), out);
}

// --- mc ---------------------------------------------------------------------

struct McArgs {
  std::optional<std::string> config;
  std::optional<std::string> preset;
  std::string out_dir;
  std::optional<unsigned> workers;
  std::optional<std::size_t> replications;
  std::optional<std::string> seed;
};

void cmd_mc(const McArgs& a, std::ostream& out) {
  if (a.config.has_value() == a.preset.has_value()) {
    throw InputError("mc needs exactly one of a config path or --preset");
  }
  const json doc = a.config ? load_json_file(*a.config) : preset(*a.preset);
  McConfig cfg = parse_mc_config(doc);
  ExperimentConfig& exp = cfg.experiment;
  if (a.workers) exp.workers = *a.workers;
  if (a.replications) exp.replications = *a.replications;
  exp.master_seed = resolve_seed(a.seed, exp.master_seed);
  validate(exp);

  const McSummary summary = run_experiment(exp);
  const fs::path dir(a.out_dir);
  write_text_file(dir / "mc_results.csv", mc_results_csv(summary));
  write_text_file(dir / "mc_entries.csv", mc_entries_csv(summary));
  out << "replications " << summary.replications << ", failures " << summary.failures << '\n';
  if (cfg.flag_thresholds) {
    const auto flags = coverage_flags(summary, *cfg.flag_thresholds);
    write_text_file(dir / "mc_flags.csv", mc_flags_csv(flags));
    out << "coverage flags " << flags.size() << " (under < " << cfg.flag_thresholds->under
        << ", over > " << cfg.flag_thresholds->over << ")\n";
  }
  out << "wrote " << (dir / "mc_results.csv").string() << '\n';
}

// --- plot -------------------------------------------------------------------

struct PlotArgs {
  std::string input;
  std::string out;
  double p = 0.0;
  double level = 0.95;
  std::string title;
};

void cmd_plot(const PlotArgs& a) {
  const CsvTable table = read_csv_table(a.input);
  const auto c_method = table.column("method");
  const auto c_h = table.column("horizon");
  const auto c_cov = table.column("coverage");
  const auto c_len = table.column("avg_length");
  if (table.rows.empty()) {
    throw InputError(a.input + " has no data rows");
  }
  std::vector<PlotSeries> series;
  std::map<std::string, std::size_t> index;
  for (const auto& row : table.rows) {
    auto [it, inserted] = index.try_emplace(row[c_method], series.size());
    if (inserted) {
      series.push_back({row[c_method], {}, {}, {}});
    }
    auto& s = series[it->second];
    s.horizon.push_back(parse_double(row[c_h]));
    s.coverage.push_back(parse_double(row[c_cov]));
    s.avg_length.push_back(parse_double(row[c_len]));
  }
  write_text_file(a.out, render_mc_svg(series, {a.p, a.level, a.title}));
}

// --- diag -------------------------------------------------------------------

struct DiagArgs {
  std::size_t p = 0;
  std::size_t sample_size = 0;
  std::optional<double> alpha;
  double scale = 1.0;
};

void cmd_diag(const DiagArgs& a, std::ostream& out) {
  const auto r = assumption_ratios(a.p, a.sample_size, a.alpha);
  json doc = {{"p", a.p},
              {"T", a.sample_size},
              {"ratio_p3_T", r.ratio_p3_T},
              {"log_rule_ok", r.log_rule_ok},
              {"log_constant", r.log_constant}};
  out << "p = " << a.p << ", T = " << a.sample_size << '\n';
  out << "p^3 / T            " << format_double(r.ratio_p3_T) << '\n';
  out << "p / log T          " << format_double(r.log_constant) << '\n';
  out << "p <= 3 log T       " << (r.log_rule_ok ? "yes" : "no") << '\n';
  if (a.p >= 2) {
    const double cubic = sample_growth(a.p - 1, a.p, GrowthRule::cubic);
    const double expo = sample_growth(a.p - 1, a.p, GrowthRule::exponential);
    out << "T growth for p-1 -> p: " << format_double(cubic) << "% (T ~ p^3), "
        << format_double(expo) << "% (T ~ exp p)\n";
    doc["growth_from_previous"] = {{"cubic_percent", cubic}, {"exponential_percent", expo}};
  }
  if (a.alpha) {
    const double tail = tail_norm(GeometricDecay{a.scale, *a.alpha}, a.p, a.sample_size);
    out << "required p / log T > " << format_double(*r.required_log_constant) << ": "
        << (*r.decay_rule_ok ? "yes" : "no") << '\n';
    out << "sqrt(T) tail sum   " << format_double(tail) << " (C = " << format_double(a.scale)
        << ", alpha = " << format_double(*a.alpha) << ")\n";
    doc["alpha"] = *a.alpha;
    doc["C"] = a.scale;
    doc["required_log_constant"] = *r.required_log_constant;
    doc["decay_rule_ok"] = *r.decay_rule_ok;
    doc["tail_norm"] = tail;
  }
  out << doc.dump() << '\n';
}

}  // namespace

std::string interval_csv(const std::vector<IntervalSet>& sets) {
  std::string csv = "method,horizon,row,col,point,lower,upper\n";
  for (const auto& set : sets) {
    for (const auto& e : set.entries) {
      csv += set.method + ',' + std::to_string(e.horizon) + ',' + std::to_string(e.row) + ',' +
             std::to_string(e.col) + ',' + format_double(e.point) + ',' +
             format_double(e.lower) + ',' + format_double(e.upper) + '\n';
    }
  }
  return csv;
}

std::string mc_results_csv(const McSummary& summary) {
  std::string csv = "method,horizon,coverage,avg_length,replications,failures\n";
  for (std::size_t m = 0; m < summary.methods.size(); ++m) {
    for (std::size_t h = 0; h <= summary.horizon; ++h) {
      const auto& cell = summary.by_horizon[m][h];
      csv += std::string(method_name(summary.methods[m])) + ',' + std::to_string(h) + ',' +
             format_double(cell.coverage) + ',' + format_double(cell.avg_length) + ',' +
             std::to_string(summary.replications) + ',' + std::to_string(summary.failures) + '\n';
    }
  }
  return csv;
}

std::string mc_entries_csv(const McSummary& summary) {
  std::string csv = "method,horizon,row,col,coverage,avg_length\n";
  const auto k = static_cast<std::size_t>(summary.dim);
  for (std::size_t m = 0; m < summary.methods.size(); ++m) {
    for (std::size_t h = 0; h <= summary.horizon; ++h) {
      for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
          const auto& cell = summary.by_entry[m][h * k * k + r * k + c];
          csv += std::string(method_name(summary.methods[m])) + ',' + std::to_string(h) + ',' +
                 std::to_string(r) + ',' + std::to_string(c) + ',' +
                 format_double(cell.coverage) + ',' + format_double(cell.avg_length) + '\n';
        }
      }
    }
  }
  return csv;
}

std::string mc_flags_csv(const std::vector<CoverageFlag>& flags) {
  std::string csv = "method,horizon,kind,coverage\n";
  for (const auto& f : flags) {
    csv += std::string(method_name(f.method)) + ',' + std::to_string(f.horizon) + ',' +
           (f.kind == FlagKind::under ? "under" : "over") + ',' + format_double(f.coverage) +
           '\n';
  }
  return csv;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sieve and finite-order VAR impulse-response inference", "sievevar"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sievevar 0.1.0");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a VARMA sample to CSV");
  simulate->add_option("config", sim.config, "JSON config (dgp, T, seed)")->required();
  simulate->add_option("--out,-o", sim.out, "Output CSV (default: stdout)");
  simulate->add_option("--seed", sim.seed, "Seed (overrides SIEVEVAR_SEED and the config)");

  CiArgs ci;
  auto* ci_cmd = app.add_subcommand("ci", "Impulse-response confidence intervals for a sample");
  ci_cmd->add_option("data", ci.data, "CSV sample, T rows by K columns")->required();
  ci_cmd->add_option("--p", ci.p, "Fitted lag order")->required();
  ci_cmd->add_option("--H", ci.horizon, "Maximum horizon")->required();
  ci_cmd->add_option("--level", ci.level, "Confidence level")->capture_default_str();
  ci_cmd->add_option("--methods", ci.methods, "Comma list of LS, S-LS, BOOT, BOOT-db")
      ->capture_default_str();
  ci_cmd->add_option("--draws", ci.draws, "Bootstrap replications M")->capture_default_str();
  ci_cmd->add_flag("--intercept", ci.intercept, "Fit an intercept");
  ci_cmd->add_option("--out,-o", ci.out, "Output CSV (default: stdout)");
  ci_cmd->add_option("--seed", ci.seed, "Seed for bootstrap methods");

  McArgs mc;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo coverage and length experiment");
  mc_cmd->add_option("config", mc.config, "Experiment JSON config");
  mc_cmd->add_option("--preset", mc.preset, "Shipped preset instead of a config file");
  mc_cmd->add_option("--out,-o", mc.out_dir, "Output directory")->required();
  mc_cmd->add_option("--workers", mc.workers, "Worker threads (0: hardware)");
  mc_cmd->add_option("--replications", mc.replications, "Override R");
  mc_cmd->add_option("--seed", mc.seed, "Master seed (overrides SIEVEVAR_SEED and the config)");

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot", "Render mc_results.csv as a two-panel SVG");
  plot_cmd->add_option("results", plot.input, "mc_results.csv")->required();
  plot_cmd->add_option("--out,-o", plot.out, "Output SVG")->required();
  plot_cmd->add_option("--p", plot.p, "Fitted lag order, drawn as a vertical rule")->required();
  plot_cmd->add_option("--level", plot.level, "Nominal level, drawn dashed")->capture_default_str();
  plot_cmd->add_option("--title", plot.title, "Chart title");

  DiagArgs diag;
  auto* diag_cmd = app.add_subcommand("diag", "Lag-order growth and tail diagnostics");
  diag_cmd->add_option("--p", diag.p, "Lag order")->required();
  diag_cmd->add_option("--T", diag.sample_size, "Sample size")->required();
  diag_cmd->add_option("--alpha", diag.alpha, "Geometric decay rate of ||A_i||");
  diag_cmd->add_option("--C", diag.scale, "Decay scale")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*simulate) {
      cmd_simulate(sim, out);
    } else if (*ci_cmd) {
      cmd_ci(ci, out, err);
    } else if (*mc_cmd) {
      cmd_mc(mc, out);
    } else if (*plot_cmd) {
      cmd_plot(plot);
    } else if (*diag_cmd) {
      cmd_diag(diag, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}

}  // namespace sievevar::app
