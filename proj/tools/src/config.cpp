#include "config.hpp"

#include "sievevar/error.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>

namespace sievevar::app {

namespace {

const std::set<std::string> kMcKeys{"schema",  "name",         "description", "dgp",
                                    "T",       "p",            "H",           "level",
                                    "methods", "replications", "bootstrap_draws", "seed",
                                    "workers", "burn_in",      "intercept",   "df",
                                    "counterexample", "flags"};
const std::set<std::string> kSimulateKeys{"schema", "name", "description", "dgp",
                                          "T",      "seed", "burn_in"};

bool is_non_negative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

void check_keys(const json& doc, const std::set<std::string>& allowed, std::string_view what) {
  if (!doc.is_object()) {
    throw InputError(std::string(what) + " config must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) {
      throw InputError(std::string(what) + " config: unknown key \"" + key + "\"");
    }
  }
  if (!doc.contains("schema")) {
    throw InputError("config is missing the \"schema\" field");
  }
  if (!doc["schema"].is_number_integer() || doc["schema"].get<int>() != kSchemaVersion) {
    throw InputError("unsupported config schema (expected \"schema\": 1)");
  }
}

MatrixXd parse_matrix(const json& node, std::string_view what) {
  if (node.is_number()) {
    return MatrixXd::Constant(1, 1, node.get<double>());
  }
  if (!node.is_array() || node.empty()) {
    throw InputError(std::string(what) + ": expected a non-empty array of rows");
  }
  const auto rows = static_cast<Index>(node.size());
  Index cols = -1;
  MatrixXd out;
  for (Index r = 0; r < rows; ++r) {
    const json& row = node[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.empty()) {
      throw InputError(std::string(what) + ": every row must be a non-empty array");
    }
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
      out.resize(rows, cols);
    } else if (static_cast<Index>(row.size()) != cols) {
      throw InputError(std::string(what) + ": ragged rows");
    }
    for (Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        throw InputError(std::string(what) + ": entries must be numbers");
      }
      out(r, c) = v.get<double>();
    }
  }
  return out;
}

json matrix_to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<MatrixXd> parse_matrix_list(const json& node, std::string_view what) {
  std::vector<MatrixXd> out;
  if (node.is_null()) {
    return out;
  }
  if (!node.is_array()) {
    throw InputError(std::string(what) + ": expected an array of matrices");
  }
  for (std::size_t j = 0; j < node.size(); ++j) {
    out.push_back(parse_matrix(node[j], std::string(what) + "[" + std::to_string(j) + "]"));
  }
  return out;
}

template <class T>
T get_number(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) {
    return fallback;
  }
  const json& v = doc[key];
  if constexpr (std::is_integral_v<T>) {
    if (!is_non_negative_integer(v)) {
      throw InputError(std::string("\"") + key + "\" must be a non-negative integer");
    }
  } else if (!v.is_number()) {
    throw InputError(std::string("\"") + key + "\" must be a number");
  }
  return v.get<T>();
}

std::optional<std::uint64_t> get_seed(const json& doc) {
  if (!doc.contains("seed")) {
    return std::nullopt;
  }
  const json& v = doc["seed"];
  if (is_non_negative_integer(v)) {
    return v.get<std::uint64_t>();
  }
  if (v.is_string()) {
    return parse_seed(v.get<std::string>());
  }
  throw InputError("\"seed\" must be an unsigned 64-bit integer");
}

std::vector<LagScale> parse_plan(const json& node) {
  if (node.is_boolean()) {
    if (!node.get<bool>()) {
      return {};
    }
    return default_counterexample_plan();
  }
  const json& plan = node.is_object() && node.contains("plan") ? node["plan"] : node;
  if (!plan.is_array() || plan.empty()) {
    throw InputError("counterexample plan must be a non-empty array of [lag, scale] pairs");
  }
  std::vector<LagScale> out;
  for (const auto& item : plan) {
    if (!item.is_array() || item.size() != 2 || !is_non_negative_integer(item[0]) ||
        !item[1].is_number()) {
      throw InputError("counterexample plan entries must be [lag, scale] pairs");
    }
    out.push_back({item[0].get<std::size_t>(), item[1].get<double>()});
  }
  return out;
}

}  // namespace

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open config file " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

VarmaSpec parse_dgp(const json& node) {
  if (node.is_string()) {
    if (node.get<std::string>() == "desk") {
      return default_desk_dgp();
    }
    throw InputError("unknown named dgp \"" + node.get<std::string>() + "\" (known: desk)");
  }
  if (!node.is_object()) {
    throw InputError("\"dgp\" must be \"desk\" or an object with ar, ma and sigma_u");
  }
  if (!node.contains("sigma_u")) {
    throw InputError("dgp is missing \"sigma_u\"");
  }
  const MatrixXd sigma = parse_matrix(node["sigma_u"], "dgp.sigma_u");
  const Index dim = node.contains("dim") ? node["dim"].get<Index>() : sigma.rows();
  auto ar = parse_matrix_list(node.value("ar", json()), "dgp.ar");
  auto ma = parse_matrix_list(node.value("ma", json()), "dgp.ma");
  VarmaSpec spec(MatrixSeq::ar(dim, std::move(ar)), MatrixSeq::ar(dim, std::move(ma)), sigma);
  validate(spec);
  return spec;
}

json dgp_to_json(const VarmaSpec& spec) {
  json ar = json::array();
  for (const auto& a : spec.ar.entries()) {
    ar.push_back(matrix_to_json(a));
  }
  json ma = json::array();
  for (const auto& m : spec.ma.entries()) {
    ma.push_back(matrix_to_json(m));
  }
  return {{"dim", spec.dim}, {"ar", ar}, {"ma", ma}, {"sigma_u", matrix_to_json(spec.sigma_u)}};
}

SimulateConfig parse_simulate_config(const json& doc) {
  check_keys(doc, kSimulateKeys, "simulate");
  try {
    SimulateConfig cfg;
    if (doc.contains("dgp")) {
      cfg.dgp = parse_dgp(doc["dgp"]);
    }
    cfg.sample_size = get_number<std::size_t>(doc, "T", cfg.sample_size);
    if (cfg.sample_size < 1) {
      throw InputError("\"T\" must be at least 1");
    }
    cfg.seed = get_seed(doc);
    if (doc.contains("burn_in")) {
      cfg.burn_in = get_number<std::size_t>(doc, "burn_in", 0);
    }
    return cfg;
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid simulate config: ") + e.what());
  }
}

McConfig parse_mc_config(const json& doc) {
  check_keys(doc, kMcKeys, "mc");
  try {
    McConfig out;
    ExperimentConfig& cfg = out.experiment;
    if (doc.contains("dgp")) {
      cfg.dgp = parse_dgp(doc["dgp"]);
    }
    cfg.sample_size = get_number<std::size_t>(doc, "T", cfg.sample_size);
    cfg.lags = get_number<std::size_t>(doc, "p", cfg.lags);
    cfg.horizon = get_number<std::size_t>(doc, "H", cfg.horizon);
    cfg.level = get_number<double>(doc, "level", cfg.level);
    cfg.replications = get_number<std::size_t>(doc, "replications", cfg.replications);
    cfg.bootstrap_draws = get_number<std::size_t>(doc, "bootstrap_draws", cfg.bootstrap_draws);
    cfg.workers = get_number<unsigned>(doc, "workers", cfg.workers);
    cfg.master_seed = get_seed(doc).value_or(cfg.master_seed);
    if (doc.contains("burn_in")) {
      cfg.burn_in = get_number<std::size_t>(doc, "burn_in", 0);
    }
    if (doc.contains("intercept")) {
      cfg.fit.intercept = doc["intercept"].get<bool>();
    }
    if (doc.contains("df")) {
      const auto df = doc["df"].get<std::string>();
      if (df == "ml") {
        cfg.fit.df = DfMode::ml;
      } else if (df == "adjusted") {
        cfg.fit.df = DfMode::adjusted;
      } else {
        throw InputError("\"df\" must be \"ml\" or \"adjusted\"");
      }
    }
    if (doc.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : doc["methods"]) {
        const auto name = m.get<std::string>();
        const auto method = parse_method(name);
        if (!method) {
          throw InputError("unknown method \"" + name + "\" (known: LS, S-LS, BOOT, BOOT-db)");
        }
        cfg.methods.push_back(*method);
      }
    }
    if (doc.contains("counterexample")) {
      const auto plan = parse_plan(doc["counterexample"]);
      if (!plan.empty()) {
        cfg.dgp = counterexample_dgp(cfg.dgp, plan);
        out.flag_thresholds = CoverageThresholds::for_level(cfg.level);
      }
    }
    if (doc.contains("flags")) {
      auto t = out.flag_thresholds.value_or(CoverageThresholds::for_level(cfg.level));
      const json& f = doc["flags"];
      t.under = f.value("under", t.under);
      t.over = f.value("over", t.over);
      out.flag_thresholds = t;
    }
    validate(cfg);
    return out;
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid mc config: ") + e.what());
  }
}

std::vector<std::string> preset_names() {
  return {"fig2-desk", "fig2-desk-t1000", "full-scale", "counterexample-p10",
          "counterexample-p30"};
}

json preset(std::string_view name) {
  const json all_methods = {"LS", "S-LS", "BOOT", "BOOT-db"};
  json doc = {{"schema", kSchemaVersion}, {"name", std::string(name)}, {"dgp", "desk"},
              {"T", 300},  {"p", 10},       {"H", 30},   {"level", 0.95},
              {"methods", all_methods},     {"replications", 200},
              {"bootstrap_draws", 100},     {"seed", 20240501}};
  if (name == "fig2-desk") {
    return doc;
  }
  if (name == "fig2-desk-t1000") {
    doc["T"] = 1000;
    return doc;
  }
  if (name == "full-scale") {
    doc["replications"] = 1000;
    doc["bootstrap_draws"] = 300;
    return doc;
  }
  if (name == "counterexample-p10" || name == "counterexample-p30") {
    doc["p"] = name == "counterexample-p10" ? 10 : 30;
    doc["methods"] = {"LS", "S-LS"};
    doc["replications"] = 500;
    doc["counterexample"] = true;
    return doc;
  }
  std::string known;
  for (const auto& n : preset_names()) {
    known += (known.empty() ? "" : ", ") + n;
  }
  throw InputError("unknown preset \"" + std::string(name) + "\" (known: " + known + ")");
}

std::uint64_t parse_seed(std::string_view text) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw InputError("seed must be an unsigned 64-bit integer, got \"" + std::string(text) + "\"");
  }
  return value;
}

std::uint64_t resolve_seed(const std::optional<std::string>& flag,
                           std::optional<std::uint64_t> fallback) {
  if (flag) {
    return parse_seed(*flag);
  }
  if (const char* env = std::getenv("SIEVEVAR_SEED"); env != nullptr && *env != '\0') {
    return parse_seed(env);
  }
  return fallback.value_or(ExperimentConfig{}.master_seed);
}

}  // namespace sievevar::app
