#include "commands.hpp"
#include "config.hpp"
#include "csv.hpp"

#include "sievevar/error.hpp"
#include "sievevar/var_core.hpp"

#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace sievevar;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = app::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("sievevar-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  [[nodiscard]] std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& content) {
  std::ofstream(path, std::ios::binary) << content;
}

std::string read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Minimal XML well-formedness check: balanced tags, quoted attributes.
bool well_formed_xml(const std::string& doc) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  bool root_seen = false;
  while ((pos = doc.find('<', pos)) != std::string::npos) {
    const auto end = doc.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = doc.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.starts_with("?") || tag.starts_with("!")) continue;
    if (count(tag, "\"") % 2 != 0) return false;
    if (tag.starts_with("/")) {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with("/");
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n/"));
    if (name.empty()) return false;
    if (stack.empty()) {
      if (root_seen) return false;
      root_seen = true;
    }
    if (!self_closing) stack.push_back(name);
  }
  return root_seen && stack.empty();
}

const char* kSimConfig = R"({"schema": 1, "dgp": "desk", "T": 250, "seed": 11})";

}  // namespace

TEST_CASE("simulate") {
  TempDir dir;
  write(dir / "cfg.json", kSimConfig);

  SUBCASE("T data rows plus header, identical for the same seed") {
    REQUIRE(cli({"simulate", dir / "cfg.json", "--out", dir / "a.csv"}).code == 0);
    REQUIRE(cli({"simulate", dir / "cfg.json", "--out", dir / "b.csv"}).code == 0);
    const auto a = read(dir / "a.csv");
    CHECK(a == read(dir / "b.csv"));
    const auto rows = lines(a);
    CHECK(rows.size() == 251);
    CHECK(rows[0] == "y1,y2");
    CHECK(a.find('\r') == std::string::npos);
    CHECK(app::read_data_csv(dir / "a.csv").rows() == 250);
  }
  SUBCASE("seed flag beats SIEVEVAR_SEED, which beats the config") {
    const auto base = cli({"simulate", dir / "cfg.json"}).out;
    ::setenv("SIEVEVAR_SEED", "12", 1);
    const auto env = cli({"simulate", dir / "cfg.json"}).out;
    const auto flag = cli({"simulate", dir / "cfg.json", "--seed", "11"}).out;
    ::unsetenv("SIEVEVAR_SEED");
    CHECK(env != base);
    CHECK(flag == base);
    CHECK(cli({"simulate", dir / "cfg.json", "--seed", "-3"}).code == 2);
  }
  SUBCASE("unstable spec exits 2 and reports the companion spectral radius") {
    const std::string unstable = R"({"schema": 1, "T": 10,
      "dgp": {"ar": [[[0.9, 0.5], [0.4, 0.8]]], "sigma_u": [[1, 0], [0, 1]]}})";
    write(dir / "bad.json", unstable);
    const auto r = cli({"simulate", dir / "bad.json"});
    CHECK(r.code == 2);
    MatrixXd a(2, 2);
    a << 0.9, 0.5, 0.4, 0.8;
    const double radius = spectral_radius(MatrixSeq::ar(2, {a}));
    std::ostringstream expected;
    expected << radius;
    CHECK(r.err.find("spectral radius") != std::string::npos);
    CHECK(r.err.find(expected.str().substr(0, 5)) != std::string::npos);
  }
  SUBCASE("malformed configs exit 2") {
    write(dir / "junk.json", "{ not json");
    CHECK(cli({"simulate", dir / "junk.json"}).code == 2);
    write(dir / "noschema.json", R"({"T": 10})");
    CHECK(cli({"simulate", dir / "noschema.json"}).code == 2);
    write(dir / "typo.json", R"({"schema": 1, "TT": 10})");
    CHECK(cli({"simulate", dir / "typo.json"}).code == 2);
    CHECK(cli({"simulate", dir / "missing.json"}).code == 2);
  }
}

TEST_CASE("ci") {
  TempDir dir;
  write(dir / "cfg.json", kSimConfig);
  REQUIRE(cli({"simulate", dir / "cfg.json", "--out", dir / "y.csv"}).code == 0);

  SUBCASE("column layout, horizon-0 rows and the extrapolation warning") {
    const auto r = cli({"ci", dir / "y.csv", "--p", "2", "--H", "5", "--methods", "LS,S-LS"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    CHECK(rows[0] == "method,horizon,row,col,point,lower,upper");
    CHECK(rows.size() == 1 + 2 * 6 * 4);
    CHECK(count(r.err, "extrapolat") == 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto f = app::split_csv_line(rows[i]);
      REQUIRE(f.size() == 7);
      if (f[1] == "0") {
        CHECK(f[4] == f[5]);
        CHECK(f[5] == f[6]);
      } else {
        CHECK(app::parse_double(f[5]) <= app::parse_double(f[4]));
        CHECK(app::parse_double(f[4]) <= app::parse_double(f[6]));
      }
    }
  }
  SUBCASE("no warning without S-LS or within p") {
    CHECK(cli({"ci", dir / "y.csv", "--p", "2", "--H", "5", "--methods", "LS"}).err.empty());
    CHECK(cli({"ci", dir / "y.csv", "--p", "5", "--H", "5", "--methods", "S-LS"}).err.empty());
  }
  SUBCASE("bootstrap methods are reproducible for a seed") {
    const std::vector<std::string> args{"ci", dir / "y.csv", "--p", "2", "--H", "4",
                                        "--methods", "BOOT,BOOT-db", "--draws", "50",
                                        "--seed", "3"};
    const auto a = cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == cli(args).out);
    CHECK(count(a.out, "\nBOOT-db,") == 5 * 4);
  }
  SUBCASE("singular fit exits 3, bad inputs exit 2") {
    std::string flat = "a,b\n";
    for (int t = 0; t < 40; ++t) flat += std::to_string(t % 3) + ",0\n";
    write(dir / "flat.csv", flat);
    CHECK(cli({"ci", dir / "flat.csv", "--p", "1", "--H", "3"}).code == 3);
    write(dir / "text.csv", "a,b\n1,x\n");
    CHECK(cli({"ci", dir / "text.csv", "--p", "1", "--H", "3"}).code == 2);
    CHECK(cli({"ci", dir / "y.csv", "--p", "1", "--H", "3", "--methods", "OLS"}).code == 2);
    CHECK(cli({"ci", dir / "y.csv", "--H", "3"}).code == 2);
  }
}

TEST_CASE("mc, plot and the CSV layouts") {
  TempDir dir;
  const auto r = cli({"mc", "--preset", "fig2-desk", "--replications", "6", "--workers", "2",
                      "--out", dir / "run"});
  REQUIRE(r.code == 0);
  const auto results = lines(read(dir / "run/mc_results.csv"));
  CHECK(results[0] == "method,horizon,coverage,avg_length,replications,failures");
  CHECK(results.size() == 1 + 4 * 31);
  for (std::size_t i = 1; i < results.size(); ++i) {
    const auto f = app::split_csv_line(results[i]);
    CHECK(f[4] == "6");
    CHECK(f[5] == "0");
  }
  const auto entries = lines(read(dir / "run/mc_entries.csv"));
  CHECK(entries[0] == "method,horizon,row,col,coverage,avg_length");
  CHECK(entries.size() == 1 + 4 * 31 * 4);
  CHECK_FALSE(fs::exists(dir / "run/mc_flags.csv"));

  SUBCASE("plot") {
    REQUIRE(cli({"plot", dir / "run/mc_results.csv", "--out", dir / "fig.svg", "--p", "10"}).code ==
            0);
    const auto svg = read(dir / "fig.svg");
    CHECK(well_formed_xml(svg));
    CHECK(count(svg, "<polyline") == 8);
    CHECK(count(svg, "data-method=\"BOOT-db\"") == 2);
    CHECK(count(svg, "class=\"nominal-level\"") == 1);
    CHECK(count(svg, "stroke-dasharray") == 1);
    // the x = p rule appears once per panel, vertical
    const std::regex marker(R"re(<line class="p-marker" x1="([0-9.]+)" y1="[0-9.]+" x2="([0-9.]+)")re");
    std::size_t markers = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), marker); it != std::sregex_iterator();
         ++it) {
      CHECK((*it)[1] == (*it)[2]);
      ++markers;
    }
    CHECK(markers == 2);
  }
  SUBCASE("plot input errors exit 2") {
    write(dir / "empty.csv", "");
    CHECK(cli({"plot", dir / "empty.csv", "--out", dir / "x.svg", "--p", "10"}).code == 2);
    write(dir / "header.csv", "method,horizon,coverage,avg_length\n");
    CHECK(cli({"plot", dir / "header.csv", "--out", dir / "x.svg", "--p", "10"}).code == 2);
    write(dir / "cols.csv", "method,horizon,coverage\nLS,0,1\n");
    const auto bad = cli({"plot", dir / "cols.csv", "--out", dir / "x.svg", "--p", "10"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("avg_length") != std::string::npos);
  }
  SUBCASE("counterexample configs write coverage flags") {
    write(dir / "ce.json", R"({"schema": 1, "dgp": "desk", "counterexample": true, "T": 200,
      "p": 3, "H": 20, "methods": ["LS"], "replications": 10, "seed": 5})");
    REQUIRE(cli({"mc", dir / "ce.json", "--out", dir / "ce"}).code == 0);
    const auto flags = lines(read(dir / "ce/mc_flags.csv"));
    CHECK(flags[0] == "method,horizon,kind,coverage");
    CHECK(flags.size() > 1);
  }
  SUBCASE("mc argument errors") {
    CHECK(cli({"mc", "--out", dir / "x"}).code == 2);
    CHECK(cli({"mc", "--preset", "nope", "--out", dir / "x"}).code == 2);
    write(dir / "h0.json", R"({"schema": 1, "H": 0})");
    CHECK(cli({"mc", dir / "h0.json", "--out", dir / "x"}).code == 2);
  }
}

TEST_CASE("shipped presets parse and stay within the failure budget") {
  for (const auto& name : app::preset_names()) {
    const auto cfg = app::parse_mc_config(app::preset(name));
    CHECK(cfg.experiment.replications >= 200);
    CHECK(cfg.flag_thresholds.has_value() == name.starts_with("counterexample"));
    auto small = cfg.experiment;
    small.replications = 20;
    small.bootstrap_draws = 20;
    small.workers = 1;
    const auto s = run_experiment(small);
    CHECK(static_cast<double>(s.failures) <= 0.01 * static_cast<double>(small.replications));
  }
}

TEST_CASE("diag mirrors the library") {
  const auto r = cli({"diag", "--p", "3", "--T", "100", "--alpha", "0.5", "--C", "1"});
  REQUIRE(r.code == 0);
  const auto last = lines(r.out).back();
  const auto doc = app::json::parse(last);
  CHECK(doc["tail_norm"].get<double>() == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(doc["ratio_p3_T"].get<double>() == doctest::Approx(0.27));
  const auto d = app::json::parse(lines(cli({"diag", "--p", "10", "--T", "300"}).out).back());
  CHECK(std::abs(d["ratio_p3_T"].get<double>() - 10.0 / 3.0) < 1e-12);
  CHECK(d["log_rule_ok"].get<bool>());
  CHECK(d["growth_from_previous"]["cubic_percent"].get<double>() ==
        doctest::Approx(37.1742).epsilon(1e-5));
  CHECK(cli({"diag", "--p", "3", "--T", "100", "--alpha", "1.5"}).code == 2);
}

TEST_CASE("dgp JSON round trip") {
  const auto spec = default_desk_dgp();
  const auto back = app::parse_dgp(app::dgp_to_json(spec));
  CHECK(back.ar[0] == spec.ar[0]);
  CHECK(back.ma[0] == spec.ma[0]);
  CHECK(back.sigma_u == spec.sigma_u);
}

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(app::format_double(0.1) == "0.1");
  CHECK(app::format_double(-0.0) == "0");
  CHECK(app::format_double(1e-20) == "1e-20");
  const double x = 0.1 + 0.2;
  CHECK(app::parse_double(app::format_double(x)) == x);
}

TEST_CASE("usage errors and help") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"bogus"}).code == 2);
  const auto h = cli({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("simulate") != std::string::npos);
}
