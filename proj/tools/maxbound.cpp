// maxbound: tables of g_n and gamma_n, lower-bound constants, verification
// suites and extremal search for the centered maximal operator on the line.
//
// Exit codes: 0 success, 1 a verification Violation was found, 2 usage or
// input error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maxbound/config.hpp"
#include "maxbound/maxbound.hpp"
#include "maxbound/report.hpp"

namespace mb = maxbound;

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::string> seed;
  std::optional<std::string> grid_width;
  std::optional<std::string> n_max;
  std::optional<std::string> c1;
  std::optional<std::string> p;
  std::optional<std::string> out;
  std::optional<std::string> threads;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// defaults < config file (--config or MAXBOUND_CONFIG) < flags.
mb::RunConfig effective_config(const Flags& flags, const mb::RunConfig& defaults, const mb::RunConfig& command) {
  mb::RunConfig cfg = defaults;
  std::string path = flags.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("MAXBOUND_CONFIG")) path = env;
  }
  if (!path.empty()) cfg.merge(mb::RunConfig::load(path));
  auto put = [&cfg](const char* key, const std::optional<std::string>& v) {
    if (v) cfg.set(key, *v);
  };
  put("seed", flags.seed);
  put("grid_width", flags.grid_width);
  put("n_max", flags.n_max);
  put("c1", flags.c1);
  put("p", flags.p);
  put("out", flags.out);
  put("threads", flags.threads);
  cfg.merge(command);
  return cfg;
}

mb::Rational parse_width(const std::string& s) {
  if (s.find('.') != std::string::npos || s.find('e') != std::string::npos) return mb::from_double(std::stod(s));
  return mb::parse_rational(s);
}

/// Writes to <out>/<name> when `out` is set, otherwise to stdout.
void emit(const mb::RunConfig& cfg, const std::string& name, const std::string& text) {
  std::string out = cfg.has("out") ? cfg.get("out") : "";
  if (out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::filesystem::create_directories(out);
  std::ofstream f(std::filesystem::path(out) / name);
  if (!f) throw std::runtime_error("cannot write " + (std::filesystem::path(out) / name).string());
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
  std::cerr << "wrote " << (std::filesystem::path(out) / name).string() << '\n';
}

mb::RunConfig base_defaults() {
  mb::RunConfig d;
  d.set("seed", "42");
  d.set("grid_width", "1/256");
  d.set("c1", "2");
  d.set("out", "");
  d.set("threads", "1");
  return d;
}

int cmd_gamma(const mb::RunConfig& cfg) {
  long long n_max = cfg.get_int("n_max");
  if (n_max < 1) throw UsageError("gamma: --n-max must be >= 1");
  emit(cfg, "gamma.csv", mb::gamma_csv(static_cast<int>(n_max), cfg));
  return 0;
}

int cmd_gn_table(const mb::RunConfig& cfg) {
  long long n_max = cfg.get_int("n_max");
  if (n_max < 0) throw UsageError("gn-table: --n-max must be >= 0");
  double t_min = cfg.get_double("t_min");
  double t_max = cfg.get_double("t_max");
  long long points = cfg.get_int("t_points");
  if (t_min < -0.5 || t_max < t_min || points < 1) throw UsageError("gn-table: bad t range");
  emit(cfg, "gn_table.csv", mb::gn_table_csv(static_cast<int>(n_max), t_min, t_max, static_cast<int>(points), cfg));
  return 0;
}

std::vector<long double> p_grid(const mb::RunConfig& cfg) {
  std::vector<long double> ps;
  for (double p : cfg.get_list("p")) {
    if (!(p > 1)) throw UsageError("p values must be > 1");
    ps.push_back(p);
  }
  if (ps.empty()) throw UsageError("empty p grid");
  return ps;
}

int cmd_constants(const mb::RunConfig& cfg) {
  auto ps = p_grid(cfg);
  long long n_max = cfg.get_int("n_max");
  if (n_max < 1) throw UsageError("constants: --n-max must be >= 1");
  double c1 = cfg.get_double("c1");
  if (!(c1 >= 1)) throw UsageError("constants: --c1 must be >= 1");
  std::vector<mb::BoundsReport> reports;
  for (long double p : ps) reports.push_back(mb::build_bounds_report(p, static_cast<int>(n_max), c1));
  std::string format = cfg.get("format");
  if (format != "csv" && format != "json" && format != "both") throw UsageError("unknown format: " + format);
  if (format == "csv" || format == "both") emit(cfg, "constants.csv", mb::constants_csv(reports, cfg));
  if (format == "json" || format == "both")
    emit(cfg, "constants.json", mb::constants_json(reports, cfg, mb::utc_timestamp()).dump(2));
  return 0;
}

int cmd_verify(const mb::RunConfig& cfg) {
  std::vector<mb::Suite> suites;
  std::string suite = cfg.get("suite");
  if (suite == "all") {
    suites = {mb::Suite::Lemma5, mb::Suite::Growth, mb::Suite::Lemma7, mb::Suite::Thm2, mb::Suite::Main};
  } else {
    try {
      suites.push_back(mb::parse_suite(suite));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  mb::SuiteConfig sc;
  sc.seed = cfg.get_u64("seed");
  sc.functions = static_cast<int>(cfg.get_int("functions"));
  sc.points = static_cast<int>(cfg.get_int("points"));
  sc.max_refinements = static_cast<int>(cfg.get_int("max_refinements"));
  sc.grid.width = parse_width(cfg.get("grid_width"));
  if (!(sc.grid.width > 0)) throw UsageError("grid width must be positive");
  sc.ps = p_grid(cfg);
  sc.main.c1 = cfg.get_double("c1");
  sc.main.n_max = static_cast<int>(cfg.get_int("n_max"));
  sc.threads = static_cast<unsigned>(cfg.get_int("threads"));
  if (sc.functions < 0 || sc.points < 1 || sc.max_refinements < 0) throw UsageError("bad corpus parameters");

  std::vector<std::string> warnings;
  for (long double p : sc.ps)
    if (p < mb::kValidatedMinP)
      warnings.push_back("p=" + mb::format_real(p) + " is below the validated range (p >= 1.01)");
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

  const std::string ts = mb::utc_timestamp();
  mb::SuiteResult result;
  std::string input = cfg.get("input");
  if (!input.empty()) {
    std::ifstream in(input);
    if (!in) throw UsageError("cannot open " + input);
    mb::StepFunction f = mb::read_stepfn(in);
    if (f.is_zero()) {
      mb::json j = mb::json_header(cfg, "verify", ts);
      j["input_error"] = "input function is zero: ||f||_p = 0 is not a valid input";
      j["warnings"] = warnings;
      emit(cfg, "verify.json", j.dump(2));
      std::cerr << "input rejected: zero function\n";
      return 2;
    }
    result = mb::run_suites_on({f}, {"input"}, suites, sc);
  } else {
    result = mb::run_suites(suites, sc);
  }
  mb::json j = mb::verify_json(result, suites, cfg, ts, warnings);
  emit(cfg, "verify.json", j.dump(2));
  std::size_t violations = result.summary().violations;
  for (mb::Suite s : suites) {
    auto sum = result.summary(s);
    std::cerr << mb::to_string(s) << ": " << sum.checks << " checks, " << sum.pass_first << " pass at depth 0, "
              << sum.pass_final << " pass after refinement, " << sum.inconclusive_final << " inconclusive, "
              << sum.violations << " violations\n";
  }
  return violations == 0 ? 0 : 1;
}

int cmd_search(const mb::RunConfig& cfg) {
  mb::SearchConfig sc;
  auto ps = p_grid(cfg);
  if (ps.size() != 1) throw UsageError("search takes a single --p value");
  sc.p = static_cast<double>(ps.front());
  sc.pieces = static_cast<int>(cfg.get_int("pieces"));
  sc.iterations = static_cast<int>(cfg.get_int("iterations"));
  sc.seed = cfg.get_u64("seed");
  sc.c1 = cfg.get_double("c1");
  sc.n_max = static_cast<int>(cfg.get_int("n_max"));
  if (sc.pieces < 1) throw UsageError("search: --pieces must be >= 1");
  if (sc.iterations < 1) throw UsageError("search: --iterations must be >= 1");
  auto result = mb::extremal_search(sc);
  emit(cfg, "search.json", mb::search_json(result, sc, cfg, mb::utc_timestamp()).dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maxbound: lower bounds for the centered Hardy-Littlewood maximal operator on the line"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", mb::kVersion);
  Flags flags;
  app.add_option("--config", flags.config_path, "key=value config file (default: $MAXBOUND_CONFIG)");
  app.add_option("--seed", flags.seed, "random seed");
  app.add_option("--grid-width", flags.grid_width, "uniform grid width, e.g. 1/256");
  app.add_option("--n-max", flags.n_max, "largest n");
  app.add_option("--c1", flags.c1, "weak (1,1) constant used for the A_p upper bound");
  app.add_option("--p", flags.p, "comma-separated exponents");
  app.add_option("--out", flags.out, "output directory (default: stdout)");
  app.add_option("--threads", flags.threads, "worker threads (0 = all cores)");

  mb::RunConfig command;
  mb::RunConfig defaults = base_defaults();

  auto* gamma = app.add_subcommand("gamma", "table of gamma_n with series terms");
  auto* gn = app.add_subcommand("gn-table", "plot-ready table of g_n(t) and h_n(t)");
  std::string t_min, t_max, t_points;
  gn->add_option("--t-min", t_min, "smallest t (>= -1/2)");
  gn->add_option("--t-max", t_max, "largest t");
  gn->add_option("--t-points", t_points, "number of t values");
  auto* constants = app.add_subcommand("constants", "lower-bound constants per p and n");
  std::string format;
  constants->add_option("--format", format, "csv, json or both");
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite, functions, points, refinements, input;
  verify->add_option("--suite", suite, "lemma5, growth, lemma7, thm2, main or all");
  verify->add_option("--functions", functions, "random corpus size");
  verify->add_option("--points", points, "sample points per function");
  verify->add_option("--max-refinements", refinements, "grid halvings for inconclusive checks");
  verify->add_option("--input", input, "verify this stepfn v1 file instead of the random corpus");
  auto* search = app.add_subcommand("search", "empirical search for small ||Mf||_p/||f||_p");
  std::string pieces, iterations;
  search->add_option("--pieces", pieces, "pieces per step function");
  search->add_option("--iterations", iterations, "ratio evaluations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto set_if = [&command](const char* key, const std::string& v) {
    if (!v.empty()) command.set(key, v);
  };
  try {
    if (gamma->parsed()) {
      defaults.set("n_max", "30");
      return cmd_gamma(effective_config(flags, defaults, command));
    }
    if (gn->parsed()) {
      defaults.set("n_max", "8");
      defaults.set("t_min", "-0.5");
      defaults.set("t_max", "10");
      defaults.set("t_points", "201");
      set_if("t_min", t_min);
      set_if("t_max", t_max);
      set_if("t_points", t_points);
      return cmd_gn_table(effective_config(flags, defaults, command));
    }
    if (constants->parsed()) {
      defaults.set("n_max", "500");
      defaults.set("p", "1.25,1.5,2,3,5,10");
      defaults.set("format", "csv");
      set_if("format", format);
      return cmd_constants(effective_config(flags, defaults, command));
    }
    if (verify->parsed()) {
      defaults.set("n_max", "500");
      defaults.set("p", "1.25,1.5,2,3");
      defaults.set("suite", "lemma5");
      defaults.set("functions", "500");
      defaults.set("points", "20");
      defaults.set("max_refinements", "3");
      defaults.set("input", "");
      set_if("suite", suite);
      set_if("functions", functions);
      set_if("points", points);
      set_if("max_refinements", refinements);
      set_if("input", input);
      return cmd_verify(effective_config(flags, defaults, command));
    }
    if (search->parsed()) {
      defaults.set("n_max", "500");
      defaults.set("p", "1.5");
      defaults.set("pieces", "4");
      defaults.set("iterations", "2000");
      set_if("pieces", pieces);
      set_if("iterations", iterations);
      return cmd_search(effective_config(flags, defaults, command));
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
