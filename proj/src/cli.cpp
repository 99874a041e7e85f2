#include "splap/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "splap/acceptance.hpp"
#include "splap/analysis.hpp"
#include "splap/errors.hpp"
#include "splap/exact1d.hpp"
#include "splap/pde_strip.hpp"

namespace splap::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Short form for file names: 2, 0.5, 1e-06.
std::string short_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

class Config {
 public:
  explicit Config(Settings s) : settings_(std::move(s)) {}

  bool has(const std::string& key) const { return settings_.count(key) > 0; }

  std::string text(const std::string& key, const std::string& fallback) const {
    const auto it = settings_.find(key);
    return it == settings_.end() ? fallback : it->second.value;
  }

  double number(const std::string& key, double fallback) const {
    const auto it = settings_.find(key);
    if (it == settings_.end()) return fallback;
    return parse_number(key, it->second.value, it->second.origin);
  }

  std::vector<double> numbers(const std::string& key, double fallback) const {
    const auto it = settings_.find(key);
    if (it == settings_.end()) return {fallback};
    std::vector<double> out;
    for (const auto& item : split(it->second.value, ',')) {
      out.push_back(parse_number(key, item, it->second.origin));
    }
    return out;
  }

  long integer(const std::string& key, long fallback) const {
    const auto it = settings_.find(key);
    if (it == settings_.end()) return fallback;
    const std::string& v = it->second.value;
    char* end = nullptr;
    errno = 0;
    const long n = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0' || errno == ERANGE) fail(key, v, it->second.origin, "an integer");
    return n;
  }

 private:
  static double parse_number(const std::string& key, const std::string& v, const std::string& origin) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || !std::isfinite(x)) fail(key, v, origin, "a finite number");
    return x;
  }

  [[noreturn]] static void fail(const std::string& key, const std::string& v, const std::string& origin,
                                const std::string& what) {
    throw ConfigError(origin + ": key '" + key + "' expects " + what + ", got '" + v + "'");
  }

  Settings settings_;
};

int exact1d_command(const Config& cfg, std::ostream& out) {
  const auto ps = cfg.numbers("p", 2.0);
  const auto gammas = cfg.numbers("gamma", 3.0);
  const auto Ms = cfg.numbers("M", 0.0);
  const double t_max = cfg.number("t_max", kDefaultTMax);
  const long points = cfg.integer("points", static_cast<long>(kDefaultTablePoints));
  if (points < 2) throw ConfigError("key 'points' must be at least 2");
  const std::filesystem::path dir = cfg.text("out", ".");
  std::filesystem::create_directories(dir);

  for (double p : ps) {
    for (double gamma : gammas) {
      for (double M : Ms) {
        Params P;
        P.p = p;
        P.gamma = gamma;
        P.validate();
        const auto sol = build_vM(P, M, t_max, static_cast<std::size_t>(points));
        const auto path =
            dir / ("exact1d_p" + short_num(p) + "_gamma" + short_num(gamma) + "_M" + short_num(M) + ".csv");
        std::ofstream csv(path, std::ios::binary);
        if (!csv) throw ConfigError("cannot open '" + path.string() + "' for writing");
        csv << "t,v,v_prime,energy_residual\n";
        for (std::size_t i = 0; i < sol.size(); ++i) {
          const double t = sol.t()[i], v = sol.v()[i];
          const Slope s = energy_slope(P, M, v);
          if (s.infinite) {
            csv << fmt(t) << ',' << fmt(v) << ",inf,nan\n";
          } else {
            csv << fmt(t) << ',' << fmt(v) << ',' << fmt(s.value) << ',' << fmt(energy(P, v, s.value) - M) << '\n';
          }
        }
        out << "wrote " << path.string() << "\n";
      }
    }
  }
  return kExitOk;
}

TopBoundary::Kind top_kind(const std::string& s) {
  if (s == "v0") return TopBoundary::Kind::DirichletV0;
  if (s == "const") return TopBoundary::Kind::DirichletConst;
  if (s == "slope") return TopBoundary::Kind::NeumannSlope;
  throw ConfigError("key 'top' expects v0, const or slope, got '" + s + "'");
}

void write_plot_script(const Field2D& field, const FitResult& fit, const std::filesystem::path& csv,
                       const std::filesystem::path& gp) {
  std::ofstream os(gp, std::ios::binary);
  if (!os) throw ConfigError("cannot open '" + gp.string() + "' for writing");
  os << "set datafile separator ','\n"
     << "set logscale xy\n"
     << "set key left top\n"
     << "set xlabel 'x_N'\n"
     << "set ylabel 'u'\n"
     << "C = " << fmt(fit.constant) << "\n"
     << "b = " << fmt(fit.exponent) << "\n"
     << "fit_line(x) = C * x**b\n"
     << "plot \\\n";
  std::set<int> cols = {0, field.cols() / 4, field.cols() / 2};
  for (int i : cols) {
    const std::string x1 = fmt(field.x1[static_cast<std::size_t>(i)]);
    os << "  '" << csv.filename().string() << "' using 2:(abs($1 - " << x1 << ") < 1e-12 ? $3 : 1/0)"
       << " with linespoints title 'x_1 = " << short_num(field.x1[static_cast<std::size_t>(i)]) << "', \\\n";
  }
  os << "  fit_line(x) with lines dashtype 2 title sprintf('%.4f x_N^{%.4f}', C, b)\n";
}

int solve_command(const Config& cfg, std::ostream& out) {
  const auto ps = cfg.numbers("p", 2.0);
  const auto gammas = cfg.numbers("gamma", 3.0);
  const std::filesystem::path dir = cfg.text("out", ".");
  std::filesystem::create_directories(dir);

  for (double p : ps) {
    for (double gamma : gammas) {
      StripProblem prob;
      prob.params.p = p;
      prob.params.gamma = gamma;
      prob.params.N = static_cast<int>(cfg.integer("N", 2));
      prob.params.g = Perturbation::parse(cfg.text("g", "none"));
      prob.height = cfg.number("height", prob.height);
      prob.period = cfg.number("period", prob.period);
      prob.nx = static_cast<int>(cfg.integer("nx", prob.nx));
      prob.ny = static_cast<int>(cfg.integer("ny", prob.ny));
      prob.grading = cfg.number("grading", prob.grading);
      prob.top.kind = top_kind(cfg.text("top", "v0"));
      prob.top.s = cfg.number("s", prob.top.s);
      prob.top.epsilon = cfg.number("epsilon", prob.top.epsilon);
      prob.top.value = cfg.number("value", prob.top.value);
      prob.lateral_amplitude = cfg.number("amplitude", prob.lateral_amplitude);
      prob.solver.rtol = cfg.number("rtol", prob.solver.rtol);
      prob.solver.delta_start = cfg.number("delta_start", prob.solver.delta_start);
      prob.solver.delta_min = cfg.number("delta_min", prob.solver.delta_min);
      prob.solver.stages = static_cast<int>(cfg.integer("stages", prob.solver.stages));
      prob.solver.max_newton = static_cast<int>(cfg.integer("max_newton", prob.solver.max_newton));

      const Field2D field = solve(prob);
      const std::string stem = cfg.text("name", "solve_p" + short_num(p) + "_gamma" + short_num(gamma));
      const auto csv = dir / (stem + ".csv");
      const auto gp = dir / (stem + ".gp");
      write_field_csv(field, csv.string());

      const auto [lo, hi] = default_window(field);
      std::vector<double> x, v;
      for (int j = 0; j < field.rows(); ++j) {
        for (int i = 0; i < field.cols(); ++i) {
          x.push_back(field.x2[static_cast<std::size_t>(j)]);
          v.push_back(field.values(j, i));
        }
      }
      const FitResult fit = fit_exponent(x, v, lo, hi);
      write_plot_script(field, fit, csv, gp);

      out << "wrote " << csv.string() << "\n"
          << "wrote " << gp.string() << "\n"
          << "p=" << fmt(p) << " gamma=" << fmt(gamma) << "\n"
          << "min_dudxN=" << fmt(monotonicity_check(field)) << "\n"
          << "residual=" << fmt(field.final_residual) << "\n"
          << "iterations=" << field.iterations << "\n"
          << "lateral_variation=" << fmt(lateral_variation(field)) << "\n"
          << "exponent=" << fmt(fit.exponent) << " expected=" << fmt(prob.params.beta_u()) << "\n";
    }
  }
  return kExitOk;
}

int check_command(const Config& cfg, bool list, bool verbose, std::ostream& out) {
  if (list) {
    for (const auto& c : acceptance::criteria()) out << c.id << " " << c.title << "\n";
    return kExitOk;
  }
  acceptance::Options opts;
  opts.tol_scale = cfg.number("tol_scale", 1.0);
  if (!(opts.tol_scale > 0.0)) throw ConfigError("key 'tol_scale' must be positive");
  opts.seed = static_cast<std::uint64_t>(cfg.integer("seed", static_cast<long>(opts.seed)));
  if (const char* env = std::getenv("SPLAP_SEED")) {
    Settings s;
    s["seed"] = {env, "environment SPLAP_SEED"};
    opts.seed = static_cast<std::uint64_t>(Config(s).integer("seed", 0));
  }
  std::vector<int> ids;
  if (cfg.has("ids")) {
    for (double id : cfg.numbers("ids", 0)) ids.push_back(static_cast<int>(id));
  }
  const auto results = acceptance::run(opts, ids);
  bool all = true;
  nlohmann::json report = nlohmann::json::array();
  for (const auto& r : results) {
    out << acceptance::summary_line(r) << "\n";
    if (verbose) out << acceptance::detail_lines(r);
    all = all && r.pass();
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"name", c.name}, {"measured", c.measured}, {"target", c.target},
                        {"tolerance", c.tolerance}, {"pass", c.pass()}});
    }
    report.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass()}, {"seconds", r.seconds},
                      {"error", r.error}, {"checks", checks}});
  }
  if (cfg.has("report")) {
    std::ofstream os(cfg.text("report", ""), std::ios::binary);
    if (!os) throw ConfigError("cannot open report file '" + cfg.text("report", "") + "'");
    os << report.dump(2) << "\n";
  }
  out << (all ? "all criteria passed" : "some criteria FAILED") << "\n";
  return all ? kExitOk : kExitCheck;
}

const std::vector<std::string> kExact1dKeys = {"p", "gamma", "M", "t_max", "points", "out", "seed"};
const std::vector<std::string> kSolveKeys = {
    "p",     "gamma", "N",     "g",         "height", "period",      "nx",        "ny",
    "grading", "top", "s",     "epsilon",   "value",  "amplitude",   "rtol",      "delta_start",
    "delta_min", "stages", "max_newton", "out", "name", "seed"};
const std::vector<std::string> kCheckKeys = {"tol_scale", "seed", "ids", "report"};

}  // namespace

Settings read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  Settings out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string origin = path + ":" + std::to_string(number);
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(origin + ": expected key=value, got '" + line + "'");
    }
    out[trim(line.substr(0, eq))] = {trim(line.substr(eq + 1)), origin};
  }
  return out;
}

Settings collect_settings(const std::vector<std::string>& args, const std::vector<std::string>& allowed) {
  Settings cli;
  for (const auto& a : args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + a + "'");
    cli[a.substr(0, eq)] = {a.substr(eq + 1), "command line"};
  }
  Settings merged;
  if (const auto it = cli.find("config"); it != cli.end()) {
    merged = read_config_file(it->second.value);
    cli.erase(it);
  }
  for (auto& [k, v] : cli) merged[k] = v;
  for (const auto& [k, v] : merged) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ConfigError(v.origin + ": unknown key '" + k + "'");
    }
  }
  return merged;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Singular p-Laplace toolkit: exact 1D profiles, strip solves and the acceptance suite", "splap"};
  app.require_subcommand(0, 1);
  std::vector<std::string> kv_exact, kv_solve, kv_check;
  bool list = false, verbose = false;
  auto* exact = app.add_subcommand("exact1d", "Tabulate v_M (v0 for M = 0) to CSV; comma lists sweep p, gamma, M");
  exact->add_option("settings", kv_exact, "key=value: p gamma M t_max points out config");
  auto* solve_cmd = app.add_subcommand("solve", "Solve on a truncated strip; writes CSV and a gnuplot script");
  solve_cmd->add_option("settings", kv_solve,
                        "key=value: p gamma N g height period nx ny grading top s epsilon value "
                        "amplitude rtol delta_start delta_min stages max_newton out name config");
  auto* check = app.add_subcommand("check", "Run the acceptance suite");
  check->add_option("settings", kv_check, "key=value: tol_scale seed ids report config");
  check->add_flag("--list", list, "List criterion ids without running them");
  check->add_flag("-v,--verbose", verbose, "Print every check");

  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (exact->parsed()) {
      if (kv_exact.empty()) {
        err << exact->help();
        return kExitUsage;
      }
      return exact1d_command(Config(collect_settings(kv_exact, kExact1dKeys)), out);
    }
    if (solve_cmd->parsed()) {
      if (kv_solve.empty()) {
        err << solve_cmd->help();
        return kExitUsage;
      }
      return solve_command(Config(collect_settings(kv_solve, kSolveKeys)), out);
    }
    if (check->parsed()) return check_command(Config(collect_settings(kv_check, kCheckKeys)), list, verbose, out);
    err << app.help();
    return kExitUsage;
  } catch (const NonexistenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNonexistence;
  } catch (const SolveError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const PositivityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace splap::cli
