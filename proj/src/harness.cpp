#include "rbfpum/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>
#include <json.hpp>

#include "rbfpum/metrics.hpp"

namespace rbfpum {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, text));
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  std::size_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", key, text));
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes")
    return true;
  if (text == "false" || text == "0" || text == "no")
    return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

const char* layout_name(InitialLayout l) {
  return l == InitialLayout::Grid ? "grid" : "halton";
}

const char* indicator_name(IndicatorKind k) {
  return k == IndicatorKind::InterpolantDisagreement ? "interp" : "coarse-fine";
}

const char* stopping_name(StoppingRule s) {
  return s == StoppingRule::NoChange ? "default" : "paper";
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw Error(fmt::format("cannot open {} for writing", path.string()));
  return out;
}

// NaN prints as an empty CSV field.
std::string csv_number(double v) {
  return std::isnan(v) ? std::string() : fmt::format("{:.17g}", v);
}

} // namespace

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "problem") {
    parse_problem_name(value);
    c.problem = value;
  } else if (key == "mode") {
    if (value == "grid")
      c.layout = InitialLayout::Grid;
    else if (value == "halton")
      c.layout = InitialLayout::Halton;
    else
      throw ConfigError(fmt::format("mode: '{}' (expected grid or halton)", value));
  } else if (key == "n_side") {
    c.n_side = static_cast<int>(parse_count(key, value));
  } else if (key == "epsilon") {
    c.epsilon = parse_double(key, value);
  } else if (key == "adaptive") {
    c.adaptive = parse_bool(key, value);
  } else if (key == "indicator") {
    if (value == "interp")
      c.indicator = IndicatorKind::InterpolantDisagreement;
    else if (value == "coarse-fine")
      c.indicator = IndicatorKind::CoarseFine;
    else
      throw ConfigError(fmt::format("indicator: '{}' (expected interp or coarse-fine)", value));
  } else if (key == "tau_min") {
    c.tau_min = parse_double(key, value);
  } else if (key == "tau_max") {
    c.tau_max = parse_double(key, value);
  } else if (key == "test_multiplier") {
    c.test_multiplier = parse_double(key, value);
  } else if (key == "patches_per_axis") {
    c.patches_per_axis = parse_count(key, value);
  } else if (key == "overlap") {
    c.overlap = parse_double(key, value);
  } else if (key == "max_iterations") {
    c.max_iterations = parse_count(key, value);
  } else if (key == "max_points") {
    c.max_points = parse_count(key, value);
  } else if (key == "separation") {
    c.separation = parse_double(key, value);
  } else if (key == "add_spacing") {
    c.add_spacing = parse_double(key, value);
  } else if (key == "stopping") {
    if (value == "default")
      c.stopping = StoppingRule::NoChange;
    else if (value == "paper")
      c.stopping = StoppingRule::EmptyRemoval;
    else
      throw ConfigError(fmt::format("stopping: '{}' (expected default or paper)", value));
  } else if (key == "out") {
    c.out_dir = value;
  } else if (key == "write_iterations") {
    c.write_iterations = parse_bool(key, value);
  } else {
    throw ConfigError(fmt::format("unknown setting '{}'", key));
  }
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(fmt::format("cannot read config file {}", path.string()));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(fmt::format("{}:{}: expected key = value", path.string(), lineno));
    apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

void validate(const RunConfig& c) {
  auto positive = [](const char* name, double v) {
    if (!(v > 0.0))
      throw ConfigError(fmt::format("{} must be positive", name));
  };
  parse_problem_name(c.problem);
  if (c.n_side < 3)
    throw ConfigError("n_side must be at least 3");
  positive("epsilon", c.epsilon);
  if (!std::isfinite(c.epsilon))
    throw ConfigError("epsilon must be finite");
  positive("tau_max", c.tau_max);
  if (!(c.tau_min >= 0.0) || !(c.tau_min < c.tau_max))
    throw ConfigError("thresholds must satisfy 0 <= tau_min < tau_max");
  positive("test_multiplier", c.test_multiplier);
  positive("overlap", c.overlap);
  if (c.overlap < 1.0)
    throw ConfigError("overlap must be at least 1");
  positive("separation", c.separation);
  if (!(c.add_spacing >= 0.0))
    throw ConfigError("add_spacing must be non-negative");
  if (c.max_iterations < 1 || c.max_points < 1)
    throw ConfigError("iteration and point limits must be positive");
}

AmrsOptions amrs_options(const RunConfig& c) {
  AmrsOptions o;
  o.indicator.kind = c.indicator;
  o.indicator.tau_min = c.adaptive ? c.tau_min : 0.0;
  o.indicator.tau_max = c.adaptive ? c.tau_max : std::numeric_limits<double>::infinity();
  o.indicator.test_multiplier = c.test_multiplier;
  o.stopping = c.stopping;
  o.max_iterations = c.adaptive ? c.max_iterations : 1;
  o.max_points = c.max_points;
  o.separation = c.separation;
  o.add_spacing = c.add_spacing;
  o.kernel = KernelModel(KernelFamily::Matern6, c.epsilon);
  o.discretization.overlap = c.overlap;
  o.discretization.patches_per_axis = c.patches_per_axis;
  return o;
}

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<RefinementState>& history) {
  std::ofstream out = open_out(path);
  out << "k,N_i,N_b,N_tot,added,removed,mae,rmse,cn,seconds,stop_reason\n";
  for (const RefinementState& s : history)
    out << fmt::format("{},{},{},{},{},{},{},{},{},{:.6f},{}\n", s.k, s.points.num_interior(),
                       s.points.num_boundary(), s.points.size(), s.add_set.size(),
                       s.remove_set.size(), csv_number(s.mae), csv_number(s.rmse),
                       csv_number(s.condition), s.seconds, to_string(s.stop_reason));
}

void write_solution_grid(const std::filesystem::path& path, const Solution& solution,
                         const PoissonProblem& problem) {
  const std::vector<Point> grid = evaluation_grid();
  const Eigen::VectorXd u = evaluate(solution, grid);
  std::ofstream out = open_out(path);
  out << "x,y,u,exact,abs_error\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double ui = u(static_cast<Eigen::Index>(i));
    const double ex = problem.has_exact() ? problem.exact(grid[i])
                                          : std::numeric_limits<double>::quiet_NaN();
    out << fmt::format("{:.17g},{:.17g},{:.17g},{},{}\n", grid[i].x(), grid[i].y(), ui,
                       csv_number(ex), csv_number(std::abs(ui - ex)));
  }
}

std::string report_json(const RunReport& r, const RunConfig& c) {
  nlohmann::ordered_json j;
  j["problem"] = r.problem;
  j["N_tot"] = r.n_total;
  j["N_i"] = r.n_interior;
  j["N_b"] = r.n_boundary;
  j["MAE"] = r.mae;
  j["RMSE"] = r.rmse;
  j["CN"] = r.condition;
  j["iterations"] = r.iterations;
  j["stop_reason"] = r.stop_reason;
  j["config"] = {
      {"problem", c.problem},
      {"mode", layout_name(c.layout)},
      {"n_side", c.n_side},
      {"epsilon", c.epsilon},
      {"adaptive", c.adaptive},
      {"indicator", indicator_name(c.indicator)},
      {"tau_min", c.tau_min},
      {"tau_max", std::isinf(c.tau_max) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(c.tau_max)},
      {"test_multiplier", c.test_multiplier},
      {"patches_per_axis", c.patches_per_axis},
      {"overlap", c.overlap},
      {"max_iterations", c.max_iterations},
      {"max_points", c.max_points},
      {"separation", c.separation},
      {"add_spacing", c.add_spacing},
      {"stopping", stopping_name(c.stopping)},
  };
  j["timing"] = {{"seconds", r.seconds}};
  return j.dump(2) + "\n";
}

RunReport run(const RunConfig& config, AmrsResult* result_out) {
  validate(config);
  const PoissonProblem problem = make_problem(parse_problem_name(config.problem));
  const AmrsOptions options = amrs_options(config);
  const bool write = !config.out_dir.empty();
  if (write)
    std::filesystem::create_directories(config.out_dir);

  const auto start = std::chrono::steady_clock::now();
  HaltonStream halton;
  PointSet initial = make_initial_points(config.n_side, config.layout, &halton);
  std::vector<RefinementState> history;
  AmrsResult result;
  try {
    result = amrs_run(problem, options, std::move(initial), halton, &history);
  } catch (const NumericalError&) {
    if (write)
      write_history_csv(config.out_dir / "history.csv", history);
    throw;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const RefinementState& last = result.history.back();
  RunReport report;
  report.problem = problem.name();
  report.n_total = last.points.size();
  report.n_interior = last.points.num_interior();
  report.n_boundary = last.points.num_boundary();
  report.mae = last.mae;
  report.rmse = last.rmse;
  report.condition = last.condition;
  report.iterations = result.history.size();
  report.stop_reason = to_string(result.reason);
  report.seconds = seconds;

  if (write) {
    const auto& dir = config.out_dir;
    write_history_csv(dir / "history.csv", result.history);
    write_points_csv(dir / "points_final.csv", last.points);
    if (config.write_iterations)
      for (const RefinementState& s : result.history)
        write_points_csv(dir / fmt::format("points_iter_{}.csv", s.k), s.points, s.test);
    write_solution_grid(dir / "solution_grid.csv", result.solution, problem);
    open_out(dir / "report.json") << report_json(report, config);
  }
  if (result_out)
    *result_out = std::move(result);
  return report;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& config, const std::vector<int>& sides) {
  validate(config);
  const PoissonProblem problem = make_problem(parse_problem_name(config.problem));
  const KernelModel kernel(KernelFamily::Matern6, config.epsilon);
  const DiscretizationOptions opts{config.overlap, config.patches_per_axis};
  std::vector<ConvergenceRow> rows;
  for (int side : sides) {
    const auto start = std::chrono::steady_clock::now();
    auto disc = discretize(make_initial_points(side, InitialLayout::Grid), kernel, opts);
    const GlobalSystem system = assemble_global(*disc, problem);
    const SparseFactorization factorization(system.L);
    ConvergenceRow row;
    row.n_side = side;
    row.n_total = disc->points.size();
    row.patches_per_axis = disc->covering.patches_per_axis();
    row.condition = estimate_condition(system.L, factorization);
    const Solution solution = make_solution(std::move(disc), solve_nodal(system, factorization));
    const ErrorNorms err = compute_errors(solution, problem);
    row.mae = err.mae;
    row.rmse = err.rmse;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(row);
  }
  return rows;
}

} // namespace rbfpum
