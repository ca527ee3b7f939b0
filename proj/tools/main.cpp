#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latsim/log_io.hpp"
#include "latsim/metrics.hpp"
#include "latsim/scenario.hpp"
#include "latsim/scenario_yaml.hpp"
#include "latsim/sim_engine.hpp"
#include "latsim/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace latsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;   // bad scenario, bad arguments, refused overwrite
constexpr int kExitAborted = 3;  // simulation left the model's validity domain

std::string out_root() {
  if (const char* env = std::getenv("LATSIM_OUT_ROOT")) return env;
  return "out";
}

std::string fmt_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Scenario resolve_scenario(const std::string& preset, const std::string& file) {
  if (!preset.empty()) {
    Scenario sc = make_preset(preset);
    sc.validate();
    return sc;
  }
  return load_scenario(file);
}

/// Runs one scenario and writes the standard artifact set into out_dir.
/// Returns the metrics and whether the run aborted.
std::pair<Metrics, std::optional<AbortInfo>> run_and_write(const Scenario& sc,
                                                           const fs::path& out_dir, bool force) {
  if (fs::exists(out_dir / "metrics.json") && !force)
    throw std::runtime_error(out_dir.string() +
                             " already holds a run; pass --force to overwrite");
  fs::create_directories(out_dir);
  save_scenario(sc, (out_dir / "scenario_echo.yaml").string());

  const SimResult result = run_scenario(sc);
  write_csv(result.log, (out_dir / "log.csv").string());
  const Metrics m = compute_metrics(result.log);
  std::ofstream mj(out_dir / "metrics.json");
  mj << metrics_to_json(m, sc.name, result.abort);
  if (!mj.good()) throw std::runtime_error("cannot write metrics.json");
  write_run_plots(result.log, out_dir.string());
  return {m, result.abort};
}

void print_summary(const Scenario& sc, const Metrics& m, const std::optional<AbortInfo>& abort,
                   const fs::path& out_dir) {
  std::cout << "scenario " << sc.name << ": " << m.duration << " s simulated, rms_z1 = "
            << m.rms_z1 << " m, max|z1| = " << m.max_abs_z1 << " m\n";
  std::cout << "  terminal ||z|| = " << m.terminal_z_norm << " (initial " << m.initial_z_norm
            << "), steering saturated " << 100.0 * m.sat_duty << "% of samples\n";
  if (m.conv_time_eh1)
    std::cout << "  e_h1 entered and stayed in its 5% band at t = " << *m.conv_time_eh1
              << " s\n";
  if (m.conv_time_eh3)
    std::cout << "  e_h3 entered and stayed in its 5% band at t = " << *m.conv_time_eh3
              << " s\n";
  if (abort)
    std::cout << "  ABORTED at t = " << abort->t << " s: " << abort->reason << "\n";
  std::cout << "  artifacts: " << out_dir.string() << "\n";
}

int cmd_run(const std::string& preset, const std::string& file, std::string out_dir_arg,
            bool force) {
  const Scenario sc = resolve_scenario(preset, file);
  const fs::path out_dir = out_dir_arg.empty() ? fs::path(out_root()) / sc.name
                                               : fs::path(out_dir_arg);
  const auto [m, abort] = run_and_write(sc, out_dir, force);
  print_summary(sc, m, abort, out_dir);
  return abort ? kExitAborted : kExitOk;
}

int cmd_validate(const std::string& preset, const std::string& file, const std::string& echo) {
  Scenario sc;
  if (!preset.empty())
    sc = make_preset(preset);
  else {
    // Parse without validating so every violation is listed below.
    std::ifstream in(file);
    if (!in) throw std::runtime_error(file + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    sc = parse_scenario(buf.str(), file);
  }
  const auto errors = sc.validation_errors();
  if (!echo.empty()) save_scenario(sc, echo);
  if (errors.empty()) {
    std::cout << "scenario " << sc.name << ": OK\n";
    return kExitOk;
  }
  std::cout << "scenario " << sc.name << ": " << errors.size() << " problem(s)\n";
  for (const auto& e : errors) std::cout << "  - " << e << "\n";
  return kExitConfig;
}

PiecewiseProfile scale_profile(const PiecewiseProfile& p, double s) {
  std::vector<ProfileSegment> segments = p.segments();
  for (auto& seg : segments) {
    seg.value *= s;
    seg.amplitude *= s;
  }
  return PiecewiseProfile(std::move(segments));
}

struct SweepJob {
  double value = 0.0;
  Scenario sc;
  fs::path dir;
  std::string status;  // ok | aborted | invalid | error
  std::string detail;
  Metrics metrics;
};

int cmd_sweep(const std::string& preset, const std::string& file, const std::string& axis,
              const std::vector<double>& values, std::string out_dir_arg, bool force,
              unsigned jobs) {
  const Scenario base = resolve_scenario(preset, file);
  const fs::path sweep_dir = out_dir_arg.empty()
                                 ? fs::path(out_root()) / ("sweep_" + base.name + "_" + axis)
                                 : fs::path(out_dir_arg);

  std::vector<SweepJob> work;
  for (double v : values) {
    SweepJob job;
    job.value = v;
    job.sc = base;
    if (axis == "epsilon")
      job.sc.observer.epsilon = v;
    else if (axis == "nu_x")
      job.sc.nu_x = v;
    else if (axis == "bank_scale")
      job.sc.banking = scale_profile(base.banking, v);
    job.sc.name = base.name + "_" + axis + "_" + fmt_value(v);
    job.dir = sweep_dir / (axis + "_" + fmt_value(v));
    work.push_back(std::move(job));
  }

  std::atomic<std::size_t> next{0};
  std::mutex io_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      SweepJob& job = work[i];
      try {
        job.sc.validate();
        const auto [m, abort] = run_and_write(job.sc, job.dir, force);
        job.metrics = m;
        job.status = abort ? "aborted" : "ok";
        if (abort) job.detail = abort->reason;
      } catch (const std::invalid_argument& ex) {
        job.status = "invalid";
        job.detail = ex.what();
      } catch (const std::exception& ex) {
        job.status = "error";
        job.detail = ex.what();
      }
      std::lock_guard<std::mutex> lock(io_mutex);
      std::cout << "  " << axis << " = " << fmt_value(job.value) << ": " << job.status
                << (job.detail.empty() ? "" : " (" + job.detail + ")") << "\n";
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_threads =
      std::min<unsigned>(jobs > 0 ? jobs : std::min(hw, 4u), static_cast<unsigned>(work.size()));
  std::cout << "sweeping " << axis << " over " << work.size() << " value(s), " << n_threads
            << " worker(s)\n";
  std::vector<std::thread> pool;
  for (unsigned i = 0; i + 1 < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  nlohmann::json summary = nlohmann::json::array();
  bool all_ok = true;
  for (const auto& job : work) {
    nlohmann::json entry;
    entry["axis"] = axis;
    entry["value"] = job.value;
    entry["scenario"] = job.sc.name;
    entry["status"] = job.status;
    if (!job.detail.empty()) entry["detail"] = job.detail;
    if (job.status == "ok" || job.status == "aborted") {
      entry["metrics"] = fs::relative(job.dir / "metrics.json", sweep_dir).string();
      entry["rms_z1"] = job.metrics.rms_z1;
      entry["max_e2_post"] = job.metrics.max_e2_post;
    }
    if (job.status != "ok") all_ok = false;
    summary.push_back(entry);
  }
  fs::create_directories(sweep_dir);
  std::ofstream sj(sweep_dir / "summary.json");
  sj << summary.dump(2) << "\n";
  if (!sj.good()) throw std::runtime_error("cannot write summary.json");
  std::cout << "summary: " << (sweep_dir / "summary.json").string() << "\n";
  return all_ok ? kExitOk : kExitAborted;
}

std::string cell(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return "-";
  std::ostringstream os;
  if (j[key].is_number())
    os << j[key].get<double>();
  else
    os << j[key];
  return os.str();
}

int cmd_report(std::vector<std::string> inputs, const std::string& out_file, bool force) {
  std::ostringstream md;
  md << "| scenario | aborted | rms_z1 [m] | max|z1| [m] | terminal ||z|| | conv e_h1 [s] | "
        "conv e_h3 [s] | sat duty |\n";
  md << "|---|---|---|---|---|---|---|---|\n";
  for (auto& input : inputs) {
    fs::path p = input;
    if (fs::is_directory(p)) p /= "metrics.json";
    std::ifstream in(p);
    if (!in) throw std::runtime_error(p.string() + ": cannot open metrics file");
    nlohmann::json j = nlohmann::json::parse(in);
    md << "| " << j.value("scenario", std::string("?")) << " | "
       << (j.value("aborted", false) ? "yes" : "no") << " | " << cell(j, "rms_z1") << " | "
       << cell(j, "max_abs_z1") << " | " << cell(j, "terminal_z_norm") << " | "
       << cell(j, "conv_time_eh1") << " | " << cell(j, "conv_time_eh3") << " | "
       << cell(j, "sat_duty") << " |\n";
  }
  if (out_file.empty()) {
    std::cout << md.str();
  } else {
    if (fs::exists(out_file) && !force)
      throw std::runtime_error(out_file + " exists; pass --force to overwrite");
    std::ofstream out(out_file);
    if (!out) throw std::runtime_error(out_file + ": cannot open for writing");
    out << md.str();
    std::cout << "report: " << out_file << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-loop lateral path-following simulator"};
  app.require_subcommand(1);

  std::string preset, file, out_dir, echo, axis;
  std::vector<double> values;
  std::vector<std::string> inputs;
  bool force = false;
  unsigned jobs = 0;

  auto add_source = [&](CLI::App* cmd) {
    auto* p = cmd->add_option("--preset", preset,
                              "built-in scenario: flat_lot, inclined_road, banked_speedway");
    auto* s = cmd->add_option("--scenario", file, "scenario YAML file");
    p->excludes(s);
    cmd->callback([cmd, &preset, &file] {
      if (preset.empty() && file.empty())
        throw CLI::ValidationError(cmd->get_name(), "needs --preset or --scenario");
    });
  };

  auto* run = app.add_subcommand("run", "run one scenario and write its artifacts");
  add_source(run);
  run->add_option("--out", out_dir, "output directory (default $LATSIM_OUT_ROOT/<name>)");
  run->add_flag("--force", force, "overwrite an existing run directory");

  auto* sweep = app.add_subcommand("sweep", "run a scenario across one parameter axis");
  add_source(sweep);
  sweep->add_option("--axis", axis, "swept parameter")
      ->required()
      ->check(CLI::IsMember({"epsilon", "nu_x", "bank_scale"}));
  sweep->add_option("--values", values, "comma-separated axis values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", out_dir, "sweep directory (default $LATSIM_OUT_ROOT/sweep_...)");
  sweep->add_flag("--force", force, "overwrite existing run directories");
  sweep->add_option("--jobs", jobs, "worker threads (default min(cores, 4))");

  auto* report = app.add_subcommand("report", "tabulate metrics from previous runs");
  report->add_option("inputs", inputs, "metrics.json files or run directories")
      ->required()
      ->expected(2, -1);
  report->add_option("--out", out_dir, "write markdown here instead of stdout");
  report->add_flag("--force", force, "overwrite an existing report");

  auto* validate = app.add_subcommand("validate", "check a scenario and echo its resolved form");
  add_source(validate);
  validate->add_option("--echo", echo, "write the fully resolved scenario YAML here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(preset, file, out_dir, force);
    if (sweep->parsed()) return cmd_sweep(preset, file, axis, values, out_dir, force, jobs);
    if (report->parsed()) return cmd_report(inputs, out_dir, force);
    if (validate->parsed()) return cmd_validate(preset, file, echo);
  } catch (const ScenarioError& ex) {
    std::cerr << "scenario error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "invalid configuration: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
