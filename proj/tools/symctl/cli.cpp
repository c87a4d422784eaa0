#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "symbiotic/certificates.hpp"
#include "symbiotic/csv.hpp"
#include "symbiotic/errors.hpp"
#include "symbiotic/freq_analysis.hpp"
#include "symbiotic/sweep.hpp"

namespace symctl {
namespace {

namespace fs = std::filesystem;
using namespace symbiotic;
using namespace symbiotic::sweep;

struct RunOptions {
  std::string config;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> threads;
  bool validate = false;
};

template <typename F>
void write_file(const fs::path& path, F&& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  body(f);
  if (!f) throw ConfigError("write failed for '" + path.string() + "'");
}

// Reports failed rows on the error stream; true when all rows are ok.
bool report_failures(const std::vector<SweepRecord>& rows, std::ostream& err) {
  bool ok = true;
  for (const auto& r : rows) {
    if (r.status == "ok") continue;
    ok = false;
    err << "point alpha=" << csv::format(r.alpha) << " eps1=" << csv::format(r.eps1)
        << " eps2=" << csv::format(r.eps2) << " " << to_string(r.variant) << ": " << r.status << '\n';
  }
  return ok;
}

int validate_only(const RunConfig& cfg, std::ostream& out) {
  const ControlDesign design(cfg.plant, cfg.gains, cfg.control);
  const CertificateReport report = assess_certificates(design, cfg.disturbance, cfg.young_options());
  out << "config ok (" << experiment_name(cfg.experiment) << ")\n";
  out << report.diagnosis << '\n';
  write_certificate_summary(out, report);
  return kOk;
}

bool run_single(const RunConfig& cfg, const fs::path& dir, std::ostream& err) {
  PointResult point = evaluate_point(cfg, cfg.control.alpha, cfg.control.eps1, cfg.control.eps2,
                                     cfg.control.variant, true);
  write_file(dir / "single_run.csv", [&](std::ostream& f) { write_sweep_csv(f, {point.record}); });
  if (!report_failures({point.record}, err)) return false;

  const ControlDesign design(cfg.plant, cfg.gains, cfg.control);
  write_file(dir / "traj_single.csv", [&](std::ostream& f) { write_trajectory_csv(f, *point.trajectory); });
  for (const auto& w : point.trajectory->warnings) err << "warning: " << w << '\n';

  CertificateReport report = assess_certificates(design, cfg.disturbance, cfg.young_options());
  attach_trajectory(report, *point.trajectory, design);
  write_file(dir / "certificate_report.csv", [&](std::ostream& f) { write_certificate_csv(f, report); });
  write_file(dir / "certificate_summary.txt", [&](std::ostream& f) { write_certificate_summary(f, report); });

  const FrequencyResponse resp = frequency_response(open_loop_at_plant_input(design), cfg.frequency);
  write_file(dir / "frequency_response.csv", [&](std::ostream& f) { write_frequency_response_csv(f, resp); });
  return true;
}

bool run_alpha(const RunConfig& cfg, const fs::path& dir, std::ostream& err) {
  AlphaStudyResult res = run_alpha_study(cfg, true);
  write_file(dir / "alpha_study.csv", [&](std::ostream& f) { write_sweep_csv(f, res.records); });
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    const auto& r = res.records[i];
    if (r.status != "ok") continue;
    const std::string name =
        "traj_alpha" + csv::format(r.alpha) + "_" + std::string(to_string(r.variant)) + ".csv";
    write_file(dir / name, [&](std::ostream& f) { write_trajectory_csv(f, res.trajectories[i]); });
  }
  return report_failures(res.records, err);
}

bool run_grid(const RunConfig& cfg, const fs::path& dir, std::ostream& err) {
  const auto rows = run_eps_grid(cfg);
  write_file(dir / "eps_grid.csv", [&](std::ostream& f) { write_sweep_csv(f, rows); });
  return report_failures(rows, err);
}

bool run_iso(const RunConfig& cfg, const fs::path& dir, std::ostream& err) {
  const IsoCostResult res = run_iso_cost(cfg);
  write_file(dir / "eps_grid.csv", [&](std::ostream& f) { write_sweep_csv(f, res.grid); });
  write_file(dir / "iso_cost.csv", [&](std::ostream& f) { write_sweep_csv(f, res.selected); });
  if (res.selected.empty()) err << "warning: no grid point within the iso-cost band\n";
  return report_failures(res.grid, err);
}

int run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_run_config(opts.config);
  if (opts.out_dir) cfg.output_dir = *opts.out_dir;
  if (opts.threads) cfg.threads = *opts.threads;
  cfg.validate();
  try {
    (void)ControlDesign(cfg.plant, cfg.gains, cfg.control);
  } catch (const NumericalError& e) {
    // An unstable nominal loop is a property of the config, not of a run.
    throw ConfigError(e.what());
  }
  if (opts.validate) return validate_only(cfg, out);

  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  write_file(dir / "resolved_config.json", [&](std::ostream& f) { f << resolved_config_json(cfg); });

  bool ok = true;
  if (std::holds_alternative<SingleRun>(cfg.experiment)) ok = run_single(cfg, dir, err);
  else if (std::holds_alternative<AlphaStudy>(cfg.experiment)) ok = run_alpha(cfg, dir, err);
  else if (std::holds_alternative<EpsGrid>(cfg.experiment)) ok = run_grid(cfg, dir, err);
  else ok = run_iso(cfg, dir, err);

  out << experiment_name(cfg.experiment) << ": outputs in " << dir.string() << '\n';
  return ok ? kOk : kNumericalError;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symbiotic fixed-gain/adaptive control experiments", "symctl"};
  app.require_subcommand(1);
  RunOptions opts;
  std::string out_dir;
  std::size_t threads = 0;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run_cmd->add_option("config", opts.config, "Path to the run configuration")->required();
  auto* out_opt = run_cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  auto* threads_opt = run_cmd->add_option("--threads", threads, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--validate", opts.validate, "Check the config and certificate preconditions only");

  // CLI11 parses argv-style input in reverse order.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  }
  if (*out_opt) opts.out_dir = out_dir;
  if (*threads_opt) opts.threads = threads;

  try {
    return run(opts, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace symctl
