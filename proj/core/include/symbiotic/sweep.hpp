#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "symbiotic/certificates.hpp"
#include "symbiotic/freq_analysis.hpp"
#include "symbiotic/signal.hpp"
#include "symbiotic/simulator.hpp"
#include "symbiotic/system_model.hpp"

namespace symbiotic::sweep {

struct Range {
  double min = 0.0;
  double max = 0.0;
};

/// `steps` evenly spaced values from min to max inclusive.
std::vector<double> linspace(const Range& r, std::size_t steps);

struct AlphaStudy {
  std::vector<double> alphas;
};

struct EpsGrid {
  Range eps1{0.5, 10.0};
  Range eps2{1.0, 50.0};
  std::size_t steps1 = 10;
  std::size_t steps2 = 10;
};

struct SingleRun {};

/// Grid points whose quadratic cost lies within tolerance * target of target.
struct IsoCost {
  EpsGrid grid;
  double target_cost = 0.0;
  double tolerance = 0.1;  // relative, 0.1 == 10%
};

using Experiment = std::variant<AlphaStudy, EpsGrid, SingleRun, IsoCost>;

std::string_view experiment_name(const Experiment& e);

struct RunConfig {
  PlantModel plant;
  NominalGains gains;
  SymbioticConfig control;
  SignalSpec reference = FilteredSquareWave{};
  SignalSpec disturbance = ConstantSignal{10.0};
  double dt = kDefaultStep;
  double t_final = kDefaultFinalTime;
  FrequencyGrid frequency;
  std::optional<double> young_d1;  // certificate overrides
  std::optional<double> young_d2;
  bool tighten_young = false;
  Experiment experiment = SingleRun{};
  std::string output_dir = "out";
  std::size_t threads = 1;

  YoungOptions young_options() const { return {young_d1, young_d2, tighten_young}; }

  /// Throws ConfigError on empty/nonpositive ranges, steps < 2, and the like.
  void validate() const;
};

/// Plant, gains and learning parameters of the two-state double-integrator
/// example (alpha = 10, eps1 = 3, eps2 = 10, constant d = 10).
RunConfig example_config();

/// Parses a JSON run configuration; omitted fields take the defaults of
/// example_config(). Throws ConfigError with a readable message.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::string& path);

/// The fully materialized configuration as pretty-printed JSON.
std::string resolved_config_json(const RunConfig& cfg);

struct SweepRecord {
  double alpha = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  FixedGainVariant variant = FixedGainVariant::New;
  double gain_margin = kInfinity;
  double gm_freq = kInfinity;
  double phase_margin = kInfinity;
  double pm_freq = kInfinity;
  double delay_margin = kInfinity;
  double quadratic_cost = kInfinity;
  bool m2_pd = false;
  bool m3_pd = false;
  bool m4_pd = false;
  std::string regime = "none";
  std::string status = "ok";
};

struct PointResult {
  SweepRecord record;
  std::optional<Trajectory> trajectory;
};

/// Builds the design for one grid point, computes margins of the loop broken
/// at the plant input, simulates the closed loop and records the cost.
/// Failures are recorded in `status`, never thrown.
PointResult evaluate_point(const RunConfig& cfg, double alpha, double eps1, double eps2, FixedGainVariant variant,
                           bool keep_trajectory = false);

struct AlphaStudyResult {
  std::vector<SweepRecord> records;       // ordered by (alpha, SFG before NFG)
  std::vector<Trajectory> trajectories;   // parallel to records when requested
};

AlphaStudyResult run_alpha_study(const RunConfig& cfg, bool keep_trajectories = false);
/// Full factorial over (eps1, eps2) for the New variant, sorted by (eps1, eps2).
std::vector<SweepRecord> run_eps_grid(const RunConfig& cfg);
std::vector<SweepRecord> run_eps_grid(const RunConfig& cfg, const EpsGrid& grid);

struct IsoCostResult {
  std::vector<SweepRecord> grid;
  std::vector<SweepRecord> selected;
};
IsoCostResult run_iso_cost(const RunConfig& cfg);
std::vector<SweepRecord> select_iso_cost(const std::vector<SweepRecord>& grid, double target, double tolerance);

/// alpha,eps1,eps2,variant,gain_margin,gain_margin_db,gm_freq,phase_margin,
/// pm_freq,delay_margin,quadratic_cost,m2_pd,m3_pd,m4_pd,regime,status
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

}  // namespace symbiotic::sweep
