#include "symbiotic/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "symbiotic/csv.hpp"

namespace symbiotic::sweep {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---- JSON reading -------------------------------------------------------

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + " must be finite");
  return d;
}

void read_number(const json& obj, const char* key, const std::string& where, double& out) {
  if (obj.contains(key)) out = number(obj.at(key), where + "." + key);
}

std::size_t count(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(where + " must be a nonnegative integer");
  return static_cast<std::size_t>(v.get<long long>());
}

Matrix matrix(const json& v, const std::string& where) {
  if (v.is_number()) return Matrix(1, 1, std::vector<double>{number(v, where)});
  if (!v.is_array() || v.empty()) throw ConfigError(where + " must be a nonempty array of rows");
  const std::size_t rows = v.size();
  std::size_t cols = 0;
  std::vector<double> entries;
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = v[i];
    if (!row.is_array()) throw ConfigError(where + " must be an array of rows");
    if (i == 0) cols = row.size();
    if (row.size() != cols || cols == 0) throw ConfigError(where + " has ragged or empty rows");
    for (std::size_t j = 0; j < cols; ++j)
      entries.push_back(number(row[j], where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
  }
  return Matrix(rows, cols, std::move(entries));
}

Vector vector_of(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + " must be an array");
  Vector out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

SignalSpec signal(const json& v, const std::string& where) {
  if (!v.is_object() || !v.contains("kind") || !v.at("kind").is_string())
    throw ConfigError(where + " must be an object with a string 'kind'");
  const std::string kind = v.at("kind").get<std::string>();
  SignalSpec out;
  if (kind == "zero") {
    allow_keys(v, where, {"kind"});
    out = ZeroSignal{};
  } else if (kind == "constant") {
    allow_keys(v, where, {"kind", "level"});
    ConstantSignal c;
    read_number(v, "level", where, c.level);
    out = c;
  } else if (kind == "filtered_square_wave") {
    allow_keys(v, where, {"kind", "amplitude", "period", "filter_pole"});
    FilteredSquareWave w;
    read_number(v, "amplitude", where, w.amplitude);
    read_number(v, "period", where, w.period);
    read_number(v, "filter_pole", where, w.pole);
    out = w;
  } else if (kind == "sinusoid") {
    allow_keys(v, where, {"kind", "offset", "amplitude", "omega", "phase"});
    SinusoidSignal s;
    read_number(v, "offset", where, s.offset);
    read_number(v, "amplitude", where, s.amplitude);
    read_number(v, "omega", where, s.omega);
    read_number(v, "phase", where, s.phase);
    out = s;
  } else {
    throw ConfigError(where + ".kind '" + kind + "' is not one of zero, constant, filtered_square_wave, sinusoid");
  }
  validate_signal(out);
  return out;
}

Range range(const json& v, const std::string& where) {
  allow_keys(v, where, {"min", "max"});
  if (!v.contains("min") || !v.contains("max")) throw ConfigError(where + " needs min and max");
  return Range{number(v.at("min"), where + ".min"), number(v.at("max"), where + ".max")};
}

EpsGrid eps_grid(const json& v, const std::string& where, EpsGrid grid) {
  if (v.contains("eps1")) grid.eps1 = range(v.at("eps1"), where + ".eps1");
  if (v.contains("eps2")) grid.eps2 = range(v.at("eps2"), where + ".eps2");
  if (v.contains("steps")) {
    const json& s = v.at("steps");
    if (s.is_array()) {
      if (s.size() != 2) throw ConfigError(where + ".steps must be an integer or a pair");
      grid.steps1 = count(s[0], where + ".steps[0]");
      grid.steps2 = count(s[1], where + ".steps[1]");
    } else {
      grid.steps1 = grid.steps2 = count(s, where + ".steps");
    }
  }
  return grid;
}

Experiment experiment(const json& v) {
  const std::string where = "experiment";
  if (!v.is_object() || !v.contains("kind") || !v.at("kind").is_string())
    throw ConfigError("experiment must be an object with a string 'kind'");
  const std::string kind = v.at("kind").get<std::string>();
  if (kind == "alpha_study") {
    allow_keys(v, where, {"kind", "alphas"});
    AlphaStudy a;
    if (v.contains("alphas")) a.alphas = vector_of(v.at("alphas"), where + ".alphas");
    else a.alphas = {1.0, 5.0, 10.0};
    return a;
  }
  if (kind == "eps_grid") {
    allow_keys(v, where, {"kind", "eps1", "eps2", "steps"});
    return eps_grid(v, where, EpsGrid{});
  }
  if (kind == "single_run") {
    allow_keys(v, where, {"kind"});
    return SingleRun{};
  }
  if (kind == "iso_cost") {
    allow_keys(v, where, {"kind", "eps1", "eps2", "steps", "target_cost", "tolerance"});
    IsoCost iso;
    iso.grid = eps_grid(v, where, EpsGrid{});
    if (!v.contains("target_cost")) throw ConfigError("experiment.target_cost is required for iso_cost");
    iso.target_cost = number(v.at("target_cost"), where + ".target_cost");
    read_number(v, "tolerance", where, iso.tolerance);
    return iso;
  }
  throw ConfigError("experiment.kind '" + kind + "' is not one of alpha_study, eps_grid, single_run, iso_cost");
}

// ---- JSON writing -------------------------------------------------------

ordered_json to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (double v : m.row(i)) row.push_back(v);
    rows.push_back(row);
  }
  return rows;
}

ordered_json to_json(const SignalSpec& s) {
  return std::visit(overloaded{
                        [](const ZeroSignal&) { return ordered_json{{"kind", "zero"}}; },
                        [](const ConstantSignal& c) { return ordered_json{{"kind", "constant"}, {"level", c.level}}; },
                        [](const FilteredSquareWave& w) {
                          return ordered_json{{"kind", "filtered_square_wave"},
                                              {"amplitude", w.amplitude},
                                              {"period", w.period},
                                              {"filter_pole", w.pole}};
                        },
                        [](const SinusoidSignal& s) {
                          return ordered_json{{"kind", "sinusoid"},
                                              {"offset", s.offset},
                                              {"amplitude", s.amplitude},
                                              {"omega", s.omega},
                                              {"phase", s.phase}};
                        },
                    },
                    s);
}

ordered_json to_json(const EpsGrid& g) {
  return ordered_json{{"eps1", {{"min", g.eps1.min}, {"max", g.eps1.max}}},
                      {"eps2", {{"min", g.eps2.min}, {"max", g.eps2.max}}},
                      {"steps", {g.steps1, g.steps2}}};
}

ordered_json to_json(const Experiment& e) {
  return std::visit(overloaded{
                        [](const AlphaStudy& a) { return ordered_json{{"kind", "alpha_study"}, {"alphas", a.alphas}}; },
                        [](const EpsGrid& g) {
                          ordered_json j{{"kind", "eps_grid"}};
                          j.update(to_json(g));
                          return j;
                        },
                        [](const SingleRun&) { return ordered_json{{"kind", "single_run"}}; },
                        [](const IsoCost& iso) {
                          ordered_json j{{"kind", "iso_cost"}};
                          j.update(to_json(iso.grid));
                          j["target_cost"] = iso.target_cost;
                          j["tolerance"] = iso.tolerance;
                          return j;
                        },
                    },
                    e);
}

// ---- execution ----------------------------------------------------------

template <typename F>
void parallel_for(std::size_t count, std::size_t threads, F&& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

void validate_grid(const EpsGrid& g) {
  auto check = [](const Range& r, const char* name) {
    if (!(r.min > 0.0) || !(r.max >= r.min)) {
      throw ConfigError(std::string(name) + " range must satisfy 0 < min <= max");
    }
  };
  check(g.eps1, "eps1");
  check(g.eps2, "eps2");
  if (g.steps1 < 2 || g.steps2 < 2) throw ConfigError("grid steps must be >= 2");
}

}  // namespace

std::vector<double> linspace(const Range& r, std::size_t steps) {
  std::vector<double> v(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    v[i] = steps == 1 ? r.min : r.min + (r.max - r.min) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  if (steps > 1) v.back() = r.max;
  return v;
}

std::string_view experiment_name(const Experiment& e) {
  return std::visit(overloaded{
                        [](const AlphaStudy&) { return std::string_view("alpha_study"); },
                        [](const EpsGrid&) { return std::string_view("eps_grid"); },
                        [](const SingleRun&) { return std::string_view("single_run"); },
                        [](const IsoCost&) { return std::string_view("iso_cost"); },
                    },
                    e);
}

void RunConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("simulation.dt must be positive");
  if (!(t_final >= dt) || !std::isfinite(t_final)) throw ConfigError("simulation.t_final must be >= dt");
  if (!(frequency.omega_lo > 0.0) || !(frequency.omega_hi > frequency.omega_lo))
    throw ConfigError("frequency grid requires 0 < omega_lo < omega_hi");
  if (frequency.points < 2) throw ConfigError("frequency.points must be >= 2");
  if (threads == 0) throw ConfigError("threads must be >= 1");
  if (young_d1 && !(*young_d1 > 0.0)) throw ConfigError("certificate.d1 must be positive");
  if (young_d2 && !(*young_d2 > 0.0)) throw ConfigError("certificate.d2 must be positive");
  validate_signal(reference);
  validate_signal(disturbance);
  control.validate(plant.n());
  std::visit(overloaded{
                 [](const AlphaStudy& a) {
                   if (a.alphas.empty()) throw ConfigError("experiment.alphas must not be empty");
                   for (double v : a.alphas)
                     if (!(v > 0.0)) throw ConfigError("experiment.alphas must be positive");
                 },
                 [](const EpsGrid& g) { validate_grid(g); },
                 [](const SingleRun&) {},
                 [](const IsoCost& iso) {
                   validate_grid(iso.grid);
                   if (!(iso.target_cost >= 0.0)) throw ConfigError("experiment.target_cost must be >= 0");
                   if (!(iso.tolerance >= 0.0)) throw ConfigError("experiment.tolerance must be >= 0");
                 },
             },
             experiment);
}

RunConfig example_config() {
  RunConfig cfg;
  cfg.plant.a = Matrix{{0.0, 1.0}, {0.0, 0.0}};
  cfg.plant.b = Matrix{{0.0}, {1.0}};
  cfg.plant.x0 = {0.0, 0.0};
  cfg.gains.k1 = Matrix{{0.16, 0.57}};
  cfg.gains.k2 = Matrix{{0.16}};
  cfg.control.alpha = 10.0;
  cfg.control.eps1 = 3.0;
  cfg.control.eps2 = 10.0;
  cfg.control.beta1 = 0.1;
  cfg.control.beta2 = 3.0;
  cfg.control.beta3 = 1.0;
  cfg.control.mu1 = 0.0;
  cfg.control.mu2 = 0.0;
  cfg.control.r_weight = Matrix::identity(2);
  cfg.control.variant = FixedGainVariant::New;
  return cfg;
}

RunConfig parse_run_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  allow_keys(root, "config",
             {"plant", "gains", "control", "reference", "disturbance", "simulation", "frequency", "certificate",
              "experiment", "output_dir", "threads"});
  RunConfig cfg = example_config();

  if (root.contains("plant")) {
    const json& p = root.at("plant");
    allow_keys(p, "plant", {"A", "B", "x0"});
    if (p.contains("A")) cfg.plant.a = matrix(p.at("A"), "plant.A");
    if (p.contains("B")) cfg.plant.b = matrix(p.at("B"), "plant.B");
    if (p.contains("x0")) cfg.plant.x0 = vector_of(p.at("x0"), "plant.x0");
    else cfg.plant.x0.assign(cfg.plant.a.rows(), 0.0);
  }
  if (root.contains("gains")) {
    const json& g = root.at("gains");
    allow_keys(g, "gains", {"K1", "K2"});
    if (g.contains("K1")) cfg.gains.k1 = matrix(g.at("K1"), "gains.K1");
    if (g.contains("K2")) cfg.gains.k2 = matrix(g.at("K2"), "gains.K2");
  }
  if (root.contains("control")) {
    const json& c = root.at("control");
    allow_keys(c, "control", {"alpha", "eps1", "eps2", "beta1", "beta2", "beta3", "mu1", "mu2", "R", "variant"});
    read_number(c, "alpha", "control", cfg.control.alpha);
    read_number(c, "eps1", "control", cfg.control.eps1);
    read_number(c, "eps2", "control", cfg.control.eps2);
    read_number(c, "beta1", "control", cfg.control.beta1);
    read_number(c, "beta2", "control", cfg.control.beta2);
    read_number(c, "beta3", "control", cfg.control.beta3);
    read_number(c, "mu1", "control", cfg.control.mu1);
    read_number(c, "mu2", "control", cfg.control.mu2);
    if (c.contains("R")) cfg.control.r_weight = matrix(c.at("R"), "control.R");
    else if (cfg.control.r_weight.rows() != cfg.plant.n()) cfg.control.r_weight = Matrix::identity(cfg.plant.n());
    if (c.contains("variant")) {
      if (!c.at("variant").is_string()) throw ConfigError("control.variant must be a string");
      cfg.control.variant = parse_variant(c.at("variant").get<std::string>());
    }
  }
  if (root.contains("reference")) cfg.reference = signal(root.at("reference"), "reference");
  if (root.contains("disturbance")) cfg.disturbance = signal(root.at("disturbance"), "disturbance");
  if (root.contains("simulation")) {
    const json& s = root.at("simulation");
    allow_keys(s, "simulation", {"dt", "t_final"});
    read_number(s, "dt", "simulation", cfg.dt);
    read_number(s, "t_final", "simulation", cfg.t_final);
  }
  if (root.contains("frequency")) {
    const json& f = root.at("frequency");
    allow_keys(f, "frequency", {"omega_lo", "omega_hi", "points"});
    read_number(f, "omega_lo", "frequency", cfg.frequency.omega_lo);
    read_number(f, "omega_hi", "frequency", cfg.frequency.omega_hi);
    if (f.contains("points")) cfg.frequency.points = count(f.at("points"), "frequency.points");
  }
  if (root.contains("certificate")) {
    const json& c = root.at("certificate");
    allow_keys(c, "certificate", {"d1", "d2", "tighten"});
    if (c.contains("d1")) cfg.young_d1 = number(c.at("d1"), "certificate.d1");
    if (c.contains("d2")) cfg.young_d2 = number(c.at("d2"), "certificate.d2");
    if (c.contains("tighten")) {
      if (!c.at("tighten").is_boolean()) throw ConfigError("certificate.tighten must be a boolean");
      cfg.tighten_young = c.at("tighten").get<bool>();
    }
  }
  if (root.contains("experiment")) cfg.experiment = experiment(root.at("experiment"));
  if (root.contains("output_dir")) {
    if (!root.at("output_dir").is_string()) throw ConfigError("output_dir must be a string");
    cfg.output_dir = root.at("output_dir").get<std::string>();
  }
  if (root.contains("threads")) cfg.threads = count(root.at("threads"), "threads");
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string resolved_config_json(const RunConfig& cfg) {
  ordered_json j;
  j["plant"] = {{"A", to_json(cfg.plant.a)}, {"B", to_json(cfg.plant.b)}, {"x0", cfg.plant.x0}};
  j["gains"] = {{"K1", to_json(cfg.gains.k1)}, {"K2", to_json(cfg.gains.k2)}};
  const auto& c = cfg.control;
  j["control"] = {{"alpha", c.alpha}, {"eps1", c.eps1},   {"eps2", c.eps2}, {"beta1", c.beta1},
                  {"beta2", c.beta2}, {"beta3", c.beta3}, {"mu1", c.mu1},   {"mu2", c.mu2},
                  {"R", to_json(c.r_weight)}, {"variant", std::string(to_string(c.variant))}};
  j["reference"] = to_json(cfg.reference);
  j["disturbance"] = to_json(cfg.disturbance);
  j["simulation"] = {{"dt", cfg.dt}, {"t_final", cfg.t_final}};
  j["frequency"] = {{"omega_lo", cfg.frequency.omega_lo},
                    {"omega_hi", cfg.frequency.omega_hi},
                    {"points", cfg.frequency.points}};
  ordered_json cert{{"tighten", cfg.tighten_young}};
  if (cfg.young_d1) cert["d1"] = *cfg.young_d1;
  if (cfg.young_d2) cert["d2"] = *cfg.young_d2;
  j["certificate"] = cert;
  j["experiment"] = to_json(cfg.experiment);
  j["output_dir"] = cfg.output_dir;
  j["threads"] = cfg.threads;
  return j.dump(2) + "\n";
}

PointResult evaluate_point(const RunConfig& cfg, double alpha, double eps1, double eps2, FixedGainVariant variant,
                           bool keep_trajectory) {
  PointResult out;
  SweepRecord& rec = out.record;
  rec.alpha = alpha;
  rec.eps1 = eps1;
  rec.eps2 = eps2;
  rec.variant = variant;
  try {
    SymbioticConfig sc = cfg.control;
    sc.alpha = alpha;
    sc.eps1 = eps1;
    sc.eps2 = eps2;
    sc.variant = variant;
    const ControlDesign design(cfg.plant, cfg.gains, sc);

    const MarginReport margins = loop_margins(open_loop_at_plant_input(design), cfg.frequency);
    rec.gain_margin = margins.gain_margin;
    rec.gm_freq = margins.gm_freq.value_or(kInfinity);
    rec.phase_margin = margins.phase_margin.value_or(kInfinity);
    rec.pm_freq = margins.pm_freq.value_or(kInfinity);
    rec.delay_margin = margins.delay_margin;

    const CertificateReport cert = assess_certificates(design, cfg.disturbance, cfg.young_options());
    rec.m2_pd = cert.matrices.m2_pd;
    rec.m3_pd = cert.matrices.m3_pd;
    rec.m4_pd = cert.matrices.m4_pd;
    rec.regime = std::string(to_string(cert.regime));

    Trajectory traj = integrate(assemble_closed_loop(design), cfg.reference, cfg.disturbance, cfg.t_final, cfg.dt);
    rec.quadratic_cost = quadratic_cost(traj, traj.t.back());
    if (keep_trajectory) out.trajectory = std::move(traj);
  } catch (const std::exception& e) {
    rec.status = e.what();
  }
  return out;
}

AlphaStudyResult run_alpha_study(const RunConfig& cfg, bool keep_trajectories) {
  const auto* study = std::get_if<AlphaStudy>(&cfg.experiment);
  if (!study) throw ConfigError("run_alpha_study needs an alpha_study experiment");
  if (study->alphas.empty()) throw ConfigError("experiment.alphas must not be empty");
  const std::size_t count = study->alphas.size() * 2;
  std::vector<PointResult> results(count);
  parallel_for(count, cfg.threads, [&](std::size_t i) {
    const double alpha = study->alphas[i / 2];
    const auto variant = i % 2 == 0 ? FixedGainVariant::Standard : FixedGainVariant::New;
    results[i] = evaluate_point(cfg, alpha, cfg.control.eps1, cfg.control.eps2, variant, keep_trajectories);
  });
  AlphaStudyResult out;
  for (auto& r : results) {
    out.records.push_back(std::move(r.record));
    if (keep_trajectories) out.trajectories.push_back(r.trajectory ? std::move(*r.trajectory) : Trajectory{});
  }
  return out;
}

std::vector<SweepRecord> run_eps_grid(const RunConfig& cfg, const EpsGrid& grid) {
  validate_grid(grid);
  const auto e1 = linspace(grid.eps1, grid.steps1);
  const auto e2 = linspace(grid.eps2, grid.steps2);
  std::vector<SweepRecord> records(e1.size() * e2.size());
  parallel_for(records.size(), cfg.threads, [&](std::size_t i) {
    records[i] = evaluate_point(cfg, cfg.control.alpha, e1[i / e2.size()], e2[i % e2.size()], FixedGainVariant::New)
                     .record;
  });
  std::stable_sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return a.eps1 != b.eps1 ? a.eps1 < b.eps1 : a.eps2 < b.eps2;
  });
  return records;
}

std::vector<SweepRecord> run_eps_grid(const RunConfig& cfg) {
  if (const auto* g = std::get_if<EpsGrid>(&cfg.experiment)) return run_eps_grid(cfg, *g);
  if (const auto* iso = std::get_if<IsoCost>(&cfg.experiment)) return run_eps_grid(cfg, iso->grid);
  throw ConfigError("run_eps_grid needs an eps_grid or iso_cost experiment");
}

std::vector<SweepRecord> select_iso_cost(const std::vector<SweepRecord>& grid, double target, double tolerance) {
  std::vector<SweepRecord> out;
  const double band = tolerance * target;
  for (const auto& r : grid) {
    if (r.status == "ok" && std::abs(r.quadratic_cost - target) <= band) out.push_back(r);
  }
  return out;
}

IsoCostResult run_iso_cost(const RunConfig& cfg) {
  const auto* iso = std::get_if<IsoCost>(&cfg.experiment);
  if (!iso) throw ConfigError("run_iso_cost needs an iso_cost experiment");
  IsoCostResult out;
  out.grid = run_eps_grid(cfg, iso->grid);
  out.selected = select_iso_cost(out.grid, iso->target_cost, iso->tolerance);
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << "alpha,eps1,eps2,variant,gain_margin,gain_margin_db,gm_freq,phase_margin,pm_freq,delay_margin,"
         "quadratic_cost,m2_pd,m3_pd,m4_pd,regime,status\n";
  auto flag = [](bool b) { return b ? "1" : "0"; };
  for (const auto& r : records) {
    const double db = 20.0 * std::log10(r.gain_margin);
    out << csv::format(r.alpha) << ',' << csv::format(r.eps1) << ',' << csv::format(r.eps2) << ','
        << to_string(r.variant) << ',' << csv::format(r.gain_margin) << ',' << csv::format(db) << ','
        << csv::format(r.gm_freq) << ',' << csv::format(r.phase_margin) << ',' << csv::format(r.pm_freq) << ','
        << csv::format(r.delay_margin) << ',' << csv::format(r.quadratic_cost) << ',' << flag(r.m2_pd) << ','
        << flag(r.m3_pd) << ',' << flag(r.m4_pd) << ',' << r.regime << ',' << csv::text(r.status) << '\n';
  }
}

}  // namespace symbiotic::sweep
