#include "viscoswell/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "viscoswell/errors.hpp"

namespace viscoswell::experiments {
namespace {

// Free-swell horizon. The natural configuration relaxes on a time scale of
// ~15 t* at the published parameters, so the mass plateau needs a long run.
constexpr double kFreeSwellHorizon = 80.0;

ExperimentPreset free_swell(std::string name, ivp::NondimParams np, CharacteristicTime t_char) {
  ExperimentPreset p;
  p.name = std::move(name);
  p.params = np;
  p.grid_points = 301;
  p.solver.dt_star = 0.025;
  p.solver.tolerance = 1e-4;
  p.t_final = kFreeSwellHorizon;
  p.schedule = ivp::LoadSchedule::constant(0.0, p.t_final);
  p.sample_every = 1;
  p.field_every = 4;
  p.characteristic_time = std::move(t_char);
  return p;
}

ivp::NondimParams dmso_params() {
  ivp::NondimParams np;
  np.beta1 = 1.3;
  np.chi = 0.425;
  np.beta2 = 0.018;
  np.mu_p_star = 0.1;
  np.mu_G_star = 0.1;
  np.gamma_star = 20.0;
  return np;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    throw ConfigError("csv", "line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  }
  return v;
}

double interpolate(const std::vector<CurvePoint>& curve, double t) {
  auto it = std::lower_bound(curve.begin(), curve.end(), t,
                             [](const CurvePoint& c, double x) { return c.time < x; });
  if (it == curve.end()) return curve.back().value;
  if (it->time == t || it == curve.begin()) return it->value;
  const auto prev = it - 1;
  const double w = (t - prev->time) / (it->time - prev->time);
  return prev->value + w * (it->value - prev->value);
}

}  // namespace

void ExperimentPreset::validate() const {
  params.validate();
  solver.validate();
  schedule.validate();
  if (grid_points < 3) throw ConfigError("N", "grid needs at least 3 nodes");
  if (!(t_final >= 0.0)) throw ConfigError("t_final", "must be non-negative");
  if (t_final > schedule.horizon() + 1e-12) {
    throw ConfigError("t_final", "exceeds the load schedule horizon");
  }
  if (sample_every < 1) throw ConfigError("sample_every", "must be at least 1");
  if (field_every < 1) throw ConfigError("field_every", "must be at least 1");
}

std::vector<std::string> preset_names() {
  return {"dmso-pmda-oda", "nmp-pmda-oda", "water-hfpe", "compress-cycle"};
}

ExperimentPreset preset(std::string_view name) {
  if (name == "dmso-pmda-oda") {
    return free_swell("dmso-pmda-oda", dmso_params(), {10500.0, "min"});
  }
  if (name == "nmp-pmda-oda") {
    ivp::NondimParams np = dmso_params();
    np.beta1 = 1.4;
    np.chi = 0.6;
    np.beta2 = 0.016;
    return free_swell("nmp-pmda-oda", np, {245.0, "min"});
  }
  if (name == "water-hfpe") {
    return free_swell("water-hfpe", dmso_params(), {2800.0, "s"});
  }
  if (name == "compress-cycle") {
    ExperimentPreset p = free_swell("compress-cycle", dmso_params(), {10500.0, "min"});
    p.t_final = 1.5;
    p.schedule = {{{0.5, 0.0}, {1.0, 1.0}, {1.5, 0.0}}, 0.0};
    p.field_every = 1;
    return p;
  }
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

solver::RunRecord run_preset(const ExperimentPreset& p) {
  p.validate();
  return solver::run(ivp::State1D::dry(p.grid_points, p.solver.epsilon_floor), p.schedule,
                     p.params, p.solver, p.t_final, p.sample_every);
}

MassCurve normalize_mass_curve(const solver::RunRecord& record, bool require_flat,
                               double flat_tol) {
  const std::size_t k = record.samples();
  if (k < 2) throw ConfigError("t_final", "mass curve needs at least two samples");
  MassCurve c;
  c.times = record.times;
  c.mass_ratio = record.mass_curve;
  c.m0 = record.mass_curve.front();
  c.m_inf = record.mass_curve.back();
  if (require_flat) {
    const double drift = std::abs(record.mass_curve[k - 1] - record.mass_curve[k - 2]);
    if (!(drift < flat_tol)) {
      throw ConfigError("t_final", "mass curve not flat at t* = " + std::to_string(c.times.back()) +
                                       " (last change " + std::to_string(drift) +
                                       "); rerun with a longer horizon");
    }
  }
  if (c.m_inf == c.m0) {
    throw ConfigError("t_final", "mass unchanged over the run; normalized mass undefined");
  }
  c.normalized.reserve(k);
  for (double m : c.mass_ratio) c.normalized.push_back(ivp::normalized_mass(m, c.m0, c.m_inf));
  return c;
}

MassUptake run_mass_uptake(const ExperimentPreset& p) {
  MassUptake out;
  out.record = run_preset(p);
  out.curve = normalize_mass_curve(out.record, true);
  return out;
}

std::vector<std::size_t> ConvergenceOptions::default_grids() {
  std::vector<std::size_t> g;
  for (std::size_t n = 5; n <= 345; n += 10) g.push_back(n);
  g.push_back(351);
  return g;
}

double probe_field(const std::vector<double>& field, double z) {
  const ivp::Grid grid{field.size()};
  if (z < -1.0 || z > 1.0) throw ConfigError("probe_z", "outside [-1, 1]");
  const double x = (z + 1.0) / grid.dz();
  const auto i = std::min(static_cast<std::size_t>(std::floor(x)), field.size() - 2);
  const double w = x - static_cast<double>(i);
  if (w == 0.0) return field[i];
  return (1.0 - w) * field[i] + w * field[i + 1];
}

ConvergenceReport run_convergence_study(const ivp::NondimParams& np,
                                        const ivp::LoadSchedule& schedule,
                                        const ConvergenceOptions& opt) {
  if (opt.grids.empty()) throw ConfigError("grids", "no grid sizes given");
  for (std::size_t n : opt.grids) {
    if (n >= opt.reference_grid) {
      throw ConfigError("grids", "grid " + std::to_string(n) + " not coarser than reference " +
                                     std::to_string(opt.reference_grid));
    }
  }
  ConvergenceReport rep;
  rep.grids = opt.grids;
  rep.reference_grid = opt.reference_grid;
  rep.probe_z = opt.probe_z;
  rep.probe_t = opt.probe_t;
  rep.dt_star = opt.solver.dt_star;

  std::vector<std::size_t> jobs = opt.grids;
  jobs.push_back(opt.reference_grid);
  std::vector<double> values(jobs.size(), 0.0);
  std::vector<std::exception_ptr> failures(jobs.size());

  // Independent runs; each writes only its own slot.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const auto rec = solver::run(ivp::State1D::dry(jobs[j], opt.solver.epsilon_floor),
                                     schedule, np, opt.solver, opt.probe_t,
                                     std::numeric_limits<std::size_t>::max());
        values[j] = probe_field(rec.p_fields.back(), opt.probe_z);
      } catch (...) {
        failures[j] = std::current_exception();
      }
    }
  };
  std::size_t threads = opt.threads ? opt.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (!failures[j]) continue;
    const std::string where = "grid N = " + std::to_string(jobs[j]) + ": ";
    try {
      std::rethrow_exception(failures[j]);
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError(where + e.what(), e.residual());
    } catch (const ConfigError& e) {
      std::string msg = e.what();
      msg.erase(0, e.field().size() + 2);
      throw ConfigError(e.field(), where + msg);
    } catch (const SimulationError& e) {
      throw NumericError(where + e.what());
    }
  }

  rep.reference_value = values.back();
  rep.probe_values.assign(values.begin(), values.end() - 1);
  for (double v : rep.probe_values) rep.errors.push_back(std::abs(v - rep.reference_value));
  rep.monotone = nonincreasing_within(rep.errors, rep.noise_band);
  return rep;
}

bool nonincreasing_within(const std::vector<double>& errors, double band) {
  for (std::size_t k = 1; k < errors.size(); ++k) {
    if (errors[k] > (1.0 + band) * errors[k - 1]) return false;
  }
  return true;
}

std::vector<CurvePoint> parse_curve_csv(std::string_view text) {
  std::vector<CurvePoint> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::size_t time_col = 0, value_col = 0, columns = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (!header_seen) {
      bool has_time = false, has_value = false;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (cells[c] == "time" || cells[c] == "t_star") {
          time_col = c;
          has_time = true;
        } else if (cells[c] == "normalized_mass") {
          value_col = c;
          has_value = true;
        }
      }
      if (!has_time || !has_value) {
        throw ConfigError("csv", "header must contain 'time' and 'normalized_mass'");
      }
      columns = cells.size();
      header_seen = true;
      continue;
    }
    if (cells.size() != columns) {
      throw ConfigError("csv", "line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(columns) + " columns");
    }
    out.push_back({parse_number(cells[time_col], line_no), parse_number(cells[value_col], line_no)});
  }
  if (!header_seen) throw ConfigError("csv", "empty input");
  return out;
}

std::vector<CurvePoint> read_curve_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("csv", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_curve_csv(buf.str());
}

CurveComparison compare_external_curve(const std::vector<CurvePoint>& simulated,
                                       const std::vector<CurvePoint>& external) {
  if (external.size() < 2) throw ConfigError("csv", "external curve needs at least two points");
  if (simulated.size() < 2) throw ConfigError("csv", "simulated curve needs at least two points");
  for (std::size_t k = 1; k < external.size(); ++k) {
    if (!(external[k].time > external[k - 1].time)) {
      throw ConfigError("csv", "external times must be strictly increasing");
    }
  }
  const double t0 = simulated.front().time, t1 = simulated.back().time;
  if (external.front().time < t0 || external.back().time > t1) {
    throw ConfigError("csv", "external times leave the simulated horizon [" + std::to_string(t0) +
                                 ", " + std::to_string(t1) + "]");
  }
  CurveComparison cmp;
  double sum = 0.0;
  for (const auto& pt : external) {
    const double d = interpolate(simulated, pt.time) - pt.value;
    sum += d * d;
    cmp.max_deviation = std::max(cmp.max_deviation, std::abs(d));
  }
  cmp.points = external.size();
  cmp.rmse = std::sqrt(sum / static_cast<double>(external.size()));
  return cmp;
}

}  // namespace viscoswell::experiments
