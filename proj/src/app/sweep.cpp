#include "pacb/app/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "pacb/app/csv.hpp"
#include "pacb/units.hpp"

namespace pacb::app {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << source << ": ";
  if (line > 0) os << "line " << line << ": ";
  os << what;
  throw ConfigError(os.str(), {}, line);
}

double parse_number(std::string_view text, SweepVariable var, std::string_view source, std::size_t line) {
  text = trim(text);
  double v = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || !std::isfinite(v)) fail(source, line, "cannot parse sweep value '" + std::string(text) + "'");
  const std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
  if (unit.empty()) return v;
  const bool ok = is_power_variable(var) ? unit == "dBm"
                  : (var == SweepVariable::d_b_e || var == SweepVariable::chi) ? unit == "m"
                                                                                : false;
  if (!ok) fail(source, line, "unit '" + std::string(unit) + "' not accepted for " + std::string(to_string(var)));
  return v;
}

std::vector<double> parse_values(std::string_view text, SweepVariable var, std::string_view source,
                                 std::size_t line) {
  std::vector<double> values;
  text = trim(text);
  if (text.empty()) return values;
  if (text.find(':') != std::string_view::npos) {
    // start:step:stop, with an optional unit after stop
    const auto parts = split(text, ':');
    if (parts.size() != 3) fail(source, line, "range must be start:step:stop");
    const double start = parse_number(parts[0], var, source, line);
    const double step = parse_number(parts[1], var, source, line);
    const double stop = parse_number(parts[2], var, source, line);
    if (!(step > 0.0)) fail(source, line, "range step must be positive");
    if (stop < start) fail(source, line, "range stop is below start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) values.push_back(start + static_cast<double>(k) * step);
    return values;
  }
  for (std::string_view item : split(text, ',')) values.push_back(parse_number(item, var, source, line));
  return values;
}

CurveSpec parse_curve(std::string_view text, std::string_view source, std::size_t line) {
  CurveSpec c;
  c.label = std::string(trim(text));
  if (c.label.empty()) return c;
  for (std::string_view item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) fail(source, line, "curve override '" + std::string(item) + "' is not key=value");
    c.overrides.emplace_back(std::string(trim(item.substr(0, eq))), std::string(trim(item.substr(eq + 1))));
  }
  return c;
}

}  // namespace

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::d_b_e: return "d_b_e";
    case SweepVariable::chi: return "chi";
    case SweepVariable::delta: return "delta";
    case SweepVariable::p_max: return "p_max";
    case SweepVariable::sigma_e_nominal: return "sigma_e_nominal";
    case SweepVariable::epsilon: return "epsilon";
    case SweepVariable::sigma_p: return "sigma_p";
  }
  return "unknown";
}

std::optional<SweepVariable> parse_sweep_variable(std::string_view name) {
  for (SweepVariable v : {SweepVariable::d_b_e, SweepVariable::chi, SweepVariable::delta,
                          SweepVariable::p_max, SweepVariable::sigma_e_nominal,
                          SweepVariable::epsilon, SweepVariable::sigma_p}) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

bool is_power_variable(SweepVariable v) {
  return v == SweepVariable::p_max || v == SweepVariable::sigma_e_nominal || v == SweepVariable::sigma_p;
}

std::string axis_label(SweepVariable v) {
  switch (v) {
    case SweepVariable::d_b_e: return "device-eavesdropper distance (m)";
    case SweepVariable::chi: return "location error bound chi (m)";
    case SweepVariable::delta: return "CSI error bound delta";
    case SweepVariable::p_max: return "power budget (dBm)";
    case SweepVariable::sigma_e_nominal: return "nominal eavesdropper noise (dBm)";
    case SweepVariable::epsilon: return "covertness epsilon";
    case SweepVariable::sigma_p: return "receive noise power (dBm)";
  }
  return "";
}

void SweepSpec::validate() const {
  if (values.empty()) throw ConfigError("sweep '" + name + "': values list is empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw ConfigError("sweep '" + name + "': values must be strictly increasing");
  }
  for (const CurveSpec& c : curves) {
    for (const auto& [key, value] : c.overrides) {
      if (!is_config_key(key)) throw ConfigError("sweep '" + name + "': curve override names unknown key '" + key + "'", key);
      Config probe;
      apply_assignment(probe, key, value);
    }
  }
  if (name.empty() || name.find_first_of("/\\") != std::string::npos) {
    throw ConfigError("sweep name must be a plain file stem");
  }
}

SweepSpec parse_sweep(std::string_view text, std::string_view source) {
  SweepSpec spec;
  bool have_variable = false;
  std::string_view values_text;
  std::size_t values_line = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(source, line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "name") {
      spec.name = std::string(value);
    } else if (key == "title") {
      spec.title = std::string(value);
    } else if (key == "variable") {
      const auto v = parse_sweep_variable(value);
      if (!v) fail(source, line_no, "unknown sweep variable '" + std::string(value) + "'");
      spec.variable = *v;
      have_variable = true;
    } else if (key == "values") {
      values_text = value;
      values_line = line_no;
    } else if (key == "curve") {
      spec.curves.push_back(parse_curve(value, source, line_no));
    } else {
      fail(source, line_no, "unknown sweep key '" + std::string(key) + "'");
    }
  }
  if (!have_variable) fail(source, 0, "missing 'variable'");
  spec.values = parse_values(values_text, spec.variable, source, values_line);
  spec.validate();
  return spec;
}

SweepSpec load_sweep(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read sweep file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sweep(buf.str(), path);
}

void apply_sweep_value(Config& config, SweepVariable variable, double value) {
  switch (variable) {
    case SweepVariable::d_b_e: config.d_b_e = value; break;
    case SweepVariable::chi: config.chi = value; break;
    case SweepVariable::delta: config.delta = value; break;
    case SweepVariable::p_max: config.p_max = units::dbm_to_watts(value); break;
    case SweepVariable::sigma_e_nominal: config.sigma_e_nominal = units::dbm_to_watts(value); break;
    case SweepVariable::epsilon: config.epsilon = value; break;
    case SweepVariable::sigma_p: config.sigma_p = units::dbm_to_watts(value); break;
  }
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ao: return "ao";
    case Algorithm::baseline_x0: return "baseline_x0";
    case Algorithm::baseline_xL4: return "baseline_xL4";
    case Algorithm::baseline_xL2: return "baseline_xL2";
  }
  return "unknown";
}

std::vector<SweepRow> run_sweep(const Config& base, const SweepSpec& spec, unsigned workers) {
  spec.validate();
  const std::size_t n_curves = spec.curve_count();
  const std::size_t n_values = spec.values.size();

  // Build every problem up front so config errors surface before any solve.
  struct Point {
    Problem problem;
    SolverOptions options;
  };
  std::vector<Point> points;
  points.reserve(n_curves * n_values);
  for (std::size_t c = 0; c < n_curves; ++c) {
    Config curve_cfg = base;
    if (!spec.curves.empty()) {
      for (const auto& [key, value] : spec.curves[c].overrides) apply_assignment(curve_cfg, key, value);
    }
    for (double v : spec.values) {
      Config cfg = curve_cfg;
      apply_sweep_value(cfg, spec.variable, v);
      points.push_back({to_problem(cfg), to_solver_options(cfg)});
    }
  }

  constexpr std::size_t kAlgos = std::size(kAlgorithms);
  std::vector<SweepRow> rows(n_curves * kAlgos * n_values);
  auto solve_point = [&](std::size_t idx) {
    const std::size_t c = idx / n_values;
    const std::size_t k = idx % n_values;
    const Point& pt = points[idx];
    const double L = pt.problem.scenario.room.length;
    for (std::size_t a = 0; a < kAlgos; ++a) {
      SweepRow& row = rows[(c * kAlgos + a) * n_values + k];
      row.sweep_value = spec.values[k];
      row.curve_id = c;
      row.algo = kAlgorithms[a];
      switch (row.algo) {
        case Algorithm::ao: row.result = solve_ao(pt.problem, pt.options); break;
        case Algorithm::baseline_x0: row.result = solve_baseline(pt.problem, 0.0); break;
        case Algorithm::baseline_xL4: row.result = solve_baseline(pt.problem, L / 4.0); break;
        case Algorithm::baseline_xL2: row.result = solve_baseline(pt.problem, L / 2.0); break;
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers <= 1 || points.size() <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) solve_point(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(workers, points.size()); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < points.size(); i = next++) solve_point(i);
      });
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kSweepCsvHeader) + "\r\n";
  for (const SweepRow& r : rows) {
    const SolveResult& s = r.result;
    out += csv_line({format_double(r.sweep_value), std::to_string(r.curve_id), std::string(to_string(r.algo)),
                     s.feasible ? format_double(units::watts_to_dbm(s.p0_opt)) : std::string(),
                     format_double(s.tpa_x_opt), format_double(s.rate), s.feasible ? "1" : "0"});
  }
  return out;
}

}  // namespace pacb::app
