#include "pacb/app/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "pacb/app/csv.hpp"
#include "pacb/units.hpp"

namespace pacb::app {
namespace {

enum class Kind { power, ratio, length, frequency, angle, scalar, integer };

struct Key {
  std::string_view name;
  Kind kind;
  std::function<void(Config&, double)> set;
  std::function<std::optional<double>(const Config&)> get;
  // integer keys bypass double so 64-bit seeds survive
  std::function<void(Config&, std::uint64_t)> set_int = {};
  std::function<std::uint64_t(const Config&)> get_int = {};
};

template <class T>
Key field(std::string_view name, Kind kind, T Config::*member) {
  return {name, kind,
          [member](Config& c, double v) { c.*member = static_cast<T>(v); },
          [member](const Config& c) -> std::optional<double> { return static_cast<double>(c.*member); }};
}

template <class T>
Key integer_field(std::string_view name, T Config::*member) {
  Key k = field(name, Kind::integer, member);
  k.set_int = [member](Config& c, std::uint64_t v) { c.*member = static_cast<T>(v); };
  k.get_int = [member](const Config& c) { return static_cast<std::uint64_t>(c.*member); };
  return k;
}

Key optional_field(std::string_view name, Kind kind, std::optional<double> Config::*member) {
  return {name, kind, [member](Config& c, double v) { c.*member = v; },
          [member](const Config& c) { return c.*member; }};
}

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = {
      field("room_length", Kind::length, &Config::room_length),
      field("room_width", Kind::length, &Config::room_width),
      field("room_height", Kind::length, &Config::room_height),
      field("waveguide_tx_y", Kind::length, &Config::waveguide_tx_y),
      field("waveguide_rx_y", Kind::length, &Config::waveguide_rx_y),
      optional_field("bd_x", Kind::length, &Config::bd_x),
      field("bd_y", Kind::length, &Config::bd_y),
      field("d_b_e", Kind::length, &Config::d_b_e),
      field("eve_bearing_deg", Kind::angle, &Config::eve_bearing_deg),
      optional_field("rpa_x", Kind::length, &Config::rpa_x),
      field("carrier_frequency", Kind::frequency, &Config::carrier_frequency),
      field("effective_index", Kind::scalar, &Config::effective_index),
      field("path_loss_exponent", Kind::scalar, &Config::path_loss_exponent),
      field("p_max", Kind::power, &Config::p_max),
      field("kappa", Kind::scalar, &Config::kappa),
      field("zeta", Kind::scalar, &Config::zeta),
      field("sigma_p", Kind::power, &Config::sigma_p),
      field("bandwidth", Kind::frequency, &Config::bandwidth),
      field("sigma_e_nominal", Kind::power, &Config::sigma_e_nominal),
      field("noise_uncertainty", Kind::ratio, &Config::noise_uncertainty),
      field("chi", Kind::length, &Config::chi),
      field("delta", Kind::scalar, &Config::delta),
      field("g_est", Kind::scalar, &Config::g_est),
      field("epsilon", Kind::scalar, &Config::epsilon),
      field("gamma_th", Kind::ratio, &Config::gamma_th),
      integer_field("seed", &Config::seed),
      integer_field("mc_samples", &Config::mc_samples),
      field("ao_tol", Kind::scalar, &Config::ao_tol),
      integer_field("ao_max_iter", &Config::ao_max_iter),
  };
  return keys;
}

const Key* find_key(std::string_view name) {
  for (const Key& k : key_table()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::string_view key, std::size_t line, const std::string& what) {
  std::ostringstream os;
  if (line > 0) os << "line " << line << ": ";
  os << "key '" << key << "': " << what;
  throw ConfigError(os.str(), std::string(key), line);
}

struct Quantity {
  double number;
  std::string unit;
};

std::optional<Quantity> split_quantity(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || !std::isfinite(v)) return std::nullopt;
  return Quantity{v, std::string(trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr))))};
}

double to_canonical(const Key& key, const Quantity& q, std::size_t line) {
  const std::string& u = q.unit;
  const double v = q.number;
  auto bad_unit = [&](std::string_view allowed) -> double {
    fail(key.name, line, "unit '" + u + "' not accepted (use " + std::string(allowed) + ")");
  };
  switch (key.kind) {
    case Kind::power:
      if (u == "dBm") return units::dbm_to_watts(v);
      if (u == "dBW") return units::db_to_linear(v);
      if (u == "W") return v;
      if (u == "mW") return v * 1e-3;
      if (u.empty()) fail(key.name, line, "power needs a unit suffix (dBm, dBW, W or mW)");
      return bad_unit("dBm, dBW, W or mW");
    case Kind::ratio:
      if (u.empty()) return v;
      if (u == "dB") return units::db_to_linear(v);
      return bad_unit("dB or a plain linear ratio");
    case Kind::length:
      if (u.empty() || u == "m") return v;
      if (u == "cm") return v * 1e-2;
      if (u == "mm") return v * 1e-3;
      return bad_unit("m, cm or mm");
    case Kind::frequency:
      if (u.empty() || u == "Hz") return v;
      if (u == "kHz") return v * 1e3;
      if (u == "MHz") return v * 1e6;
      if (u == "GHz") return v * 1e9;
      return bad_unit("Hz, kHz, MHz or GHz");
    case Kind::angle:
      if (u.empty() || u == "deg") return v;
      if (u == "rad") return v * 180.0 / std::numbers::pi;
      return bad_unit("deg or rad");
    case Kind::scalar:
      if (!u.empty()) return bad_unit("a plain number");
      return v;
    case Kind::integer:
      return v;  // handled by parse_integer
  }
  return v;
}

std::string_view unit_for_render(Kind kind) {
  switch (kind) {
    case Kind::power: return " W";
    case Kind::frequency: return " Hz";
    default: return "";
  }
}

}  // namespace

ConfigError::ConfigError(std::string message, std::string key, std::size_t line)
    : std::runtime_error(std::move(message)), key_(std::move(key)), line_(line) {}

bool is_config_key(std::string_view key) { return find_key(key) != nullptr; }

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Key& k : key_table()) out.emplace_back(k.name);
  return out;
}

void apply_assignment(Config& config, std::string_view key, std::string_view value, std::size_t line) {
  const Key* k = find_key(key);
  if (k == nullptr) {
    std::ostringstream os;
    if (line > 0) os << "line " << line << ": ";
    os << "unknown key '" << key << "'";
    throw ConfigError(os.str(), std::string(key), line);
  }
  if (k->kind == Kind::integer) {
    const std::string_view t = trim(value);
    std::uint64_t n = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), n);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
      fail(key, line, "expected a non-negative integer, got '" + std::string(t) + "'");
    }
    if (key == "ao_max_iter" && n > 1'000'000'000) fail(key, line, "too large");
    k->set_int(config, n);
    return;
  }
  const std::optional<Quantity> q = split_quantity(value);
  if (!q) fail(key, line, "cannot parse value '" + std::string(trim(value)) + "'");
  k->set(config, to_canonical(*k, *q, line));
}

Config parse_config(std::string_view text, std::string_view source) {
  Config config;
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
    if (eq == std::string_view::npos) {
      std::ostringstream os;
      os << source << ": line " << line_no << ": expected 'key = value'";
      throw ConfigError(os.str(), {}, line_no);
    }
    apply_assignment(config, trim(line.substr(0, eq)), line.substr(eq + 1), line_no);
  }
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string render_config(const Config& config) {
  std::ostringstream os;
  for (const Key& k : key_table()) {
    const std::optional<double> v = k.get(config);
    if (!v) continue;
    os << k.name << " = ";
    if (k.kind == Kind::integer) {
      os << k.get_int(config);
    } else {
      os << format_double(*v) << unit_for_render(k.kind);
    }
    os << '\n';
  }
  return os.str();
}

Problem to_problem(const Config& c) {
  try {
    Problem p;
    const double x_b = c.bd_x.value_or(c.room_length / 2.0);
    const double bearing = c.eve_bearing_deg * std::numbers::pi / 180.0;
    p.scenario.room = {c.room_length, c.room_width, c.room_height};
    p.scenario.waveguides = {c.waveguide_tx_y, c.waveguide_rx_y};
    p.scenario.layout.bd = {x_b, c.bd_y, 0.0};
    p.scenario.layout.eve_estimate = {x_b + c.d_b_e * std::cos(bearing),
                                      c.bd_y + c.d_b_e * std::sin(bearing), 0.0};
    // Bearings along the axes should not leave rounding residue in the other coordinate.
    if (std::abs(p.scenario.layout.eve_estimate.y - c.bd_y) < 1e-12 * std::max(1.0, c.d_b_e)) {
      p.scenario.layout.eve_estimate.y = c.bd_y;
    }
    p.scenario.layout.tpa_x = c.room_length / 4.0;
    p.scenario.layout.rpa_x = c.rpa_x.value_or(c.room_length / 2.0);
    p.rf = RfConstants(c.carrier_frequency, c.effective_index, c.path_loss_exponent);
    p.power = {.p0 = 0.0, .p_max = c.p_max, .kappa = c.kappa, .zeta = c.zeta,
               .noise_rpa = c.sigma_p, .bandwidth = c.bandwidth};
    p.noise = NoiseUncertainty(c.sigma_e_nominal, c.noise_uncertainty);
    p.eve = {c.chi, c.delta, c.g_est};
    p.covertness = {c.epsilon};
    p.reliability = {c.gamma_th};
    p.validate();
    if (!(c.ao_tol > 0.0)) throw std::invalid_argument("ao_tol must be positive");
    if (c.ao_max_iter < 1) throw std::invalid_argument("ao_max_iter must be at least 1");
    return p;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
}

SolverOptions to_solver_options(const Config& c) {
  SolverOptions o;
  o.tol = c.ao_tol;
  o.max_iter = static_cast<int>(c.ao_max_iter);
  return o;
}

}  // namespace pacb::app
