#include "qlim/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qlim/errors.hpp"
#include "qlim/format.hpp"

namespace qlim {

namespace {

using nlohmann::json;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key()))
      throw ConfigError("unknown config key \"" + path + it.key() + "\"");
  }
}

double get_num(const json& j, const std::string& key, double fallback,
               const std::string& path) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ConfigError("config key \"" + path + key + "\" must be a number");
  return j[key].get<double>();
}

std::string get_str(const json& j, const std::string& key,
                    const std::string& fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string())
    throw ConfigError("config key \"" + path + key + "\" must be a string");
  return j[key].get<std::string>();
}

}  // namespace

SqueezeProfile SqueezeConfig::make() const {
  try {
    if (family == "vacuum") return SqueezeProfile::vacuum();
    if (family == "constant") return SqueezeProfile::constant(r, phi);
    if (family == "single-pole")
      return SqueezeProfile::single_pole(r, phi, kTwoPi * pole_hz);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("squeeze: ") + e.what());
  }
  throw ConfigError("squeeze.family must be vacuum, constant or single-pole");
}

InterferometerParams RunConfig::detector_params() const {
  InterferometerParams p;
  p.mass_kg = mass_kg;
  p.arm_length_m = arm_length_m;
  p.cavity_power_w = cavity_power_w;
  p.laser_omega = kTwoPi * laser_freq_hz;
  p.detuning = kTwoPi * detuning_hz;
  p.half_bandwidth = kTwoPi * half_bandwidth_hz;
  return p;
}

void RunConfig::validate() const {
  try {
    detector_params().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("detector: ") + e.what());
  }
  (void)squeeze.make();
  if (!(grid.f_min_hz > 0.0))
    throw ConfigError("grid.f_min_hz must be > 0");
  if (!(grid.f_max_hz > grid.f_min_hz))
    throw ConfigError("grid.f_max_hz must exceed grid.f_min_hz");
  if (grid.n_points < 2) throw ConfigError("grid.n_points must be >= 2");
  if (grid.spacing != "log" && grid.spacing != "linear")
    throw ConfigError("grid.spacing must be log or linear");
  if (readout.mode != "phase" && readout.mode != "optimal" &&
      readout.mode != "fixed-theta")
    throw ConfigError("readout.mode must be phase, optimal or fixed-theta");
  if (!std::isfinite(readout.theta))
    throw ConfigError("readout.theta must be finite");
  if (output.format != "csv" && output.format != "json")
    throw ConfigError("output.format must be csv or json");
  if (output.sided != "double" && output.sided != "single")
    throw ConfigError("output.sided must be double or single");
  if (output.path.empty()) throw ConfigError("output.path must be nonempty");
}

RunConfig preset(const std::string& name) {
  RunConfig c;  // defaults are the tuned reference set
  if (name == "fig3-tuned") {
    c.detuning_hz = 0.0;
    return c;
  }
  if (name == "fig3-detuned") {
    c.detuning_hz = 400.0;
    return c;
  }
  throw ConfigError("unknown preset \"" + name +
                    "\" (available: fig3-tuned, fig3-detuned)");
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  RunConfig c;
  reject_unknown(j, {"detector", "squeeze", "grid", "readout", "output", "seed"},
                 "");

  if (j.contains("detector")) {
    const json& d = j["detector"];
    reject_unknown(d,
                   {"mass_kg", "arm_length_m", "cavity_power_w",
                    "laser_freq_hz", "detuning_hz", "half_bandwidth_hz"},
                   "detector.");
    c.mass_kg = get_num(d, "mass_kg", c.mass_kg, "detector.");
    c.arm_length_m = get_num(d, "arm_length_m", c.arm_length_m, "detector.");
    c.cavity_power_w =
        get_num(d, "cavity_power_w", c.cavity_power_w, "detector.");
    c.laser_freq_hz = get_num(d, "laser_freq_hz", c.laser_freq_hz, "detector.");
    c.detuning_hz = get_num(d, "detuning_hz", c.detuning_hz, "detector.");
    c.half_bandwidth_hz =
        get_num(d, "half_bandwidth_hz", c.half_bandwidth_hz, "detector.");
  }
  if (j.contains("squeeze")) {
    const json& s = j["squeeze"];
    reject_unknown(s, {"family", "r", "phi", "pole_hz"}, "squeeze.");
    c.squeeze.family = get_str(s, "family", c.squeeze.family, "squeeze.");
    c.squeeze.r = get_num(s, "r", c.squeeze.r, "squeeze.");
    c.squeeze.phi = get_num(s, "phi", c.squeeze.phi, "squeeze.");
    c.squeeze.pole_hz = get_num(s, "pole_hz", c.squeeze.pole_hz, "squeeze.");
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, {"f_min_hz", "f_max_hz", "n_points", "spacing"}, "grid.");
    c.grid.f_min_hz = get_num(g, "f_min_hz", c.grid.f_min_hz, "grid.");
    c.grid.f_max_hz = get_num(g, "f_max_hz", c.grid.f_max_hz, "grid.");
    c.grid.n_points =
        static_cast<int>(get_num(g, "n_points", c.grid.n_points, "grid."));
    c.grid.spacing = get_str(g, "spacing", c.grid.spacing, "grid.");
  }
  if (j.contains("readout")) {
    const json& r = j["readout"];
    reject_unknown(r, {"mode", "theta"}, "readout.");
    c.readout.mode = get_str(r, "mode", c.readout.mode, "readout.");
    c.readout.theta = get_num(r, "theta", c.readout.theta, "readout.");
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    reject_unknown(o, {"path", "format", "sided", "svg"}, "output.");
    c.output.path = get_str(o, "path", c.output.path, "output.");
    c.output.format = get_str(o, "format", c.output.format, "output.");
    c.output.sided = get_str(o, "sided", c.output.sided, "output.");
    if (o.contains("svg")) {
      if (!o["svg"].is_boolean())
        throw ConfigError("config key \"output.svg\" must be a boolean");
      c.output.svg = o["svg"].get<bool>();
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer())
      throw ConfigError("config key \"seed\" must be an integer");
    c.seed = j["seed"].get<uint64_t>();
  }

  c.validate();
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  std::ostringstream o;
  o << "{\n"
    << "  \"detector\": {\n"
    << "    \"mass_kg\": " << fmt17(c.mass_kg) << ",\n"
    << "    \"arm_length_m\": " << fmt17(c.arm_length_m) << ",\n"
    << "    \"cavity_power_w\": " << fmt17(c.cavity_power_w) << ",\n"
    << "    \"laser_freq_hz\": " << fmt17(c.laser_freq_hz) << ",\n"
    << "    \"detuning_hz\": " << fmt17(c.detuning_hz) << ",\n"
    << "    \"half_bandwidth_hz\": " << fmt17(c.half_bandwidth_hz) << "\n"
    << "  },\n"
    << "  \"squeeze\": {\n"
    << "    \"family\": \"" << c.squeeze.family << "\",\n"
    << "    \"r\": " << fmt17(c.squeeze.r) << ",\n"
    << "    \"phi\": " << fmt17(c.squeeze.phi) << ",\n"
    << "    \"pole_hz\": " << fmt17(c.squeeze.pole_hz) << "\n"
    << "  },\n"
    << "  \"grid\": {\n"
    << "    \"f_min_hz\": " << fmt17(c.grid.f_min_hz) << ",\n"
    << "    \"f_max_hz\": " << fmt17(c.grid.f_max_hz) << ",\n"
    << "    \"n_points\": " << c.grid.n_points << ",\n"
    << "    \"spacing\": \"" << c.grid.spacing << "\"\n"
    << "  },\n"
    << "  \"readout\": {\n"
    << "    \"mode\": \"" << c.readout.mode << "\",\n"
    << "    \"theta\": " << fmt17(c.readout.theta) << "\n"
    << "  },\n"
    << "  \"output\": {\n"
    << "    \"path\": \"" << c.output.path << "\",\n"
    << "    \"format\": \"" << c.output.format << "\",\n"
    << "    \"sided\": \"" << c.output.sided << "\",\n"
    << "    \"svg\": " << (c.output.svg ? "true" : "false") << "\n"
    << "  },\n"
    << "  \"seed\": " << c.seed << "\n"
    << "}\n";
  return o.str();
}

std::vector<double> frequency_grid(const GridConfig& grid) {
  std::vector<double> f(grid.n_points);
  const int n = grid.n_points;
  if (grid.spacing == "linear") {
    const double step = (grid.f_max_hz - grid.f_min_hz) / (n - 1);
    for (int i = 0; i < n; ++i) f[i] = grid.f_min_hz + step * i;
  } else {
    const double la = std::log(grid.f_min_hz), lb = std::log(grid.f_max_hz);
    for (int i = 0; i < n; ++i)
      f[i] = std::exp(la + (lb - la) * i / (n - 1));
  }
  f.front() = grid.f_min_hz;
  f.back() = grid.f_max_hz;
  return f;
}

}  // namespace qlim
