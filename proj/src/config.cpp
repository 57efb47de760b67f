#include "octmc/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <map>
#include <set>
#include <sstream>

#include "octmc/presets.hpp"

namespace octmc {

std::string ConfigError::format(const std::string& source) const {
  std::string out = source;
  if (line) {
    out += ':' + std::to_string(*line);
    if (column) out += ':' + std::to_string(*column);
  }
  out += ": ";
  if (!key_path.empty()) out += key_path + ": ";
  out += message;
  return out;
}

namespace {

std::string join_errors(const std::string& source, const std::vector<ConfigError>& errors) {
  std::string out;
  for (const auto& e : errors) {
    if (!out.empty()) out += '\n';
    out += e.format(source);
  }
  return out;
}

}  // namespace

ConfigParseError::ConfigParseError(std::string source, std::vector<ConfigError> errors)
    : std::runtime_error(join_errors(source, errors)), errors_(std::move(errors)) {}

namespace {

std::string child_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

class Reader {
 public:
  std::vector<ConfigError> errors;
  std::map<std::string, YAML::Mark> marks;

  void error(const std::string& path, const YAML::Mark& mark, std::string message) {
    ConfigError e;
    e.key_path = path;
    if (!mark.is_null()) {
      e.line = mark.line + 1;
      e.column = mark.column + 1;
    }
    e.message = std::move(message);
    errors.push_back(std::move(e));
  }

  // Reports non-map nodes and keys outside `allowed`. Returns false when the
  // node cannot be read as a map.
  bool check_map(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!node.IsMap()) {
      error(path, node.Mark(), "expected a mapping");
      return false;
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      marks[child_path(path, key)] = kv.second.Mark();
      if (!ok.contains(key)) error(child_path(path, key), kv.first.Mark(), "unknown key");
    }
    return true;
  }

  template <typename T>
  void get(const YAML::Node& map, const std::string& path, const char* key, T& out) {
    const YAML::Node v = map[key];
    if (!v) return;
    const std::string p = child_path(path, key);
    if (!v.IsScalar()) {
      error(p, v.Mark(), "expected a scalar");
      return;
    }
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      error(p, v.Mark(), std::string("cannot read '") + v.Scalar() + "' as " + type_name<T>());
    }
  }

  void get_count(const YAML::Node& map, const std::string& path, const char* key, std::size_t& out) {
    long long v = static_cast<long long>(out);
    const std::size_t errors_before = errors.size();
    get(map, path, key, v);
    if (errors.size() != errors_before) return;
    if (v < 1) {
      error(child_path(path, key), map[key].Mark(), "must be >= 1");
      return;
    }
    out = static_cast<std::size_t>(v);
  }

  template <typename E>
  void get_enum(const YAML::Node& map, const std::string& path, const char* key, E& out,
                std::initializer_list<std::pair<const char*, E>> options) {
    std::string s;
    const YAML::Node v = map[key];
    if (!v) return;
    const std::size_t errors_before = errors.size();
    get(map, path, key, s);
    if (errors.size() != errors_before) return;
    std::string names;
    for (const auto& [name, value] : options) {
      if (s == name) {
        out = value;
        return;
      }
      if (!names.empty()) names += ", ";
      names += name;
    }
    error(child_path(path, key), v.Mark(), "'" + s + "' is not one of: " + names);
  }

  template <typename T>
  static const char* type_name() {
    if constexpr (std::is_same_v<T, bool>) {
      return "a boolean";
    } else if constexpr (std::is_integral_v<T>) {
      return "an integer";
    } else if constexpr (std::is_floating_point_v<T>) {
      return "a number";
    } else {
      return "a string";
    }
  }
};

void read_component(Reader& r, const YAML::Node& n, const std::string& path, SineComponent& c, bool with_list) {
  if (with_list) {
    if (!r.check_map(n, path, {"amplitude_um", "period_s", "phase_rad", "extra_components"})) return;
  } else if (!r.check_map(n, path, {"amplitude_um", "period_s", "phase_rad"})) {
    return;
  }
  r.get(n, path, "amplitude_um", c.amplitude_um);
  r.get(n, path, "period_s", c.period_s);
  r.get(n, path, "phase_rad", c.phase_rad);
}

void read_motion(Reader& r, const YAML::Node& n, MotionProfile& m) {
  const std::string path = "motion";
  SineComponent primary = m.primary();
  read_component(r, n, path, primary, true);
  std::vector<SineComponent> components{primary};
  if (n.IsMap() && n["extra_components"]) {
    const YAML::Node list = n["extra_components"];
    if (!list.IsSequence()) {
      r.error(path + ".extra_components", list.Mark(), "expected a list");
    } else {
      for (std::size_t i = 0; i < list.size(); ++i) {
        SineComponent c;
        read_component(r, list[i], path + ".extra_components[" + std::to_string(i) + "]", c, false);
        components.push_back(c);
      }
    }
  } else if (!n.IsMap()) {
    return;
  } else {
    components.insert(components.end(), m.components.begin() + 1, m.components.end());
  }
  m.components = std::move(components);
}

void read_offset(Reader& r, const YAML::Node& n, const std::string& path, OffsetDistribution& d) {
  if (!r.check_map(n, path, {"kind", "value_um", "magnitude_um", "low_um", "high_um", "mean_um", "sd_um"})) return;
  r.get_enum(n, path, "kind", d.kind,
             {{"constant", OffsetKind::constant},
              {"symmetric", OffsetKind::symmetric},
              {"uniform", OffsetKind::uniform},
              {"normal", OffsetKind::normal}});
  struct Param {
    const char* key;
    double* target;
  };
  std::vector<Param> params;
  switch (d.kind) {
    case OffsetKind::constant:
      params = {{"value_um", &d.a}};
      break;
    case OffsetKind::symmetric:
      params = {{"magnitude_um", &d.a}};
      break;
    case OffsetKind::uniform:
      params = {{"low_um", &d.a}, {"high_um", &d.b}};
      break;
    case OffsetKind::normal:
      params = {{"mean_um", &d.a}, {"sd_um", &d.b}};
      break;
  }
  const bool kind_given = static_cast<bool>(n["kind"]);
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    static const std::set<std::string> known{"value_um", "magnitude_um", "low_um", "high_um", "mean_um", "sd_um"};
    if (!known.contains(key)) continue;
    bool used = false;
    for (const auto& p : params) used = used || key == p.key;
    if (!used) r.error(child_path(path, key), kv.first.Mark(), "not a parameter of this offset kind");
  }
  for (const auto& p : params) {
    if (!n[p.key]) {
      // Symmetric keeps its default magnitude; two-parameter kinds need both.
      if (kind_given && d.kind != OffsetKind::symmetric) {
        r.error(child_path(path, p.key), n.Mark(), "missing required key");
      }
      continue;
    }
    r.get(n, path, p.key, *p.target);
  }
}

void read_scenario(Reader& r, const YAML::Node& root, ScenarioConfig& c) {
  if (root.IsNull()) return;
  if (!r.check_map(root, "",
                   {"name", "kind", "duration_s", "seed", "fine_step_s", "trace_step_s", "motion", "phantom", "needle",
                    "scan", "timing", "segmentation", "robot", "controller", "injection"})) {
    return;
  }
  r.get(root, "", "name", c.name);
  r.get_enum(root, "", "kind", c.kind, {{"track", ScenarioKind::track}, {"inject", ScenarioKind::inject}});
  r.get(root, "", "duration_s", c.duration_s);
  r.get(root, "", "seed", c.seed);
  r.get(root, "", "fine_step_s", c.fine_step_s);
  r.get(root, "", "trace_step_s", c.trace_step_s);

  if (const auto n = root["motion"]) read_motion(r, n, c.motion);

  if (const auto n = root["phantom"]; n && r.check_map(n, "phantom",
                                                       {"ilm_rest_depth_um", "retina_thickness_um", "lateral_extent_mm",
                                                        "center_x_um", "center_y_um", "tethering_gain",
                                                        "tether_radius_um"})) {
    auto& p = c.phantom;
    r.get(n, "phantom", "ilm_rest_depth_um", p.ilm_rest_depth_um);
    r.get(n, "phantom", "retina_thickness_um", p.retina_thickness_um);
    r.get(n, "phantom", "lateral_extent_mm", p.lateral_extent_mm);
    r.get(n, "phantom", "center_x_um", p.center_x_um);
    r.get(n, "phantom", "center_y_um", p.center_y_um);
    r.get(n, "phantom", "tethering_gain", p.tethering_gain);
    r.get(n, "phantom", "tether_radius_um", p.tether_radius_um);
  }

  if (const auto n = root["needle"];
      n && r.check_map(n, "needle", {"start_gap_um", "x_um", "y_um", "diameter_um", "angle_deg"})) {
    auto& p = c.needle;
    r.get(n, "needle", "start_gap_um", p.start_gap_um);
    r.get(n, "needle", "x_um", p.x_um);
    r.get(n, "needle", "y_um", p.y_um);
    r.get(n, "needle", "diameter_um", p.shape.diameter_um);
    r.get(n, "needle", "angle_deg", p.shape.angle_deg);
  }

  if (const auto n = root["scan"]; n && r.check_map(n, "scan",
                                                    {"n_bscans", "n_ascans", "n_depth", "scan_width_mm",
                                                     "scan_breadth_mm", "depth_range_mm"})) {
    auto& g = c.geometry;
    r.get_count(n, "scan", "n_bscans", g.n_bscans);
    r.get_count(n, "scan", "n_ascans", g.n_ascans);
    r.get_count(n, "scan", "n_depth", g.n_depth);
    r.get(n, "scan", "scan_width_mm", g.scan_width_mm);
    r.get(n, "scan", "scan_breadth_mm", g.scan_breadth_mm);
    r.get(n, "scan", "depth_range_mm", g.depth_range_mm);
  }

  if (const auto n = root["timing"]; n && r.check_map(n, "timing",
                                                      {"nominal_acquisition_s", "jitter", "jitter_spread",
                                                       "processing_overhead_s", "staggered"})) {
    auto& t = c.timing;
    r.get(n, "timing", "nominal_acquisition_s", t.nominal_acquisition_s);
    r.get_enum(n, "timing", "jitter", t.jitter_kind,
               {{"none", JitterKind::none}, {"uniform", JitterKind::uniform}, {"normal", JitterKind::normal}});
    r.get(n, "timing", "jitter_spread", t.jitter_spread);
    r.get(n, "timing", "processing_overhead_s", t.processing_overhead_s);
    r.get(n, "timing", "staggered", t.staggered);
  }

  if (const auto n = root["segmentation"]; n && r.check_map(n, "segmentation",
                                                            {"pixel_flip_rate", "scan_corruption_rate",
                                                             "corruption_offset", "dropout_rate"})) {
    auto& e = c.errors;
    r.get(n, "segmentation", "pixel_flip_rate", e.pixel_flip_rate);
    r.get(n, "segmentation", "scan_corruption_rate", e.scan_corruption_rate);
    r.get(n, "segmentation", "dropout_rate", e.dropout_rate);
    if (const auto o = n["corruption_offset"]) read_offset(r, o, "segmentation.corruption_offset", e.corruption_offset);
  }

  if (const auto n = root["robot"]; n && r.check_map(n, "robot",
                                                     {"min_effective_speed_um_s", "max_speed_um_s", "command_gain",
                                                      "time_constant_s"})) {
    auto& m = c.robot;
    r.get(n, "robot", "min_effective_speed_um_s", m.min_effective_speed);
    r.get(n, "robot", "max_speed_um_s", m.max_speed);
    r.get(n, "robot", "command_gain", m.command_gain);
    r.get(n, "robot", "time_constant_s", m.time_constant_s);
  }

  if (const auto n = root["controller"];
      n && r.check_map(n, "controller", {"mode", "speed", "invert_sign", "predictor"})) {
    auto& k = c.controller;
    r.get_enum(n, "controller", "mode", k.mode,
               {{"compare_previous", ControlMode::compare_previous}, {"predictive", ControlMode::predictive}});
    if (const auto s = n["speed"]) {
      if (s.IsScalar() && s.Scalar() == "auto") {
        k.speed.reset();
      } else {
        double v = 0.0;
        const std::size_t before = r.errors.size();
        r.get(n, "controller", "speed", v);
        if (r.errors.size() == before) k.speed = v;
      }
    }
    r.get(n, "controller", "invert_sign", k.invert_sign);
    if (const auto p = n["predictor"]; p && r.check_map(p, "controller.predictor",
                                                        {"process_noise", "measurement_noise",
                                                         "initial_velocity_variance"})) {
      r.get(p, "controller.predictor", "process_noise", k.predictor.process_noise);
      r.get(p, "controller.predictor", "measurement_noise", k.predictor.measurement_noise);
      r.get(p, "controller.predictor", "initial_velocity_variance", k.predictor.initial_velocity_variance);
    }
  }

  if (const auto n = root["injection"]; n && r.check_map(n, "injection",
                                                         {"target_relative_depth", "insertion_speed_um_s",
                                                          "volume_ml", "rate_ml_per_min"})) {
    auto& i = c.injection;
    r.get(n, "injection", "target_relative_depth", i.target_relative_depth);
    r.get(n, "injection", "insertion_speed_um_s", i.insertion_speed_um_s);
    r.get(n, "injection", "volume_ml", i.volume_ml);
    r.get(n, "injection", "rate_ml_per_min", i.rate_ml_per_min);
  }
}

// Semantic validation, anchored to the line of the offending key when the
// key was present in the input.
void validate_into(Reader& r, const ScenarioConfig& c) {
  for (const auto& issue : c.validate()) {
    YAML::Mark mark = YAML::Mark::null_mark();
    if (auto it = r.marks.find(issue.field); it != r.marks.end()) mark = it->second;
    r.error(issue.field, mark, issue.message);
  }
}

YAML::Node load_yaml(const std::string& text, const std::string& source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    ConfigError err;
    err.line = e.mark.line + 1;
    err.column = e.mark.column + 1;
    err.message = "syntax error: " + e.msg;
    throw ConfigParseError(source, {err});
  }
}

ScenarioConfig scenario_from_node(const YAML::Node& root, const std::string& source, ScenarioConfig base = {}) {
  Reader r;
  read_scenario(r, root, base);
  validate_into(r, base);
  if (!r.errors.empty()) throw ConfigParseError(source, std::move(r.errors));
  return base;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  return scenario_from_node(load_yaml(text, source), source);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioConfig load_config_file(const std::string& path) { return parse_config(read_text_file(path), path); }

namespace {

std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + '"';
}

const char* offset_kind_name(OffsetKind k) {
  switch (k) {
    case OffsetKind::constant:
      return "constant";
    case OffsetKind::symmetric:
      return "symmetric";
    case OffsetKind::uniform:
      return "uniform";
    case OffsetKind::normal:
      return "normal";
  }
  return "symmetric";
}

const char* jitter_name(JitterKind k) {
  switch (k) {
    case JitterKind::none:
      return "none";
    case JitterKind::uniform:
      return "uniform";
    case JitterKind::normal:
      return "normal";
  }
  return "none";
}

}  // namespace

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream o;
  o << "name: " << quoted(c.name) << '\n';
  o << "kind: " << (c.kind == ScenarioKind::inject ? "inject" : "track") << '\n';
  o << "duration_s: " << num(c.duration_s) << '\n';
  o << "seed: " << c.seed << '\n';
  o << "fine_step_s: " << num(c.fine_step_s) << '\n';
  o << "trace_step_s: " << num(c.trace_step_s) << '\n';
  const auto& p = c.motion.primary();
  o << "motion:\n";
  o << "  amplitude_um: " << num(p.amplitude_um) << '\n';
  o << "  period_s: " << num(p.period_s) << '\n';
  o << "  phase_rad: " << num(p.phase_rad) << '\n';
  o << "  extra_components:" << (c.motion.components.size() > 1 ? "\n" : " []\n");
  for (std::size_t i = 1; i < c.motion.components.size(); ++i) {
    const auto& x = c.motion.components[i];
    o << "    - amplitude_um: " << num(x.amplitude_um) << '\n';
    o << "      period_s: " << num(x.period_s) << '\n';
    o << "      phase_rad: " << num(x.phase_rad) << '\n';
  }
  o << "phantom:\n";
  o << "  ilm_rest_depth_um: " << num(c.phantom.ilm_rest_depth_um) << '\n';
  o << "  retina_thickness_um: " << num(c.phantom.retina_thickness_um) << '\n';
  o << "  lateral_extent_mm: " << num(c.phantom.lateral_extent_mm) << '\n';
  o << "  center_x_um: " << num(c.phantom.center_x_um) << '\n';
  o << "  center_y_um: " << num(c.phantom.center_y_um) << '\n';
  o << "  tethering_gain: " << num(c.phantom.tethering_gain) << '\n';
  o << "  tether_radius_um: " << num(c.phantom.tether_radius_um) << '\n';
  o << "needle:\n";
  o << "  start_gap_um: " << num(c.needle.start_gap_um) << '\n';
  o << "  x_um: " << num(c.needle.x_um) << '\n';
  o << "  y_um: " << num(c.needle.y_um) << '\n';
  o << "  diameter_um: " << num(c.needle.shape.diameter_um) << '\n';
  o << "  angle_deg: " << num(c.needle.shape.angle_deg) << '\n';
  o << "scan:\n";
  o << "  n_bscans: " << c.geometry.n_bscans << '\n';
  o << "  n_ascans: " << c.geometry.n_ascans << '\n';
  o << "  n_depth: " << c.geometry.n_depth << '\n';
  o << "  scan_width_mm: " << num(c.geometry.scan_width_mm) << '\n';
  o << "  scan_breadth_mm: " << num(c.geometry.scan_breadth_mm) << '\n';
  o << "  depth_range_mm: " << num(c.geometry.depth_range_mm) << '\n';
  o << "timing:\n";
  o << "  nominal_acquisition_s: " << num(c.timing.nominal_acquisition_s) << '\n';
  o << "  jitter: " << jitter_name(c.timing.jitter_kind) << '\n';
  o << "  jitter_spread: " << num(c.timing.jitter_spread) << '\n';
  o << "  processing_overhead_s: " << num(c.timing.processing_overhead_s) << '\n';
  o << "  staggered: " << (c.timing.staggered ? "true" : "false") << '\n';
  const auto& e = c.errors;
  o << "segmentation:\n";
  o << "  pixel_flip_rate: " << num(e.pixel_flip_rate) << '\n';
  o << "  scan_corruption_rate: " << num(e.scan_corruption_rate) << '\n';
  o << "  dropout_rate: " << num(e.dropout_rate) << '\n';
  o << "  corruption_offset:\n";
  o << "    kind: " << offset_kind_name(e.corruption_offset.kind) << '\n';
  switch (e.corruption_offset.kind) {
    case OffsetKind::constant:
      o << "    value_um: " << num(e.corruption_offset.a) << '\n';
      break;
    case OffsetKind::symmetric:
      o << "    magnitude_um: " << num(e.corruption_offset.a) << '\n';
      break;
    case OffsetKind::uniform:
      o << "    low_um: " << num(e.corruption_offset.a) << '\n';
      o << "    high_um: " << num(e.corruption_offset.b) << '\n';
      break;
    case OffsetKind::normal:
      o << "    mean_um: " << num(e.corruption_offset.a) << '\n';
      o << "    sd_um: " << num(e.corruption_offset.b) << '\n';
      break;
  }
  o << "robot:\n";
  o << "  min_effective_speed_um_s: " << num(c.robot.min_effective_speed) << '\n';
  o << "  max_speed_um_s: " << num(c.robot.max_speed) << '\n';
  o << "  command_gain: " << num(c.robot.command_gain) << '\n';
  o << "  time_constant_s: " << num(c.robot.time_constant_s) << '\n';
  o << "controller:\n";
  o << "  mode: " << (c.controller.mode == ControlMode::predictive ? "predictive" : "compare_previous") << '\n';
  o << "  speed: " << (c.controller.speed ? num(*c.controller.speed) : std::string("auto")) << '\n';
  o << "  invert_sign: " << (c.controller.invert_sign ? "true" : "false") << '\n';
  o << "  predictor:\n";
  o << "    process_noise: " << num(c.controller.predictor.process_noise) << '\n';
  o << "    measurement_noise: " << num(c.controller.predictor.measurement_noise) << '\n';
  o << "    initial_velocity_variance: " << num(c.controller.predictor.initial_velocity_variance) << '\n';
  o << "injection:\n";
  o << "  target_relative_depth: " << num(c.injection.target_relative_depth) << '\n';
  o << "  insertion_speed_um_s: " << num(c.injection.insertion_speed_um_s) << '\n';
  o << "  volume_ml: " << num(c.injection.volume_ml) << '\n';
  o << "  rate_ml_per_min: " << num(c.injection.rate_ml_per_min) << '\n';
  return o.str();
}

std::uint64_t config_hash(const ScenarioConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash_hex(const ScenarioConfig& config) {
  char buf[17];
  const auto r = std::to_chars(buf, buf + sizeof buf, config_hash(config), 16);
  std::string s(buf, r.ptr);
  return std::string(16 - s.size(), '0') + s;
}

namespace {

// Places `value` at the dotted `path` inside `root`, creating maps as needed.
void set_dotted(YAML::Node root, const std::string& path, const YAML::Node& value) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = path.find('.', pos);
    parts.push_back(path.substr(pos, dot - pos));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  std::vector<YAML::Node> chain{root};
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    YAML::Node next = chain.back()[parts[i]];
    if (!next.IsMap()) {
      chain.back()[parts[i]] = YAML::Node(YAML::NodeType::Map);
      next = chain.back()[parts[i]];
    }
    chain.push_back(next);
  }
  chain.back()[parts.back()] = YAML::Clone(value);
}

}  // namespace

SweepSpec parse_sweep(const std::string& text, const std::string& source) {
  const YAML::Node root = load_yaml(text, source);
  Reader r;
  if (!r.check_map(root, "", {"base", "base_preset", "seeds", "scenarios"})) throw ConfigParseError(source, r.errors);
  if (root["base"] && root["base_preset"]) r.error("base_preset", root["base_preset"].Mark(), "conflicts with base");
  if (!root["scenarios"]) r.error("scenarios", root.Mark(), "missing required key");

  YAML::Node base(YAML::NodeType::Map);
  if (const auto b = root["base"]) {
    base = YAML::Clone(b);
  } else if (const auto p = root["base_preset"]) {
    const auto name = p.as<std::string>();
    const auto text_preset = preset_yaml(name);
    if (!text_preset) {
      r.error("base_preset", p.Mark(), "unknown preset '" + name + "'");
    } else {
      base = YAML::Load(*text_preset);
    }
  }

  std::vector<std::uint64_t> seeds;
  if (const auto s = root["seeds"]) {
    if (!s.IsSequence()) {
      r.error("seeds", s.Mark(), "expected a list of integers");
    } else {
      for (std::size_t i = 0; i < s.size(); ++i) {
        try {
          seeds.push_back(s[i].as<std::uint64_t>());
        } catch (const YAML::Exception&) {
          r.error("seeds[" + std::to_string(i) + "]", s[i].Mark(), "expected a non-negative integer");
        }
      }
    }
  }
  if (!r.errors.empty()) throw ConfigParseError(source, r.errors);

  SweepSpec spec;
  const YAML::Node list = root["scenarios"];
  if (!list.IsSequence()) throw ConfigParseError(source, {ConfigError{"scenarios", list.Mark().line + 1, {}, "expected a list"}});
  std::vector<ConfigError> errors;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "scenarios[" + std::to_string(i) + "]";
    const YAML::Node item = list[i];
    Reader ir;
    if (!ir.check_map(item, path, {"name", "set"})) {
      errors.insert(errors.end(), ir.errors.begin(), ir.errors.end());
      continue;
    }
    YAML::Node merged = YAML::Clone(base);
    if (!merged.IsMap()) merged = YAML::Node(YAML::NodeType::Map);
    if (const auto set = item["set"]) {
      if (!set.IsMap()) {
        errors.push_back({path + ".set", set.Mark().line + 1, set.Mark().column + 1, "expected a mapping"});
        continue;
      }
      for (const auto& kv : set) set_dotted(merged, kv.first.as<std::string>(), kv.second);
    }
    if (const auto n = item["name"]) merged["name"] = YAML::Clone(n);
    try {
      const ScenarioConfig c = scenario_from_node(merged, source);
      if (seeds.empty()) {
        spec.configs.push_back(c);
      } else {
        for (auto seed : seeds) {
          ScenarioConfig copy = c;
          copy.seed = seed;
          spec.configs.push_back(copy);
        }
      }
    } catch (const ConfigParseError& e) {
      for (auto err : e.errors()) {
        err.key_path = path + ": " + err.key_path;
        errors.push_back(err);
      }
    }
  }
  if (!errors.empty()) throw ConfigParseError(source, std::move(errors));
  return spec;
}

SweepSpec load_sweep_file(const std::string& path) { return parse_sweep(read_text_file(path), path); }

}  // namespace octmc
