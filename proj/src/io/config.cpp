#include "vic/io/config.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "vic/error.hpp"
#include "vic/io/csv.hpp"

namespace vic {
namespace {

// ---------------------------------------------------------------- writing

YAML::Node num(double v) { return YAML::Node(format_double(v)); }

YAML::Node flow(YAML::Node n) {
  n.SetStyle(YAML::EmitterStyle::Flow);
  return n;
}

YAML::Node nums(std::initializer_list<double> values) {
  YAML::Node n(YAML::NodeType::Sequence);
  for (double v : values) n.push_back(num(v));
  return flow(n);
}

YAML::Node vec3(const Eigen::Vector3d& v) { return nums({v.x(), v.y(), v.z()}); }

YAML::Node range(const Range& r, bool active) {
  YAML::Node n;
  n["range"] = nums({r.lo, r.hi});
  n["active"] = active;
  return n;
}

YAML::Node sim_node(const SimConfig& s) {
  YAML::Node n;
  n["dt"] = num(s.dt);
  n["decimation"] = s.decimation;
  n["horizon"] = num(s.horizon);
  n["failure_penalty"] = num(s.failure_penalty);
  return n;
}

YAML::Node uncertainty_node(const UncertaintySpec& u) {
  YAML::Node n;
  n["ground_height"] = range(u.ground_height, u.ground_height_active);
  n["table_height"] = range(u.table_height, u.table_height_active);
  n["friction"] = range(u.friction, u.friction_active);
  n["stiffness"] = range(u.stiffness, u.stiffness_active);
  return n;
}

std::string emit(const YAML::Node& root) {
  YAML::Emitter out;
  out << root;
  return std::string(out.c_str()) + "\n";
}

// ---------------------------------------------------------------- reading

bool present(const YAML::Node& n) { return n.IsDefined() && !n.IsNull(); }

/// Walks one YAML mapping, remembering which keys were consumed so that leftovers can
/// be reported as unknown.
class MapReader {
 public:
  MapReader(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (present(node_) && !node_.IsMap()) {
      throw ConfigError(path_.empty() ? "<root>" : path_, "expected a mapping");
    }
  }
  MapReader(const MapReader&) = delete;
  ~MapReader() = default;

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  /// The value under `key`, or an undefined node when absent (see `present`).
  YAML::Node take(const std::string& key) {
    seen_.insert(key);
    if (!node_.IsDefined() || !node_.IsMap()) return YAML::Node(YAML::NodeType::Undefined);
    const YAML::Node& map = node_;
    return map[key];
  }

  template <class T>
  void get(const std::string& key, T& out) {
    YAML::Node v = take(key);
    if (!present(v)) return;
    out = convert<T>(v, field(key));
  }

  void get_range(const std::string& key, Range& r, bool& active) {
    YAML::Node v = take(key);
    if (!present(v)) return;
    MapReader m(v, field(key));
    YAML::Node rv = m.take("range");
    if (present(rv)) {
      const auto values = convert<std::vector<double>>(rv, m.field("range"));
      if (values.size() != 2) throw ConfigError(m.field("range"), "expected [lo, hi]");
      r.lo = values[0];
      r.hi = values[1];
      if (r.lo > r.hi) {
        throw ConfigError(field(key), fmt::format("lo > hi ({} > {})", r.lo, r.hi));
      }
    }
    m.get("active", active);
    m.finish();
  }

  void get_vec3(const std::string& key, Eigen::Vector3d& out) {
    YAML::Node v = take(key);
    if (!present(v)) return;
    const auto values = convert<std::vector<double>>(v, field(key));
    if (values.size() != 3) throw ConfigError(field(key), "expected 3 numbers");
    out = Eigen::Vector3d(values[0], values[1], values[2]);
  }

  void finish() const {
    if (!present(node_)) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw ConfigError(field(key), "unknown key");
    }
  }

  template <class T>
  static T convert(const YAML::Node& v, const std::string& field) {
    try {
      return v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(field, fmt::format("malformed value '{}'", YAML::Dump(v)));
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_sim(MapReader& parent, const std::string& key, SimConfig& s) {
  MapReader m(parent.take(key), parent.field(key));
  m.get("dt", s.dt);
  m.get("decimation", s.decimation);
  m.get("horizon", s.horizon);
  m.get("failure_penalty", s.failure_penalty);
  m.finish();
}

void read_uncertainty(MapReader& parent, UncertaintySpec& u) {
  MapReader m(parent.take("uncertainty"), parent.field("uncertainty"));
  m.get_range("ground_height", u.ground_height, u.ground_height_active);
  m.get_range("table_height", u.table_height, u.table_height_active);
  m.get_range("friction", u.friction, u.friction_active);
  m.get_range("stiffness", u.stiffness, u.stiffness_active);
  m.finish();
}

void read_plain_range(MapReader& parent, const std::string& key, Range& r) {
  YAML::Node v = parent.take(key);
  if (!present(v)) return;
  const auto values = MapReader::convert<std::vector<double>>(v, parent.field(key));
  if (values.size() != 2) throw ConfigError(parent.field(key), "expected [lo, hi]");
  if (values[0] > values[1]) {
    throw ConfigError(parent.field(key), fmt::format("lo > hi ({} > {})", values[0], values[1]));
  }
  r = {values[0], values[1]};
}

std::string noise_name(NoiseKind k) {
  return k == NoiseKind::kGaussian ? "gaussian" : "ornstein_uhlenbeck";
}

std::string resample_name(GroundResample r) {
  return r == GroundResample::kOnLiftoff ? "on_liftoff" : "fixed_interval";
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(fmt::format("cannot open {}", path));
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError(fmt::format("cannot open {} for writing", path));
  out << text;
  if (!out) throw FormatError(fmt::format("write to {} failed", path));
}

YAML::Node parse_yaml(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<file>", fmt::format("malformed YAML: {}", e.what()));
  }
}

}  // namespace

std::string dump_experiment(const ExperimentSpec& s) {
  YAML::Node root;
  root["name"] = s.name;
  root["env"] = s.env;
  root["parametrization"] = std::string(to_string(s.parametrization));
  YAML::Node seeds(YAML::NodeType::Sequence);
  for (auto seed : s.seeds) seeds.push_back(seed);
  root["seeds"] = flow(seeds);
  root["output_dir"] = s.output_dir;
  root["threads"] = s.threads;
  root["convergence_fraction"] = num(s.convergence_fraction);
  root["final_window"] = s.final_window;

  YAML::Node c;
  c["kp"] = num(s.controller.kp);
  c["kd_ratio"] = num(s.controller.kd_ratio);
  c["kp_min"] = num(s.controller.kp_min);
  c["kp_max"] = num(s.controller.kp_max);
  root["controller"] = c;

  YAML::Node tr;
  tr["enabled"] = s.tracking.enabled;
  tr["k"] = num(s.tracking.k);
  root["tracking"] = tr;

  const TrainerConfig& t = s.trainer;
  YAML::Node tn;
  tn["gamma"] = num(t.gamma);
  tn["polyak"] = num(t.polyak);
  tn["actor_lr"] = num(t.actor_lr);
  tn["critic_lr"] = num(t.critic_lr);
  tn["batch_size"] = t.batch_size;
  tn["buffer_capacity"] = t.buffer_capacity;
  tn["warmup_steps"] = t.warmup_steps;
  tn["updates_per_step"] = num(t.updates_per_step);
  tn["episodes"] = t.episodes;
  YAML::Node hidden(YAML::NodeType::Sequence);
  for (int h : t.hidden) hidden.push_back(h);
  tn["hidden"] = flow(hidden);
  tn["noise"] = noise_name(t.noise);
  tn["noise_scale"] = num(t.noise_scale);
  tn["noise_final"] = num(t.noise_final);
  tn["noise_decay_episodes"] = t.noise_decay_episodes;
  tn["ou_theta"] = num(t.ou_theta);
  tn["eval_every"] = t.eval_every;
  tn["eval_episodes"] = t.eval_episodes;
  tn["reward_scale"] = num(t.reward_scale);
  tn["init_scale"] = num(t.init_scale);
  tn["preactivation_penalty"] = num(t.preactivation_penalty);
  root["trainer"] = tn;

  const HopperConfig& h = s.hopper;
  YAML::Node hn;
  hn["sim"] = sim_node(h.sim);
  YAML::Node ground;
  ground["stiffness"] = num(h.ground_stiffness);
  ground["damping_ratio"] = num(h.ground_damping_ratio);
  ground["friction"] = num(h.ground_friction);
  ground["regularization_velocity"] = num(h.regularization_velocity);
  hn["ground"] = ground;
  hn["uncertainty"] = uncertainty_node(h.uncertainty);
  hn["resample"] = resample_name(h.resample);
  hn["resample_interval"] = num(h.resample_interval);
  YAML::Node hr;
  hr["height"] = num(h.reward.height);
  hr["flight_bonus"] = num(h.reward.flight_bonus);
  hr["standing_height"] = num(h.reward.standing_height);
  hr["bonus_margin"] = num(h.reward.bonus_margin);
  hr["impact"] = num(h.reward.impact);
  hr["force_threshold"] = num(h.reward.force_threshold);
  hr["smoothness"] = num(h.reward.smoothness);
  hn["reward"] = hr;
  hn["drop_height"] = num(h.drop_height);
  hn["initial_joint_noise"] = num(h.initial_joint_noise);
  root["hopper"] = hn;

  const WiperConfig& w = s.wiper;
  YAML::Node wn;
  wn["sim"] = sim_node(w.sim);
  YAML::Node table;
  table["effective_mass"] = num(w.table_effective_mass);
  table["damping_ratio"] = num(w.table_damping_ratio);
  table["regularization_velocity"] = num(w.regularization_velocity);
  wn["table"] = table;
  wn["uncertainty"] = uncertainty_node(w.uncertainty);
  YAML::Node circle;
  circle["center"] = nums({w.circle.center.x(), w.circle.center.y()});
  circle["radius"] = num(w.circle.radius);
  circle["angular_speed"] = num(w.circle.angular_speed);
  circle["desired_force"] = num(w.circle.desired_force);
  wn["circle"] = circle;
  YAML::Node wr;
  wr["distance"] = num(w.reward.distance);
  wr["velocity"] = num(w.reward.velocity);
  wr["orientation"] = num(w.reward.orientation);
  wr["contact_bonus"] = num(w.reward.contact_bonus);
  wr["force"] = num(w.reward.force);
  wr["bad_contact"] = num(w.reward.bad_contact);
  wn["reward"] = wr;
  wn["gravity_compensation"] = w.gravity_compensation;
  wn["initial_yaw"] = nums({w.initial_yaw.lo, w.initial_yaw.hi});
  wn["initial_elbow"] = nums({w.initial_elbow.lo, w.initial_elbow.hi});
  wn["initial_pitch"] = nums({w.initial_pitch.lo, w.initial_pitch.hi});
  root["wiper"] = wn;

  const PointMassConfig& p = s.point_mass;
  YAML::Node pn;
  pn["sim"] = sim_node(p.sim);
  pn["mass"] = num(p.mass);
  pn["force_limit"] = num(p.force_limit);
  pn["target"] = num(p.target);
  pn["travel_limit"] = num(p.travel_limit);
  root["point_mass"] = pn;

  return emit(root);
}

ExperimentSpec parse_experiment(const std::string& yaml) {
  const YAML::Node root_node = parse_yaml(yaml);
  std::string env = "hopper";
  if (root_node.IsMap() && present(root_node["env"])) {
    env = MapReader::convert<std::string>(root_node["env"], "env");
  }
  return parse_experiment(yaml, ExperimentSpec::defaults_for(env));
}

ExperimentSpec parse_experiment(const std::string& yaml, const ExperimentSpec& base) {
  const YAML::Node root_node = parse_yaml(yaml);
  MapReader root(root_node, "");

  ExperimentSpec s = base;
  root.get("env", s.env);
  root.get("name", s.name);
  std::string par(to_string(s.parametrization));
  root.get("parametrization", par);
  try {
    s.parametrization = parse_parametrization(par);
  } catch (const ConfigError& e) {
    throw ConfigError("parametrization", fmt::format("unknown parametrization '{}'", par));
  }
  root.get("seeds", s.seeds);
  root.get("output_dir", s.output_dir);
  root.get("threads", s.threads);
  root.get("convergence_fraction", s.convergence_fraction);
  root.get("final_window", s.final_window);

  {
    MapReader m(root.take("controller"), "controller");
    m.get("kp", s.controller.kp);
    m.get("kd_ratio", s.controller.kd_ratio);
    m.get("kp_min", s.controller.kp_min);
    m.get("kp_max", s.controller.kp_max);
    m.finish();
  }
  {
    MapReader m(root.take("tracking"), "tracking");
    m.get("enabled", s.tracking.enabled);
    m.get("k", s.tracking.k);
    m.finish();
  }
  {
    TrainerConfig& t = s.trainer;
    MapReader m(root.take("trainer"), "trainer");
    m.get("gamma", t.gamma);
    m.get("polyak", t.polyak);
    m.get("actor_lr", t.actor_lr);
    m.get("critic_lr", t.critic_lr);
    m.get("batch_size", t.batch_size);
    m.get("buffer_capacity", t.buffer_capacity);
    m.get("warmup_steps", t.warmup_steps);
    m.get("updates_per_step", t.updates_per_step);
    m.get("episodes", t.episodes);
    m.get("hidden", t.hidden);
    std::string noise = noise_name(t.noise);
    m.get("noise", noise);
    if (noise == "gaussian") {
      t.noise = NoiseKind::kGaussian;
    } else if (noise == "ornstein_uhlenbeck") {
      t.noise = NoiseKind::kOrnsteinUhlenbeck;
    } else {
      throw ConfigError("trainer.noise",
                        fmt::format("unknown noise '{}' (gaussian | ornstein_uhlenbeck)", noise));
    }
    m.get("noise_scale", t.noise_scale);
    m.get("noise_final", t.noise_final);
    m.get("noise_decay_episodes", t.noise_decay_episodes);
    m.get("ou_theta", t.ou_theta);
    m.get("eval_every", t.eval_every);
    m.get("eval_episodes", t.eval_episodes);
    m.get("reward_scale", t.reward_scale);
    m.get("init_scale", t.init_scale);
    m.get("preactivation_penalty", t.preactivation_penalty);
    m.finish();
  }
  {
    HopperConfig& h = s.hopper;
    MapReader m(root.take("hopper"), "hopper");
    read_sim(m, "sim", h.sim);
    {
      MapReader g(m.take("ground"), "hopper.ground");
      g.get("stiffness", h.ground_stiffness);
      g.get("damping_ratio", h.ground_damping_ratio);
      g.get("friction", h.ground_friction);
      g.get("regularization_velocity", h.regularization_velocity);
      g.finish();
    }
    read_uncertainty(m, h.uncertainty);
    std::string resample = resample_name(h.resample);
    m.get("resample", resample);
    if (resample == "on_liftoff") {
      h.resample = GroundResample::kOnLiftoff;
    } else if (resample == "fixed_interval") {
      h.resample = GroundResample::kFixedInterval;
    } else {
      throw ConfigError("hopper.resample",
                        fmt::format("unknown schedule '{}' (on_liftoff | fixed_interval)", resample));
    }
    m.get("resample_interval", h.resample_interval);
    {
      MapReader r(m.take("reward"), "hopper.reward");
      r.get("height", h.reward.height);
      r.get("flight_bonus", h.reward.flight_bonus);
      r.get("standing_height", h.reward.standing_height);
      r.get("bonus_margin", h.reward.bonus_margin);
      r.get("impact", h.reward.impact);
      r.get("force_threshold", h.reward.force_threshold);
      r.get("smoothness", h.reward.smoothness);
      r.finish();
    }
    m.get("drop_height", h.drop_height);
    m.get("initial_joint_noise", h.initial_joint_noise);
    m.finish();
  }
  {
    WiperConfig& w = s.wiper;
    MapReader m(root.take("wiper"), "wiper");
    read_sim(m, "sim", w.sim);
    {
      MapReader t(m.take("table"), "wiper.table");
      t.get("effective_mass", w.table_effective_mass);
      t.get("damping_ratio", w.table_damping_ratio);
      t.get("regularization_velocity", w.regularization_velocity);
      t.finish();
    }
    read_uncertainty(m, w.uncertainty);
    {
      MapReader c(m.take("circle"), "wiper.circle");
      YAML::Node center = c.take("center");
      if (present(center)) {
        const auto v = MapReader::convert<std::vector<double>>(center, "wiper.circle.center");
        if (v.size() != 2) throw ConfigError("wiper.circle.center", "expected [x, y]");
        w.circle.center = Eigen::Vector2d(v[0], v[1]);
      }
      c.get("radius", w.circle.radius);
      c.get("angular_speed", w.circle.angular_speed);
      c.get("desired_force", w.circle.desired_force);
      c.finish();
    }
    {
      MapReader r(m.take("reward"), "wiper.reward");
      r.get("distance", w.reward.distance);
      r.get("velocity", w.reward.velocity);
      r.get("orientation", w.reward.orientation);
      r.get("contact_bonus", w.reward.contact_bonus);
      r.get("force", w.reward.force);
      r.get("bad_contact", w.reward.bad_contact);
      r.finish();
    }
    m.get("gravity_compensation", w.gravity_compensation);
    read_plain_range(m, "initial_yaw", w.initial_yaw);
    read_plain_range(m, "initial_elbow", w.initial_elbow);
    read_plain_range(m, "initial_pitch", w.initial_pitch);
    m.finish();
  }
  {
    PointMassConfig& p = s.point_mass;
    MapReader m(root.take("point_mass"), "point_mass");
    read_sim(m, "sim", p.sim);
    m.get("mass", p.mass);
    m.get("force_limit", p.force_limit);
    m.get("target", p.target);
    m.get("travel_limit", p.travel_limit);
    m.finish();
  }
  root.finish();
  s.validate();
  return s;
}

ExperimentSpec load_experiment(const std::string& path) { return parse_experiment(read_text(path)); }

ExperimentSpec load_experiment(const std::string& path, const ExperimentSpec& base) {
  return parse_experiment(read_text(path), base);
}

void save_experiment(const ExperimentSpec& spec, const std::string& path) {
  write_text(dump_experiment(spec), path);
}

std::string dump_robot(const RobotModel& model) {
  YAML::Node root;
  root["name"] = model.name;
  root["base_fixed"] = model.base_fixed;
  root["base_position"] = vec3(model.base_position);
  root["gravity"] = vec3(model.gravity);
  YAML::Node limits(YAML::NodeType::Sequence);
  for (double t : model.torque_limits) limits.push_back(num(t));
  root["torque_limits"] = flow(limits);
  root["limit_stiffness"] = num(model.limit_stiffness);
  root["limit_damping"] = num(model.limit_damping);
  YAML::Node links(YAML::NodeType::Sequence);
  for (const auto& l : model.links) {
    YAML::Node n;
    n["name"] = l.name;
    n["kind"] = l.kind == JointKind::kRevolute ? "revolute" : "prismatic";
    n["axis"] = vec3(l.axis);
    n["direction"] = vec3(l.direction);
    n["length"] = num(l.length);
    n["mass"] = num(l.mass);
    n["com_offset"] = num(l.com_offset);
    n["inertia"] = num(l.inertia);
    n["lower"] = num(l.lower);
    n["upper"] = num(l.upper);
    n["damping"] = num(l.damping);
    n["armature"] = num(l.armature);
    links.push_back(n);
  }
  root["links"] = links;
  return emit(root);
}

RobotModel parse_robot(const std::string& yaml) {
  const YAML::Node root_node = parse_yaml(yaml);
  MapReader root(root_node, "");
  RobotModel m;
  root.get("name", m.name);
  root.get("base_fixed", m.base_fixed);
  root.get_vec3("base_position", m.base_position);
  root.get_vec3("gravity", m.gravity);
  root.get("torque_limits", m.torque_limits);
  root.get("limit_stiffness", m.limit_stiffness);
  root.get("limit_damping", m.limit_damping);
  YAML::Node links = root.take("links");
  if (!present(links) || !links.IsSequence()) throw ConfigError("links", "expected a list of links");
  for (std::size_t i = 0; i < links.size(); ++i) {
    MapReader r(links[i], fmt::format("links[{}]", i));
    LinkSpec l;
    r.get("name", l.name);
    std::string kind = "revolute";
    r.get("kind", kind);
    if (kind == "revolute") {
      l.kind = JointKind::kRevolute;
    } else if (kind == "prismatic") {
      l.kind = JointKind::kPrismatic;
    } else {
      throw ConfigError(r.field("kind"), fmt::format("unknown joint kind '{}'", kind));
    }
    r.get_vec3("axis", l.axis);
    r.get_vec3("direction", l.direction);
    r.get("length", l.length);
    r.get("mass", l.mass);
    r.get("com_offset", l.com_offset);
    r.get("inertia", l.inertia);
    r.get("lower", l.lower);
    r.get("upper", l.upper);
    r.get("damping", l.damping);
    r.get("armature", l.armature);
    r.finish();
    m.links.push_back(l);
  }
  root.finish();
  m.validate();
  return m;
}

RobotModel load_robot(const std::string& path) { return parse_robot(read_text(path)); }

void save_robot(const RobotModel& model, const std::string& path) {
  write_text(dump_robot(model), path);
}

}  // namespace vic
