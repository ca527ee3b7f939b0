#include "latsim/scenario_yaml.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

namespace latsim {

namespace {

std::string subkey(const std::string& ctx, const std::string& key) {
  return ctx.empty() ? key : ctx + "." + key;
}

void require_map(const YAML::Node& node, const std::string& ctx) {
  if (!node.IsMap()) throw ScenarioError(ctx + ": expected a mapping");
}

// Strict schema: anything we would silently ignore is a user error.
void check_keys(const YAML::Node& node, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    bool known = false;
    for (const char* a : allowed)
      if (key == a) {
        known = true;
        break;
      }
    if (!known) {
      std::string msg = ctx + ": unknown key '" + key + "' (allowed:";
      for (const char* a : allowed) msg += std::string(" ") + a;
      throw ScenarioError(msg + ")");
    }
  }
}

template <typename T>
T get_or(const YAML::Node& node, const char* key, T fallback, const std::string& ctx) {
  const YAML::Node child = node[key];
  if (!child) return fallback;
  try {
    return child.as<T>();
  } catch (const YAML::Exception& ex) {
    throw ScenarioError(subkey(ctx, key) + ": " + ex.what());
  }
}

const char* segment_type_name(ProfileSegment::Type t) {
  switch (t) {
    case ProfileSegment::Type::kConstant: return "constant";
    case ProfileSegment::Type::kRamp: return "ramp";
    case ProfileSegment::Type::kSinusoid: return "sinusoid";
  }
  return "constant";
}

ProfileSegment parse_segment(const YAML::Node& node, const std::string& ctx) {
  require_map(node, ctx);
  check_keys(node, {"type", "duration", "value", "amplitude", "period", "phase"}, ctx);
  ProfileSegment s;
  const auto type = get_or<std::string>(node, "type", "constant", ctx);
  if (type == "constant")
    s.type = ProfileSegment::Type::kConstant;
  else if (type == "ramp")
    s.type = ProfileSegment::Type::kRamp;
  else if (type == "sinusoid")
    s.type = ProfileSegment::Type::kSinusoid;
  else
    throw ScenarioError(subkey(ctx, "type") + ": unknown segment type '" + type +
                        "' (expected constant, ramp, or sinusoid)");
  s.duration = get_or(node, "duration", 0.0, ctx);
  s.value = get_or(node, "value", 0.0, ctx);
  s.amplitude = get_or(node, "amplitude", 0.0, ctx);
  s.period = get_or(node, "period", 0.0, ctx);
  s.phase = get_or(node, "phase", 0.0, ctx);
  return s;
}

PiecewiseProfile parse_profile(const YAML::Node& node, const std::string& ctx) {
  if (!node) return PiecewiseProfile{};
  if (!node.IsSequence()) throw ScenarioError(ctx + ": expected a sequence of segments");
  std::vector<ProfileSegment> segments;
  for (std::size_t i = 0; i < node.size(); ++i)
    segments.push_back(parse_segment(node[i], ctx + "[" + std::to_string(i) + "]"));
  try {
    return PiecewiseProfile(std::move(segments));
  } catch (const std::invalid_argument& ex) {
    throw ScenarioError(ctx + ": " + ex.what());
  }
}

void parse_triple(const YAML::Node& node, const char* key, double& v1, double& v2, double& v3,
                  const std::string& ctx) {
  const YAML::Node child = node[key];
  if (!child) return;
  if (!child.IsSequence() || child.size() != 3)
    throw ScenarioError(subkey(ctx, key) + ": expected a sequence of three gains");
  try {
    v1 = child[0].as<double>();
    v2 = child[1].as<double>();
    v3 = child[2].as<double>();
  } catch (const YAML::Exception& ex) {
    throw ScenarioError(subkey(ctx, key) + ": " + ex.what());
  }
}

VehicleParams parse_vehicle(const YAML::Node& node, const std::string& ctx) {
  VehicleParams p;
  if (!node) return p;
  require_map(node, ctx);
  check_keys(node, {"m", "iz", "lf", "lr", "cf", "cr", "ctilde_f", "ctilde_r", "cx", "mu", "fz",
                    "g"},
             ctx);
  p.m = get_or(node, "m", p.m, ctx);
  p.iz = get_or(node, "iz", p.iz, ctx);
  p.lf = get_or(node, "lf", p.lf, ctx);
  p.lr = get_or(node, "lr", p.lr, ctx);
  p.cf = get_or(node, "cf", p.cf, ctx);
  p.cr = get_or(node, "cr", p.cr, ctx);
  p.ctilde_f = get_or(node, "ctilde_f", p.ctilde_f, ctx);
  p.ctilde_r = get_or(node, "ctilde_r", p.ctilde_r, ctx);
  p.cx = get_or(node, "cx", p.cx, ctx);
  p.mu = get_or(node, "mu", p.mu, ctx);
  p.fz = get_or(node, "fz", p.fz, ctx);
  p.g = get_or(node, "g", p.g, ctx);
  return p;
}

UncertaintySpec parse_uncertainty(const YAML::Node& node, const std::string& ctx) {
  UncertaintySpec u;
  if (!node) return u;
  require_map(node, ctx);
  check_keys(node, {"m_scale", "iz_scale", "ctilde_f_scale", "ctilde_r_scale", "mu_scale"}, ctx);
  u.m_scale = get_or(node, "m_scale", u.m_scale, ctx);
  u.iz_scale = get_or(node, "iz_scale", u.iz_scale, ctx);
  u.ctilde_f_scale = get_or(node, "ctilde_f_scale", u.ctilde_f_scale, ctx);
  u.ctilde_r_scale = get_or(node, "ctilde_r_scale", u.ctilde_r_scale, ctx);
  u.mu_scale = get_or(node, "mu_scale", u.mu_scale, ctx);
  return u;
}

ObserverState parse_observer_state(const YAML::Node& node, const std::string& ctx) {
  ObserverState o;
  if (!node) return o;
  require_map(node, ctx);
  check_keys(node, {"z1_hat", "z2_hat", "d_lat_hat", "z3_hat", "z4_hat", "d_yaw_hat"}, ctx);
  o.z1_hat = get_or(node, "z1_hat", 0.0, ctx);
  o.z2_hat = get_or(node, "z2_hat", 0.0, ctx);
  o.d_lat_hat = get_or(node, "d_lat_hat", 0.0, ctx);
  o.z3_hat = get_or(node, "z3_hat", 0.0, ctx);
  o.z4_hat = get_or(node, "z4_hat", 0.0, ctx);
  o.d_yaw_hat = get_or(node, "d_yaw_hat", 0.0, ctx);
  return o;
}

InitialConditions parse_initial(const YAML::Node& node, const std::string& ctx) {
  InitialConditions ic;
  if (!node) return ic;
  require_map(node, ctx);
  check_keys(node, {"z1", "z3", "y_dot", "z4", "observer"}, ctx);
  ic.z1 = get_or(node, "z1", 0.0, ctx);
  ic.z3 = get_or(node, "z3", 0.0, ctx);
  ic.y_dot = get_or(node, "y_dot", 0.0, ctx);
  ic.z4 = get_or(node, "z4", 0.0, ctx);
  ic.observer = parse_observer_state(node["observer"], subkey(ctx, "observer"));
  return ic;
}

ControllerParams parse_controller(const YAML::Node& node, const std::string& ctx) {
  ControllerParams cp;
  if (!node) return cp;
  require_map(node, ctx);
  check_keys(node, {"eta1", "eta2", "tau", "k3", "k4", "delta_max"}, ctx);
  cp.eta1 = get_or(node, "eta1", cp.eta1, ctx);
  cp.eta2 = get_or(node, "eta2", cp.eta2, ctx);
  cp.tau = get_or(node, "tau", cp.tau, ctx);
  cp.k3 = get_or(node, "k3", cp.k3, ctx);
  cp.k4 = get_or(node, "k4", cp.k4, ctx);
  cp.delta_max = get_or(node, "delta_max", cp.delta_max, ctx);
  return cp;
}

ObserverGains parse_observer_gains(const YAML::Node& node, const std::string& ctx) {
  ObserverGains og;
  if (!node) return og;
  require_map(node, ctx);
  check_keys(node, {"h", "g", "epsilon"}, ctx);
  parse_triple(node, "h", og.h1, og.h2, og.h3, ctx);
  parse_triple(node, "g", og.g1, og.g2, og.g3, ctx);
  og.epsilon = get_or(node, "epsilon", og.epsilon, ctx);
  return og;
}

SimConfig parse_sim(const YAML::Node& node, const std::string& ctx) {
  SimConfig sim;
  if (!node) return sim;
  require_map(node, ctx);
  check_keys(node, {"dt", "horizon", "log_stride", "control_rate_hz", "measurement_hold"}, ctx);
  sim.dt = get_or(node, "dt", sim.dt, ctx);
  sim.horizon = get_or(node, "horizon", sim.horizon, ctx);
  sim.log_stride = get_or(node, "log_stride", sim.log_stride, ctx);
  sim.control_rate_hz = get_or(node, "control_rate_hz", sim.control_rate_hz, ctx);
  sim.measurement_hold = get_or(node, "measurement_hold", sim.measurement_hold, ctx);
  return sim;
}

NoiseConfig parse_noise(const YAML::Node& node, const std::string& ctx) {
  NoiseConfig n;
  if (!node) return n;
  require_map(node, ctx);
  check_keys(node, {"enabled", "std_z1", "std_z3", "seed"}, ctx);
  n.enabled = get_or(node, "enabled", n.enabled, ctx);
  n.std_z1 = get_or(node, "std_z1", n.std_z1, ctx);
  n.std_z3 = get_or(node, "std_z3", n.std_z3, ctx);
  n.seed = get_or(node, "seed", n.seed, ctx);
  return n;
}

void emit_segment(YAML::Emitter& out, const ProfileSegment& s) {
  out << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "type" << YAML::Value << segment_type_name(s.type);
  out << YAML::Key << "duration" << YAML::Value << s.duration;
  if (s.type == ProfileSegment::Type::kSinusoid) {
    out << YAML::Key << "amplitude" << YAML::Value << s.amplitude;
    out << YAML::Key << "period" << YAML::Value << s.period;
    out << YAML::Key << "phase" << YAML::Value << s.phase;
  } else {
    out << YAML::Key << "value" << YAML::Value << s.value;
  }
  out << YAML::EndMap;
}

void emit_profile(YAML::Emitter& out, const char* key, const PiecewiseProfile& profile) {
  out << YAML::Key << key << YAML::Value << YAML::BeginSeq;
  for (const auto& s : profile.segments()) emit_segment(out, s);
  out << YAML::EndSeq;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& context) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& ex) {
    throw ScenarioError(context + ": " + ex.what());
  }
  require_map(root, context);
  check_keys(root,
             {"name", "mode", "nu_x", "beta_x", "comfort_accel_max", "vehicle", "uncertainty",
              "curvature", "banking", "initial", "controller", "observer", "sim", "noise"},
             context);

  Scenario sc;
  sc.name = get_or<std::string>(root, "name", sc.name, context);
  const auto mode = get_or<std::string>(root, "mode", "ehgo", context);
  try {
    sc.mode = control_mode_from_string(mode);
  } catch (const std::invalid_argument& ex) {
    throw ScenarioError(subkey(context, "mode") + ": " + ex.what());
  }
  sc.nu_x = get_or(root, "nu_x", sc.nu_x, context);
  sc.beta_x = get_or(root, "beta_x", sc.beta_x, context);
  sc.comfort_accel_max = get_or(root, "comfort_accel_max", sc.comfort_accel_max, context);
  sc.vehicle = parse_vehicle(root["vehicle"], subkey(context, "vehicle"));
  sc.uncertainty = parse_uncertainty(root["uncertainty"], subkey(context, "uncertainty"));
  sc.curvature = parse_profile(root["curvature"], subkey(context, "curvature"));
  sc.banking = parse_profile(root["banking"], subkey(context, "banking"));
  sc.initial = parse_initial(root["initial"], subkey(context, "initial"));
  sc.controller = parse_controller(root["controller"], subkey(context, "controller"));
  sc.observer = parse_observer_gains(root["observer"], subkey(context, "observer"));
  sc.sim = parse_sim(root["sim"], subkey(context, "sim"));
  sc.noise = parse_noise(root["noise"], subkey(context, "noise"));
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario sc = parse_scenario(buf.str(), path);
  sc.validate();
  return sc;
}

std::string scenario_to_yaml(const Scenario& sc) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << sc.name;
  out << YAML::Key << "mode" << YAML::Value << to_string(sc.mode);
  out << YAML::Key << "nu_x" << YAML::Value << sc.nu_x;
  out << YAML::Key << "beta_x" << YAML::Value << sc.beta_x;
  out << YAML::Key << "comfort_accel_max" << YAML::Value << sc.comfort_accel_max;

  out << YAML::Key << "vehicle" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "m" << YAML::Value << sc.vehicle.m;
  out << YAML::Key << "iz" << YAML::Value << sc.vehicle.iz;
  out << YAML::Key << "lf" << YAML::Value << sc.vehicle.lf;
  out << YAML::Key << "lr" << YAML::Value << sc.vehicle.lr;
  out << YAML::Key << "cf" << YAML::Value << sc.vehicle.cf;
  out << YAML::Key << "cr" << YAML::Value << sc.vehicle.cr;
  out << YAML::Key << "ctilde_f" << YAML::Value << sc.vehicle.ctilde_f;
  out << YAML::Key << "ctilde_r" << YAML::Value << sc.vehicle.ctilde_r;
  out << YAML::Key << "cx" << YAML::Value << sc.vehicle.cx;
  out << YAML::Key << "mu" << YAML::Value << sc.vehicle.mu;
  out << YAML::Key << "fz" << YAML::Value << sc.vehicle.fz;
  out << YAML::Key << "g" << YAML::Value << sc.vehicle.g;
  out << YAML::EndMap;

  out << YAML::Key << "uncertainty" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "m_scale" << YAML::Value << sc.uncertainty.m_scale;
  out << YAML::Key << "iz_scale" << YAML::Value << sc.uncertainty.iz_scale;
  out << YAML::Key << "ctilde_f_scale" << YAML::Value << sc.uncertainty.ctilde_f_scale;
  out << YAML::Key << "ctilde_r_scale" << YAML::Value << sc.uncertainty.ctilde_r_scale;
  out << YAML::Key << "mu_scale" << YAML::Value << sc.uncertainty.mu_scale;
  out << YAML::EndMap;

  emit_profile(out, "curvature", sc.curvature);
  emit_profile(out, "banking", sc.banking);

  out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "z1" << YAML::Value << sc.initial.z1;
  out << YAML::Key << "z3" << YAML::Value << sc.initial.z3;
  out << YAML::Key << "y_dot" << YAML::Value << sc.initial.y_dot;
  out << YAML::Key << "z4" << YAML::Value << sc.initial.z4;
  out << YAML::Key << "observer" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "z1_hat" << YAML::Value << sc.initial.observer.z1_hat;
  out << YAML::Key << "z2_hat" << YAML::Value << sc.initial.observer.z2_hat;
  out << YAML::Key << "d_lat_hat" << YAML::Value << sc.initial.observer.d_lat_hat;
  out << YAML::Key << "z3_hat" << YAML::Value << sc.initial.observer.z3_hat;
  out << YAML::Key << "z4_hat" << YAML::Value << sc.initial.observer.z4_hat;
  out << YAML::Key << "d_yaw_hat" << YAML::Value << sc.initial.observer.d_yaw_hat;
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "controller" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "eta1" << YAML::Value << sc.controller.eta1;
  out << YAML::Key << "eta2" << YAML::Value << sc.controller.eta2;
  out << YAML::Key << "tau" << YAML::Value << sc.controller.tau;
  out << YAML::Key << "k3" << YAML::Value << sc.controller.k3;
  out << YAML::Key << "k4" << YAML::Value << sc.controller.k4;
  out << YAML::Key << "delta_max" << YAML::Value << sc.controller.delta_max;
  out << YAML::EndMap;

  out << YAML::Key << "observer" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "h" << YAML::Value << YAML::Flow << YAML::BeginSeq << sc.observer.h1
      << sc.observer.h2 << sc.observer.h3 << YAML::EndSeq;
  out << YAML::Key << "g" << YAML::Value << YAML::Flow << YAML::BeginSeq << sc.observer.g1
      << sc.observer.g2 << sc.observer.g3 << YAML::EndSeq;
  out << YAML::Key << "epsilon" << YAML::Value << sc.observer.epsilon;
  out << YAML::EndMap;

  out << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dt" << YAML::Value << sc.sim.dt;
  out << YAML::Key << "horizon" << YAML::Value << sc.sim.horizon;
  out << YAML::Key << "log_stride" << YAML::Value << sc.sim.log_stride;
  out << YAML::Key << "control_rate_hz" << YAML::Value << sc.sim.control_rate_hz;
  out << YAML::Key << "measurement_hold" << YAML::Value << sc.sim.measurement_hold;
  out << YAML::EndMap;

  out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << sc.noise.enabled;
  out << YAML::Key << "std_z1" << YAML::Value << sc.noise.std_z1;
  out << YAML::Key << "std_z3" << YAML::Value << sc.noise.std_z3;
  out << YAML::Key << "seed" << YAML::Value << sc.noise.seed;
  out << YAML::EndMap;

  out << YAML::EndMap;
  if (!out.good()) throw ScenarioError("scenario serialization failed: " + out.GetLastError());
  return std::string(out.c_str()) + "\n";
}

void save_scenario(const Scenario& sc, const std::string& path) {
  std::ofstream outfile(path);
  if (!outfile) throw ScenarioError(path + ": cannot open file for writing");
  outfile << scenario_to_yaml(sc);
  if (!outfile.good()) throw ScenarioError(path + ": write failed");
}

}  // namespace latsim
