#include "avgps/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace avgps {

using nlohmann::json;

namespace {

json point_to_json(const GeoPoint& p) { return json::array({p.lat_deg, p.lon_deg}); }

GeoPoint point_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError(where + ": expected [lat, lon]");
  try {
    return GeoPoint(j[0].get<double>(), j[1].get<double>());
  } catch (const std::out_of_range& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

void require_known_keys(const json& j, const std::set<std::string>& known,
                        const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Scenario default_scenario() {
  Scenario sc;
  sc.mission = Mission::circular(GeoPoint(32.2319, -110.9501), 20.0, 7);
  sc.duration_s = 300.0;
  return sc;
}

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["seed"] = sc.seed;
  j["duration_s"] = sc.duration_s;
  j["dt_control"] = sc.dt_control;
  j["gps_rate_hz"] = sc.gps_rate_hz;
  j["feature_rate_hz"] = sc.feature_rate_hz;
  j["v_target"] = sc.v_target;
  j["convention"] =
      sc.convention == SignConvention::StandardStable ? "standard_stable" : "paper_literal";
  j["hold_on_failsafe"] = sc.hold_on_failsafe;

  j["vehicle"] = {{"mass_kg", sc.vehicle.mass_kg},
                  {"yaw_inertia", sc.vehicle.yaw_inertia},
                  {"lf_m", sc.vehicle.lf_m},
                  {"lr_m", sc.vehicle.lr_m},
                  {"cornering_front", sc.vehicle.cornering_front},
                  {"cornering_rear", sc.vehicle.cornering_rear},
                  {"length_m", sc.vehicle.length_m},
                  {"width_m", sc.vehicle.width_m},
                  {"nominal_speed", sc.vehicle.nominal_speed}};

  json wps = json::array();
  for (const GeoPoint& p : sc.mission.waypoints) wps.push_back(point_to_json(p));
  j["mission"] = {{"home", point_to_json(sc.mission.home)},
                  {"waypoints", wps},
                  {"acceptance_radius_m", sc.mission.acceptance_radius_m},
                  {"loop", sc.mission.loop}};

  j["steering"] = {{"outer", {sc.steering.outer.kp, sc.steering.outer.ki, sc.steering.outer.kd}},
                   {"inner", {sc.steering.inner.kp, sc.steering.inner.ki, sc.steering.inner.kd}},
                   {"heading_corr_max", sc.steering.heading_corr_max},
                   {"delta_max", sc.steering.delta_max}};
  j["speed"] = {{"gains", {sc.speed.gains.kp, sc.speed.gains.ki, sc.speed.gains.kd}},
                {"accel_min", sc.speed.accel_min},
                {"accel_max", sc.speed.accel_max}};

  j["ekf"] = {{"q_pos", sc.ekf.q_pos},
              {"q_vy", sc.ekf.q_vy},
              {"q_r", sc.ekf.q_r},
              {"r_gyro", sc.ekf.r_gyro},
              {"gps_base_accuracy", sc.ekf.gps_base_accuracy},
              {"failsafe_threshold", sc.ekf.failsafe_threshold},
              {"failsafe_window_s", sc.ekf.failsafe_window_s},
              {"glitch_reset_nis", sc.ekf.glitch_reset_nis},
              {"glitch_reset_count", sc.ekf.glitch_reset_count}};

  j["gps_noise"] = {{"base_accuracy_m", sc.gps_noise.base_accuracy_m},
                    {"hdop_median", sc.gps_noise.hdop_median},
                    {"hdop_sigma", sc.gps_noise.hdop_sigma},
                    {"hdop_floor", sc.gps_noise.hdop_floor},
                    {"vdop_median", sc.gps_noise.vdop_median},
                    {"vdop_sigma", sc.gps_noise.vdop_sigma},
                    {"vdop_floor", sc.gps_noise.vdop_floor},
                    {"sat_min", sc.gps_noise.sat_min},
                    {"sat_max", sc.gps_noise.sat_max},
                    {"lock_dropout_prob", sc.gps_noise.lock_dropout_prob}};

  j["sensors"] = {{"gyro_std", sc.sensors.gyro_std},
                  {"compass_std", sc.sensors.compass_std},
                  {"odom_std", sc.sensors.odom_std}};

  if (sc.spoof) {
    json s;
    s["t0"] = sc.spoof->t0;
    s["duration"] = sc.spoof->duration;
    if (sc.spoof->capture_delay) s["capture_delay"] = *sc.spoof->capture_delay;
    s["masking_noise_deg"] = sc.spoof->masking_noise_deg;
    s["profile"] = {{"jam_hdop_onset", sc.spoof->profile.jam_hdop_onset},
                    {"jam_hdop_inflation", sc.spoof->profile.jam_hdop_inflation},
                    {"captured_hdop_inflation", sc.spoof->profile.captured_hdop_inflation},
                    {"captured_lock", sc.spoof->profile.captured_lock}};
    if (const auto* f = std::get_if<FixedTarget>(&sc.spoof->mode)) {
      s["mode"] = "fixed_target";
      s["target"] = point_to_json(f->target);
    } else if (const auto* b = std::get_if<BiasAngle>(&sc.spoof->mode)) {
      s["mode"] = "bias_angle";
      s["theta"] = b->theta;
    } else if (const auto* g = std::get_if<GaussianOffset>(&sc.spoof->mode)) {
      s["mode"] = "gaussian_offset";
      s["mu_lat_deg"] = g->mu_lat_deg;
      s["mu_lon_deg"] = g->mu_lon_deg;
      s["sigma_deg"] = g->sigma_deg;
    }
    j["spoof"] = s;
  }
  return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  Scenario sc = default_scenario();

  require_known_keys(j, {"seed", "duration_s", "dt_control", "gps_rate_hz", "feature_rate_hz",
                         "v_target", "convention", "hold_on_failsafe", "vehicle", "mission",
                         "steering", "speed", "ekf", "gps_noise", "sensors", "spoof"},
                     "config");

  maybe(j, "seed", sc.seed);
  maybe(j, "duration_s", sc.duration_s);
  maybe(j, "dt_control", sc.dt_control);
  maybe(j, "gps_rate_hz", sc.gps_rate_hz);
  maybe(j, "feature_rate_hz", sc.feature_rate_hz);
  maybe(j, "v_target", sc.v_target);
  maybe(j, "hold_on_failsafe", sc.hold_on_failsafe);
  if (j.contains("convention")) {
    std::string c = j.at("convention").get<std::string>();
    if (c == "standard_stable") {
      sc.convention = SignConvention::StandardStable;
    } else if (c == "paper_literal") {
      sc.convention = SignConvention::PaperLiteral;
    } else {
      throw ConfigError("convention: expected 'standard_stable' or 'paper_literal'");
    }
  }

  if (j.contains("vehicle")) {
    const json& v = j.at("vehicle");
    require_known_keys(v, {"mass_kg", "yaw_inertia", "lf_m", "lr_m", "cornering_front",
                           "cornering_rear", "length_m", "width_m", "nominal_speed"},
                       "vehicle");
    maybe(v, "mass_kg", sc.vehicle.mass_kg);
    maybe(v, "yaw_inertia", sc.vehicle.yaw_inertia);
    maybe(v, "lf_m", sc.vehicle.lf_m);
    maybe(v, "lr_m", sc.vehicle.lr_m);
    maybe(v, "cornering_front", sc.vehicle.cornering_front);
    maybe(v, "cornering_rear", sc.vehicle.cornering_rear);
    maybe(v, "length_m", sc.vehicle.length_m);
    maybe(v, "width_m", sc.vehicle.width_m);
    maybe(v, "nominal_speed", sc.vehicle.nominal_speed);
  }

  if (j.contains("mission")) {
    const json& m = j.at("mission");
    require_known_keys(m, {"home", "waypoints", "acceptance_radius_m", "loop"}, "mission");
    sc.mission = Mission{};
    sc.mission.home = point_from_json(m.at("home"), "mission.home");
    for (const auto& w : m.at("waypoints"))
      sc.mission.waypoints.push_back(point_from_json(w, "mission.waypoints"));
    maybe(m, "acceptance_radius_m", sc.mission.acceptance_radius_m);
    maybe(m, "loop", sc.mission.loop);
  }

  if (j.contains("steering")) {
    const json& s = j.at("steering");
    require_known_keys(s, {"outer", "inner", "heading_corr_max", "delta_max"}, "steering");
    auto gains = [&](const char* key, PidGains& g) {
      if (!s.contains(key)) return;
      const json& a = s.at(key);
      if (!a.is_array() || a.size() != 3) throw ConfigError(std::string("steering.") + key +
                                                            ": expected [kp, ki, kd]");
      g.kp = a[0].get<double>();
      g.ki = a[1].get<double>();
      g.kd = a[2].get<double>();
    };
    gains("outer", sc.steering.outer);
    gains("inner", sc.steering.inner);
    maybe(s, "heading_corr_max", sc.steering.heading_corr_max);
    maybe(s, "delta_max", sc.steering.delta_max);
  }

  if (j.contains("speed")) {
    const json& s = j.at("speed");
    require_known_keys(s, {"gains", "accel_min", "accel_max"}, "speed");
    if (s.contains("gains")) {
      const json& a = s.at("gains");
      if (!a.is_array() || a.size() != 3) throw ConfigError("speed.gains: expected [kp, ki, kd]");
      sc.speed.gains = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
    }
    maybe(s, "accel_min", sc.speed.accel_min);
    maybe(s, "accel_max", sc.speed.accel_max);
  }

  if (j.contains("ekf")) {
    const json& e = j.at("ekf");
    require_known_keys(e, {"q_pos", "q_vy", "q_r", "r_gyro", "gps_base_accuracy",
                           "failsafe_threshold", "failsafe_window_s", "glitch_reset_nis",
                           "glitch_reset_count"},
                       "ekf");
    maybe(e, "q_pos", sc.ekf.q_pos);
    maybe(e, "q_vy", sc.ekf.q_vy);
    maybe(e, "q_r", sc.ekf.q_r);
    maybe(e, "r_gyro", sc.ekf.r_gyro);
    maybe(e, "gps_base_accuracy", sc.ekf.gps_base_accuracy);
    maybe(e, "failsafe_threshold", sc.ekf.failsafe_threshold);
    maybe(e, "failsafe_window_s", sc.ekf.failsafe_window_s);
    maybe(e, "glitch_reset_nis", sc.ekf.glitch_reset_nis);
    maybe(e, "glitch_reset_count", sc.ekf.glitch_reset_count);
  }

  if (j.contains("gps_noise")) {
    const json& g = j.at("gps_noise");
    require_known_keys(g, {"base_accuracy_m", "hdop_median", "hdop_sigma", "hdop_floor",
                           "vdop_median", "vdop_sigma", "vdop_floor", "sat_min", "sat_max",
                           "lock_dropout_prob"},
                       "gps_noise");
    maybe(g, "base_accuracy_m", sc.gps_noise.base_accuracy_m);
    maybe(g, "hdop_median", sc.gps_noise.hdop_median);
    maybe(g, "hdop_sigma", sc.gps_noise.hdop_sigma);
    maybe(g, "hdop_floor", sc.gps_noise.hdop_floor);
    maybe(g, "vdop_median", sc.gps_noise.vdop_median);
    maybe(g, "vdop_sigma", sc.gps_noise.vdop_sigma);
    maybe(g, "vdop_floor", sc.gps_noise.vdop_floor);
    maybe(g, "sat_min", sc.gps_noise.sat_min);
    maybe(g, "sat_max", sc.gps_noise.sat_max);
    maybe(g, "lock_dropout_prob", sc.gps_noise.lock_dropout_prob);
  }

  if (j.contains("sensors")) {
    const json& s = j.at("sensors");
    require_known_keys(s, {"gyro_std", "compass_std", "odom_std"}, "sensors");
    maybe(s, "gyro_std", sc.sensors.gyro_std);
    maybe(s, "compass_std", sc.sensors.compass_std);
    maybe(s, "odom_std", sc.sensors.odom_std);
  }

  if (j.contains("spoof")) {
    const json& s = j.at("spoof");
    require_known_keys(s, {"mode", "t0", "duration", "capture_delay", "masking_noise_deg",
                           "profile", "target", "theta", "mu_lat_deg", "mu_lon_deg", "sigma_deg"},
                       "spoof");
    SpoofConfig cfg;
    maybe(s, "t0", cfg.t0);
    maybe(s, "duration", cfg.duration);
    if (s.contains("capture_delay")) cfg.capture_delay = s.at("capture_delay").get<double>();
    maybe(s, "masking_noise_deg", cfg.masking_noise_deg);
    if (s.contains("profile")) {
      const json& p = s.at("profile");
      require_known_keys(p, {"jam_hdop_onset", "jam_hdop_inflation", "captured_hdop_inflation",
                             "captured_lock"},
                         "spoof.profile");
      maybe(p, "jam_hdop_onset", cfg.profile.jam_hdop_onset);
      maybe(p, "jam_hdop_inflation", cfg.profile.jam_hdop_inflation);
      maybe(p, "captured_hdop_inflation", cfg.profile.captured_hdop_inflation);
      maybe(p, "captured_lock", cfg.profile.captured_lock);
    }
    std::string mode = s.contains("mode") ? s.at("mode").get<std::string>() : "gaussian_offset";
    if (mode == "fixed_target") {
      if (!s.contains("target")) throw ConfigError("spoof: fixed_target needs 'target'");
      cfg.mode = FixedTarget{point_from_json(s.at("target"), "spoof.target")};
    } else if (mode == "bias_angle") {
      BiasAngle b;
      maybe(s, "theta", b.theta);
      cfg.mode = b;
    } else if (mode == "gaussian_offset") {
      GaussianOffset g;
      maybe(s, "mu_lat_deg", g.mu_lat_deg);
      maybe(s, "mu_lon_deg", g.mu_lon_deg);
      maybe(s, "sigma_deg", g.sigma_deg);
      cfg.mode = g;
    } else {
      throw ConfigError("spoof.mode: expected fixed_target, bias_angle, or gaussian_offset");
    }
    sc.spoof = cfg;
  }

  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return scenario_from_json(ss.str());
}

}  // namespace avgps
