#include "avgps/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace avgps {

namespace {

const std::array<const char*, 16> kColumns = {
    "timestamp", "lat", "lon", "hdop", "vdop", "sat_lock", "sat_count", "e",
    "delta",     "x",   "y",   "psi",  "vx",   "vy",       "r",         "label"};

void append_double(std::string& out, double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, p);
}

double parse_double(const std::string& field, const char* column, std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || p != field.data() + field.size())
    throw SchemaMismatch("bad numeric value for column '" + std::string(column) + "' at line " +
                         std::to_string(line));
  return v;
}

int parse_int(const std::string& field, const char* column, std::size_t line) {
  int v = 0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || p != field.data() + field.size())
    throw SchemaMismatch("bad integer value for column '" + std::string(column) + "' at line " +
                         std::to_string(line));
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<FeatureRow> to_dataset(const std::vector<SimLog>& logs) {
  std::vector<FeatureRow> rows;
  for (const SimLog& log : logs) rows.insert(rows.end(), log.rows.begin(), log.rows.end());
  return rows;
}

std::string to_csv(const std::vector<FeatureRow>& rows) {
  std::string out;
  out.reserve(64 + rows.size() * 160);
  out += kCsvUnitsComment;
  out += '\n';
  out += kCsvHeader;
  out += '\n';
  for (const FeatureRow& r : rows) {
    append_double(out, r.timestamp);
    out += ',';
    append_double(out, r.lat);
    out += ',';
    append_double(out, r.lon);
    out += ',';
    append_double(out, r.hdop);
    out += ',';
    append_double(out, r.vdop);
    out += ',';
    out += std::to_string(r.sat_lock);
    out += ',';
    out += std::to_string(r.sat_count);
    out += ',';
    append_double(out, r.e);
    out += ',';
    append_double(out, r.delta);
    out += ',';
    append_double(out, r.x);
    out += ',';
    append_double(out, r.y);
    out += ',';
    append_double(out, r.psi);
    out += ',';
    append_double(out, r.vx);
    out += ',';
    append_double(out, r.vy);
    out += ',';
    append_double(out, r.r);
    out += ',';
    out += std::to_string(r.label);
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<FeatureRow>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  f << to_csv(rows);
}

std::vector<FeatureRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  // Header: first non-comment line, must match the schema exactly.
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> names = split_csv_line(line);
    if (names.size() != kColumns.size()) {
      if (names.size() < kColumns.size())
        throw SchemaMismatch("missing column '" + std::string(kColumns[names.size()]) + "'");
      throw SchemaMismatch("unknown extra column '" + names[kColumns.size()] + "'");
    }
    for (std::size_t i = 0; i < kColumns.size(); ++i)
      if (names[i] != kColumns[i])
        throw SchemaMismatch("unknown column '" + names[i] + "' where '" +
                             std::string(kColumns[i]) + "' expected");
    have_header = true;
    break;
  }
  if (!have_header) throw SchemaMismatch("missing header line");

  std::vector<FeatureRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != kColumns.size())
      throw SchemaMismatch("row with " + std::to_string(f.size()) + " fields at line " +
                           std::to_string(line_no));
    FeatureRow r;
    r.timestamp = parse_double(f[0], kColumns[0], line_no);
    r.lat = parse_double(f[1], kColumns[1], line_no);
    r.lon = parse_double(f[2], kColumns[2], line_no);
    r.hdop = parse_double(f[3], kColumns[3], line_no);
    r.vdop = parse_double(f[4], kColumns[4], line_no);
    r.sat_lock = parse_int(f[5], kColumns[5], line_no);
    r.sat_count = parse_int(f[6], kColumns[6], line_no);
    r.e = parse_double(f[7], kColumns[7], line_no);
    r.delta = parse_double(f[8], kColumns[8], line_no);
    r.x = parse_double(f[9], kColumns[9], line_no);
    r.y = parse_double(f[10], kColumns[10], line_no);
    r.psi = parse_double(f[11], kColumns[11], line_no);
    r.vx = parse_double(f[12], kColumns[12], line_no);
    r.vy = parse_double(f[13], kColumns[13], line_no);
    r.r = parse_double(f[14], kColumns[14], line_no);
    r.label = parse_int(f[15], kColumns[15], line_no);
    rows.push_back(r);
  }
  return rows;
}

std::vector<FeatureRow> read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for read: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

namespace {

GeoPoint default_home() { return GeoPoint(32.2319, -110.9501); }

Scenario base_scenario(std::uint64_t seed) {
  Scenario sc;
  sc.seed = seed;
  sc.mission.home = default_home();
  return sc;
}

// Clean traversal of a randomized circular mission.
Scenario clean_field_scenario(std::uint64_t seed, CounterRng& rng) {
  Scenario sc = base_scenario(seed);
  GeoPoint home = destination_point(default_home(), rng.uniform(0.0, 2.0 * kPi),
                                    rng.uniform(0.0, 200.0));
  sc.mission = Mission::circular(home, rng.uniform(16.0, 26.0), 7);
  sc.mission.loop = true;
  sc.duration_s = 60.0;
  return sc;
}

// Attacked run: 10 s of normal driving, then a 25 s attack, 5 s of aftermath.
Scenario attack_field_scenario(std::uint64_t seed, int kind, CounterRng& rng) {
  Scenario sc = base_scenario(seed);
  GeoPoint home = destination_point(default_home(), rng.uniform(0.0, 2.0 * kPi),
                                    rng.uniform(0.0, 200.0));
  switch (kind % 3) {
    case 0: {  // straight leg
      sc.mission.home = home;
      sc.mission.waypoints = {destination_point(home, rng.uniform(0.0, 2.0 * kPi), 400.0)};
      break;
    }
    case 1: {  // turning
      sc.mission = Mission::circular(home, rng.uniform(16.0, 26.0), 7);
      break;
    }
    default: {  // stationary
      sc.mission.home = home;
      sc.mission.waypoints = {home};
      sc.v_target = 0.0;
      break;
    }
  }
  sc.mission.loop = true;
  sc.duration_s = 40.0;
  sc.hold_on_failsafe = (kind % 2) == 0;

  SpoofConfig spoof;
  spoof.t0 = 10.0;
  spoof.duration = 25.0;
  if (kind % 4 == 3) {
    double off = rng.uniform(1e-3, 4e-3);  // degrees, a few hundred meters
    spoof.mode = GaussianOffset{off, off, 5e-5};
  } else {
    spoof.mode = FixedTarget{destination_point(home, rng.uniform(0.0, 2.0 * kPi),
                                               rng.uniform(200.0, 800.0))};
  }
  sc.spoof = spoof;
  return sc;
}

}  // namespace

BatchResult generate_field_dataset(int scenario_count, std::uint64_t seed) {
  if (scenario_count < 0) throw std::invalid_argument("scenario count must be >= 0");
  BatchResult out;
  out.scenario_count = scenario_count;
  CounterRng rng(seed, rng_stream::kBatch);
  for (int i = 0; i < scenario_count; ++i) {
    std::uint64_t run_seed = seed * 1000003ull + static_cast<std::uint64_t>(i);
    bool attacked = (i % 2) == 1;
    Scenario sc = attacked ? attack_field_scenario(run_seed, i / 2, rng)
                           : clean_field_scenario(run_seed, rng);
    SimLog log = run(sc);
    out.attack_scenarios += attacked ? 1 : 0;
    out.logs.push_back(std::move(log));
  }
  out.rows = to_dataset(out.logs);
  for (const FeatureRow& r : out.rows) out.attack_rows += r.label;
  return out;
}

BatchResult generate_urban_dataset(int vehicle_count, std::uint64_t seed) {
  if (vehicle_count < 0) throw std::invalid_argument("vehicle count must be >= 0");
  BatchResult out;
  out.scenario_count = vehicle_count;
  CounterRng rng(seed, rng_stream::kBatch);
  CounterRng spoof_rng(seed, rng_stream::kSpoof);
  for (int v = 0; v < vehicle_count; ++v) {
    Scenario sc = base_scenario(seed * 2000003ull + static_cast<std::uint64_t>(v));
    GeoPoint start = destination_point(default_home(), rng.uniform(0.0, 2.0 * kPi),
                                       rng.uniform(0.0, 500.0));
    sc.mission.home = start;
    sc.mission.waypoints.clear();
    double heading = rng.uniform(0.0, 2.0 * kPi);
    GeoPoint wp = start;
    for (int k = 0; k < 4; ++k) {
      heading += rng.uniform(-0.9, 0.9);
      wp = destination_point(wp, heading, rng.uniform(40.0, 90.0));
      sc.mission.waypoints.push_back(wp);
    }
    sc.mission.loop = true;
    sc.feature_rate_hz = 10.0;
    sc.duration_s = 30.0;
    SimLog log = run(sc);

    // Per-vehicle reading statistics drive the paired spoofed entries.
    double mean_lat = 0.0, mean_lon = 0.0;
    for (const FeatureRow& r : log.rows) {
      mean_lat += r.lat;
      mean_lon += r.lon;
    }
    std::size_t n = log.rows.size();
    if (n > 0) {
      mean_lat /= static_cast<double>(n);
      mean_lon /= static_cast<double>(n);
    }
    double var_lat = 0.0, var_lon = 0.0;
    for (const FeatureRow& r : log.rows) {
      var_lat += (r.lat - mean_lat) * (r.lat - mean_lat);
      var_lon += (r.lon - mean_lon) * (r.lon - mean_lon);
    }
    if (n > 1) {
      var_lat /= static_cast<double>(n - 1);
      var_lon /= static_cast<double>(n - 1);
    }
    double sd_lat = std::sqrt(var_lat);
    double sd_lon = std::sqrt(var_lon);

    SimLog paired = log;
    for (const FeatureRow& r : log.rows) {
      FeatureRow spoofed = r;
      spoofed.lat = std::clamp(spoof_rng.normal(r.lat + mean_lat, sd_lat), -90.0, 90.0);
      spoofed.lon = wrap_longitude(spoof_rng.normal(r.lon + mean_lon, sd_lon));
      spoofed.label = 1;
      paired.rows.push_back(spoofed);
    }
    out.logs.push_back(std::move(paired));
  }
  out.rows = to_dataset(out.logs);
  for (const FeatureRow& r : out.rows) out.attack_rows += r.label;
  return out;
}

}  // namespace avgps
