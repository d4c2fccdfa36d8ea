#pragma once

#include <string>
#include <vector>

#include "avgps/sim.hpp"

namespace avgps {

struct SchemaMismatch : std::runtime_error {
  explicit SchemaMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Fixed 16-column order of the dataset schema.
inline constexpr const char* kCsvHeader =
    "timestamp,lat,lon,hdop,vdop,sat_lock,sat_count,e,delta,x,y,psi,vx,vy,r,label";

// Units comment emitted above the header.
inline constexpr const char* kCsvUnitsComment =
    "# timestamp s; lat/lon decimal degrees; e/x/y m; delta/psi rad; vx/vy m/s; r rad/s";

// Flattens logs into one row stream, in order.
std::vector<FeatureRow> to_dataset(const std::vector<SimLog>& logs);

// Serialization uses shortest round-trip formatting, so write/read is exact.
std::string to_csv(const std::vector<FeatureRow>& rows);
void write_csv(const std::string& path, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_csv(const std::string& path);
std::vector<FeatureRow> parse_csv(const std::string& text);

struct BatchResult {
  std::vector<FeatureRow> rows;
  int scenario_count = 0;
  int attack_scenarios = 0;
  std::size_t attack_rows = 0;
  std::vector<SimLog> logs;
};

// Field profile: 1 Hz single-vehicle runs alternating clean missions with
// attacked ones (straight, turning, and stationary geometries). Pairing a
// 60 s clean run with a 40 s run holding a 25 s attack keeps the labels at
// 75/25 for any even count.
BatchResult generate_field_dataset(int scenario_count, std::uint64_t seed);

// Urban profile: 0.1 s sampling over several vehicles with randomized
// starts; every clean row gets a spoofed twin whose coordinates are drawn
// from a normal centered on the reading plus the per-vehicle mean, with the
// per-vehicle standard deviation.
BatchResult generate_urban_dataset(int vehicle_count, std::uint64_t seed);

}  // namespace avgps
