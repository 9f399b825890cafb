#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mobility {

/// One metro station on one line. A station name may appear on several
/// lines; each appearance is its own record.
struct StationRecord {
  std::string id;
  std::string line;
  std::string name;
  std::string connections;  // hyphen-separated connecting lines, may be empty
  double latitude = 0.0;
  double longitude = 0.0;
};

struct TrainStop {
  std::string line;
  double latitude = 0.0;
  double longitude = 0.0;
};

/// Metro station records, per-line ordered station names and train stops.
struct TransitNetwork {
  std::vector<StationRecord> metro_stations;
  std::map<std::string, std::vector<std::string>> line_orders;
  std::vector<TrainStop> train_stops;
};

enum class VehicleType { Bus, Tram };

std::string_view to_string(VehicleType type);
VehicleType parse_vehicle_type(std::string_view text);

/// One scheduled bus or tram trip between two stops.
struct ScheduleTrip {
  VehicleType vehicle_type = VehicleType::Bus;
  std::string line;
  double origin_lat = 0.0;
  double origin_lon = 0.0;
  double destination_lat = 0.0;
  double destination_lon = 0.0;
  std::int64_t departure_epoch_s = 0;
  std::int64_t arrival_epoch_s = 0;
};

/// Returns one description per violated network invariant; an empty list
/// means the network is consistent. Violations are data, not failures.
std::vector<std::string> validate_network(const TransitNetwork& network);

/// Station database: JSON with a "metro" array of
/// {id, line, name, connections, lat, lon} (lat/lon as decimal text) and a
/// "renfe" array of {line, lat, lon}.
TransitNetwork load_stations(const std::filesystem::path& path);

/// Line-order file: JSON object mapping line name -> ordered station names.
/// Merged into an already-loaded station database.
void load_line_orders(const std::filesystem::path& path,
                      TransitNetwork& network);

TransitNetwork load_network(const std::filesystem::path& stations_path,
                            const std::filesystem::path& line_orders_path);

/// Schedule file: JSON array of trips
/// {vehicle_type, line, origin_stop: {lat, lon}, destination_stop: {lat, lon},
///  departure_epoch, arrival_epoch}. Trips keep file order.
std::vector<ScheduleTrip> load_schedule(const std::filesystem::path& path);

}  // namespace mobility
