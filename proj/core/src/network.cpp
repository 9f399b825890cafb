#include "mobility/network.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mobility/types.hpp"

namespace mobility {

namespace {

double coordinate_from_json(const nlohmann::json& value, const char* what) {
  // the reference database stores coordinates as quoted decimal text
  if (value.is_string()) {
    return std::stod(value.get<std::string>());
  }
  if (value.is_number()) {
    return value.get<double>();
  }
  throw std::invalid_argument(std::string(what) +
                              " must be a number or decimal text");
}

nlohmann::json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path.string());
  }
  return nlohmann::json::parse(in);
}

bool valid_coordinates(double lat, double lon) {
  return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

}  // namespace

std::string_view to_string(VehicleType type) {
  return type == VehicleType::Bus ? "bus" : "tram";
}

VehicleType parse_vehicle_type(std::string_view text) {
  if (text == "bus") return VehicleType::Bus;
  if (text == "tram") return VehicleType::Tram;
  throw std::invalid_argument("unknown vehicle type: " + std::string(text));
}

std::vector<std::string> validate_network(const TransitNetwork& network) {
  std::vector<std::string> violations;

  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& station : network.metro_stations) {
    if (!seen.insert({station.line, station.name}).second) {
      violations.push_back("duplicate station record " + station.line + "/" +
                           station.name);
    }
    if (!valid_coordinates(station.latitude, station.longitude)) {
      violations.push_back("station " + station.line + "/" + station.name +
                           " has out-of-range coordinates");
    }
  }

  for (const auto& [line, names] : network.line_orders) {
    for (const auto& name : names) {
      int matches = 0;
      for (const auto& station : network.metro_stations) {
        if (station.line == line && station.name == name) {
          ++matches;
        }
      }
      if (matches != 1) {
        violations.push_back("line " + line + " order references \"" + name +
                             "\" which resolves to " +
                             std::to_string(matches) + " station records");
      }
    }
  }

  for (const auto& stop : network.train_stops) {
    if (!valid_coordinates(stop.latitude, stop.longitude)) {
      violations.push_back("train stop on line " + stop.line +
                           " has out-of-range coordinates");
    }
  }

  return violations;
}

TransitNetwork load_stations(const std::filesystem::path& path) {
  const nlohmann::json doc = parse_file(path);
  TransitNetwork network;

  if (doc.contains("metro")) {
    for (const auto& entry : doc.at("metro")) {
      StationRecord station;
      station.id = entry.at("id").get<std::string>();
      station.line = entry.at("line").get<std::string>();
      station.name = entry.at("name").get<std::string>();
      station.connections = entry.value("connections", std::string{});
      station.latitude = coordinate_from_json(entry.at("lat"), "lat");
      station.longitude = coordinate_from_json(entry.at("lon"), "lon");
      network.metro_stations.push_back(std::move(station));
    }
  }

  if (doc.contains("renfe")) {
    for (const auto& entry : doc.at("renfe")) {
      TrainStop stop;
      stop.line = entry.at("line").get<std::string>();
      stop.latitude = coordinate_from_json(entry.at("lat"), "lat");
      stop.longitude = coordinate_from_json(entry.at("lon"), "lon");
      network.train_stops.push_back(std::move(stop));
    }
  }

  return network;
}

void load_line_orders(const std::filesystem::path& path,
                      TransitNetwork& network) {
  const nlohmann::json doc = parse_file(path);
  if (!doc.is_object()) {
    throw std::invalid_argument("line-order file must hold a JSON object");
  }
  for (const auto& [line, names] : doc.items()) {
    std::vector<std::string> order;
    for (const auto& name : names) {
      order.push_back(name.get<std::string>());
    }
    network.line_orders[line] = std::move(order);
  }
}

TransitNetwork load_network(const std::filesystem::path& stations_path,
                            const std::filesystem::path& line_orders_path) {
  TransitNetwork network = load_stations(stations_path);
  load_line_orders(line_orders_path, network);
  return network;
}

std::vector<ScheduleTrip> load_schedule(const std::filesystem::path& path) {
  const nlohmann::json doc = parse_file(path);
  if (!doc.is_array()) {
    throw std::invalid_argument("schedule file must hold a JSON array");
  }

  std::vector<ScheduleTrip> trips;
  for (const auto& entry : doc) {
    ScheduleTrip trip;
    trip.vehicle_type =
        parse_vehicle_type(entry.at("vehicle_type").get<std::string>());
    trip.line = entry.at("line").get<std::string>();
    const auto& origin = entry.at("origin_stop");
    trip.origin_lat = coordinate_from_json(origin.at("lat"), "lat");
    trip.origin_lon = coordinate_from_json(origin.at("lon"), "lon");
    const auto& destination = entry.at("destination_stop");
    trip.destination_lat = coordinate_from_json(destination.at("lat"), "lat");
    trip.destination_lon = coordinate_from_json(destination.at("lon"), "lon");
    trip.departure_epoch_s = entry.at("departure_epoch").get<std::int64_t>();
    trip.arrival_epoch_s = entry.at("arrival_epoch").get<std::int64_t>();
    if (trip.departure_epoch_s >= trip.arrival_epoch_s) {
      throw std::invalid_argument("trip on line " + trip.line +
                                  " departs at or after its arrival");
    }
    trips.push_back(std::move(trip));
  }
  return trips;
}

}  // namespace mobility
