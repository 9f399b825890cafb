#include "mobility/transit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace mobility::transit {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::optional<std::size_t> index_of(const std::vector<std::string>& order,
                                    const std::string& name) {
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == name) return i;
  }
  return std::nullopt;
}

/// Ordered station names of one line between two stations, inclusive,
/// walking the order in whichever direction connects them.
std::optional<std::vector<std::string>> line_slice(
    const std::vector<std::string>& order, const std::string& from,
    const std::string& to) {
  const auto a = index_of(order, from);
  const auto b = index_of(order, to);
  if (!a || !b) return std::nullopt;
  std::vector<std::string> names;
  if (*a <= *b) {
    for (std::size_t i = *a; i <= *b; ++i) names.push_back(order[i]);
  } else {
    for (std::size_t i = *a + 1; i-- > *b;) names.push_back(order[i]);
  }
  return names;
}

struct StationIndex {
  std::map<std::pair<std::string, std::string>, const StationRecord*> by_line_name;

  explicit StationIndex(const TransitNetwork& network) {
    for (const auto& station : network.metro_stations) {
      by_line_name.emplace(std::make_pair(station.line, station.name), &station);
    }
  }

  const StationRecord* find(const std::string& line,
                            const std::string& name) const {
    const auto it = by_line_name.find({line, name});
    return it == by_line_name.end() ? nullptr : it->second;
  }
};

/// Interchange names usable to step from line `a` onto line `b`: a name
/// present on both orders. A connections entry naming `b` corroborates the
/// interchange but cannot create one, since continuing the trace requires a
/// position on `b`'s order.
std::vector<std::string> interchange_names(const TransitNetwork& network,
                                           const std::string& a,
                                           const std::string& b) {
  std::vector<std::string> names;
  const auto a_it = network.line_orders.find(a);
  const auto b_it = network.line_orders.find(b);
  if (a_it == network.line_orders.end() || b_it == network.line_orders.end()) {
    return names;
  }
  for (const auto& name : a_it->second) {
    if (index_of(b_it->second, name)) {
      names.push_back(name);
    }
  }
  return names;
}

struct RouteCandidate {
  MetroRoute route;
  double path_m = std::numeric_limits<double>::infinity();
};

std::optional<MetroRoute> build_route(
    const TransitNetwork& network, const StationIndex& index,
    const std::vector<std::pair<std::string, std::pair<std::string, std::string>>>&
        legs /* (line, (from, to)) */) {
  MetroRoute route;
  for (const auto& [line, endpoints] : legs) {
    const auto order_it = network.line_orders.find(line);
    if (order_it == network.line_orders.end()) return std::nullopt;
    auto names = line_slice(order_it->second, endpoints.first, endpoints.second);
    if (!names) return std::nullopt;
    // the interchange is already the previous leg's last station
    std::size_t start = route.stations.empty() ? 0 : 1;
    for (std::size_t i = start; i < names->size(); ++i) {
      const StationRecord* record = index.find(line, (*names)[i]);
      if (record == nullptr) return std::nullopt;
      route.stations.push_back(*record);
    }
    route.line_sequence.emplace_back(line, std::move(*names));
  }
  route.transfers = static_cast<int>(route.line_sequence.size()) - 1;
  if (route.stations.empty()) return std::nullopt;
  return route;
}

double route_path_m(const MetroRoute& route, double earth_radius_m) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < route.stations.size(); ++i) {
    total += geo::distance_m(route.stations[i].latitude,
                             route.stations[i].longitude,
                             route.stations[i + 1].latitude,
                             route.stations[i + 1].longitude, earth_radius_m);
  }
  return total;
}

void consider(std::optional<RouteCandidate>& best, std::optional<MetroRoute> route,
              double earth_radius_m) {
  if (!route) return;
  const double path = route_path_m(*route, earth_radius_m);
  if (!best || path < best->path_m) {
    best = RouteCandidate{std::move(*route), path};
  }
}

}  // namespace

std::optional<StationRecord> nearest_station(double lat, double lon,
                                             double radius_m,
                                             const TransitNetwork& network,
                                             double earth_radius_m) {
  if (!(radius_m > 0.0)) {
    throw std::invalid_argument("nearest_station: radius must be positive");
  }
  const StationRecord* best = nullptr;
  double best_distance = std::numeric_limits<double>::infinity();
  for (const auto& station : network.metro_stations) {
    const double d = geo::distance_m(lat, lon, station.latitude,
                                     station.longitude, earth_radius_m);
    if (d <= radius_m && d < best_distance) {
      best = &station;
      best_distance = d;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

double station_path_distance_m(std::span<const StationRecord> stations) {
  float total = 0.0f;
  for (std::size_t i = 0; i + 1 < stations.size(); ++i) {
    total += static_cast<float>(geo::geodesic_distance_m(
        stations[i].latitude, stations[i].longitude, stations[i + 1].latitude,
        stations[i + 1].longitude));
  }
  return total;
}

std::optional<MetroRoute> recognize_metro(const LocationSample& loc1,
                                          const LocationSample& loc2,
                                          const TransitNetwork& network,
                                          const PipelineConfig& config) {
  const auto origin =
      nearest_station(loc1.latitude, loc1.longitude,
                      config.station_search_radius_m, network,
                      config.earth_radius_m);
  const auto destination =
      nearest_station(loc2.latitude, loc2.longitude,
                      config.station_search_radius_m, network,
                      config.earth_radius_m);
  if (!origin || !destination) {
    return std::nullopt;
  }
  if (iequals(origin->name, destination->name)) {
    return std::nullopt;
  }

  const StationIndex index(network);
  const std::string& from = origin->name;
  const std::string& to = destination->name;

  // same line: walk the order directly
  std::optional<RouteCandidate> best;
  for (const auto& [line, order] : network.line_orders) {
    if (index_of(order, from) && index_of(order, to)) {
      consider(best, build_route(network, index, {{line, {from, to}}}),
               config.earth_radius_m);
    }
  }
  if (best) {
    return best->route;
  }

  // different lines: all combinations with up to two transfers,
  // shortest path length wins
  std::vector<std::string> from_lines;
  std::vector<std::string> to_lines;
  for (const auto& [line, order] : network.line_orders) {
    if (index_of(order, from)) from_lines.push_back(line);
    if (index_of(order, to)) to_lines.push_back(line);
  }

  for (const auto& l1 : from_lines) {
    for (const auto& [l2, order2] : network.line_orders) {
      if (l2 == l1) continue;
      for (const auto& via : interchange_names(network, l1, l2)) {
        if (via == from) continue;
        if (index_of(order2, to) && via != to) {
          consider(best,
                   build_route(network, index,
                               {{l1, {from, via}}, {l2, {via, to}}}),
                   config.earth_radius_m);
        }
        // a second transfer
        for (const auto& l3 : to_lines) {
          if (l3 == l1 || l3 == l2) continue;
          for (const auto& via2 : interchange_names(network, l2, l3)) {
            if (via2 == via || via2 == from || via2 == to) continue;
            consider(best,
                     build_route(network, index,
                                 {{l1, {from, via}},
                                  {l2, {via, via2}},
                                  {l3, {via2, to}}}),
                     config.earth_radius_m);
          }
        }
      }
    }
  }

  if (!best) {
    return std::nullopt;
  }
  return best->route;
}

std::optional<VehicleType> match_bus_or_tram(
    const LocationSample& origin, const LocationSample& destination,
    std::int64_t departure_epoch_s, std::int64_t arrival_epoch_s,
    std::span<const ScheduleTrip> schedule, const PipelineConfig& config) {
  if (departure_epoch_s >= arrival_epoch_s) {
    throw std::invalid_argument("departure must precede arrival");
  }
  for (const auto& trip : schedule) {
    const double origin_d =
        geo::distance_m(origin.latitude, origin.longitude, trip.origin_lat,
                        trip.origin_lon, config.earth_radius_m);
    const double destination_d = geo::distance_m(
        destination.latitude, destination.longitude, trip.destination_lat,
        trip.destination_lon, config.earth_radius_m);
    const auto departure_diff =
        std::abs(trip.departure_epoch_s - departure_epoch_s);
    const auto arrival_diff = std::abs(trip.arrival_epoch_s - arrival_epoch_s);
    if (origin_d <= config.schedule_match_radius_m &&
        destination_d <= config.schedule_match_radius_m &&
        departure_diff < config.departure_margin_s &&
        arrival_diff < config.arrival_margin_s) {
      return trip.vehicle_type;
    }
  }
  return std::nullopt;
}

std::optional<std::string> match_train(const LocationSample& origin,
                                       const LocationSample& destination,
                                       const TransitNetwork& network,
                                       const PipelineConfig& config) {
  if (network.train_stops.empty()) {
    return std::nullopt;
  }

  const auto nearest = [&](const LocationSample& point) {
    double min = std::numeric_limits<double>::infinity();
    const TrainStop* stop = nullptr;
    for (const auto& candidate : network.train_stops) {
      const double d =
          geo::distance_m(point.latitude, point.longitude, candidate.latitude,
                          candidate.longitude, config.earth_radius_m);
      if (d < min) {
        min = d;
        stop = &candidate;
      }
    }
    return std::make_pair(stop, min);
  };

  const auto [origin_stop, origin_d] = nearest(origin);
  const auto [destination_stop, destination_d] = nearest(destination);
  if (origin_d < config.train_station_radius_m &&
      destination_d < config.train_station_radius_m &&
      origin_stop->line == destination_stop->line) {
    return origin_stop->line;
  }
  return std::nullopt;
}

std::vector<Segment> post_process(std::span<const Segment> segments,
                                  std::span<const ScheduleTrip> schedule,
                                  const TransitNetwork& network,
                                  const PipelineConfig& config) {
  std::vector<Segment> result;
  result.reserve(segments.size());

  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& segment = segments[i];
    if (segment.activity() != ActivityLabel::Vehicle) {
      result.push_back(segment);
      continue;
    }

    // buses pull away slowly: unless the rider was still, the journey
    // started somewhere inside the previous segment
    const LocationSample& origin =
        (i == 0 || segments[i - 1].activity() == ActivityLabel::Still)
            ? segment.first_location()
            : segments[i - 1].first_location();
    const LocationSample& destination = segment.last_location();
    const std::int64_t departure_s = origin.timestamp_ms / 1000;
    const std::int64_t arrival_s = destination.timestamp_ms / 1000;

    if (const auto type = match_bus_or_tram(origin, destination, departure_s,
                                            arrival_s, schedule, config)) {
      result.emplace_back(*type == VehicleType::Bus ? ActivityLabel::Bus
                                                    : ActivityLabel::Tram,
                          segment.first_location(), segment.last_location(),
                          segment.total_distance_m(),
                          segment.total_duration_s(),
                          segment.average_speed_kmh(), std::nullopt,
                          segment.location_points());
      continue;
    }

    if (const auto line = match_train(origin, destination, network, config)) {
      result.emplace_back(ActivityLabel::Train, segment.first_location(),
                          segment.last_location(), segment.total_distance_m(),
                          segment.total_duration_s(),
                          segment.average_speed_kmh(), *line,
                          segment.location_points());
      continue;
    }

    result.push_back(segment);
  }

  return result;
}

}  // namespace mobility::transit
