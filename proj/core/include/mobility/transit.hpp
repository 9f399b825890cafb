#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mobility/config.hpp"
#include "mobility/geo.hpp"
#include "mobility/network.hpp"
#include "mobility/types.hpp"

namespace mobility::transit {

/// A traced metro route: per-line legs, the stations actually traversed and
/// the number of line changes.
struct MetroRoute {
  // one entry per leg: (line name, ordered station names of that leg)
  std::vector<std::pair<std::string, std::vector<std::string>>> line_sequence;
  std::vector<StationRecord> stations;
  int transfers = 0;

  /// The line recorded on the segment: the first line of the sequence.
  const std::string& line() const { return line_sequence.front().first; }
};

/// The station closest to (lat, lon) among those within radius_m; ties by
/// database order. Absent when the radius holds no station.
std::optional<StationRecord> nearest_station(
    double lat, double lon, double radius_m, const TransitNetwork& network,
    double earth_radius_m = geo::kEarthRadiusM);

/// Geodesic length of a station sequence accumulated at float precision,
/// matching the rounding of mobile location stacks.
double station_path_distance_m(std::span<const StationRecord> stations);

/// Resolves both fixes to stations and traces the route along line orders,
/// allowing up to two transfers and picking the candidate with the smallest
/// planar path length. Absent (a false positive) when either lookup fails
/// or both fixes resolve to the same station name.
std::optional<MetroRoute> recognize_metro(const LocationSample& loc1,
                                          const LocationSample& loc2,
                                          const TransitNetwork& network,
                                          const PipelineConfig& config);

/// First trip in schedule order whose stops lie within
/// schedule_match_radius_m of the endpoints and whose departure/arrival
/// times fall strictly inside the configured margins.
std::optional<VehicleType> match_bus_or_tram(
    const LocationSample& origin, const LocationSample& destination,
    std::int64_t departure_epoch_s, std::int64_t arrival_epoch_s,
    std::span<const ScheduleTrip> schedule, const PipelineConfig& config);

/// The shared line of the train stops nearest to both endpoints, when both
/// lie strictly within train_station_radius_m; absent otherwise.
std::optional<std::string> match_train(const LocationSample& origin,
                                       const LocationSample& destination,
                                       const TransitNetwork& network,
                                       const PipelineConfig& config);

/// Relabels vehicle segments as bus, tram or train where the schedule or
/// the train-stop database supports it. The journey origin is the segment's
/// own first fix when the previous segment is still, otherwise the previous
/// segment's first fix (slow acceleration blurs the boundary). Never touches
/// non-vehicle segments and never changes the segment count.
std::vector<Segment> post_process(std::span<const Segment> segments,
                                  std::span<const ScheduleTrip> schedule,
                                  const TransitNetwork& network,
                                  const PipelineConfig& config);

}  // namespace mobility::transit
