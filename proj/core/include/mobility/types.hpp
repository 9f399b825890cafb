#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mobility {

/// One positioning fix as delivered by the location provider.
struct LocationSample {
  double latitude = 0.0;   // degrees, WGS84
  double longitude = 0.0;  // degrees, WGS84
  double accuracy_m = 1.0; // radius of the 68% confidence circle
  std::int64_t timestamp_ms = 0;
  bool wifi_enabled = false;

  bool same_position(const LocationSample& other) const {
    // exact float comparison: repeated provider fixes are bit-identical
    return latitude == other.latitude && longitude == other.longitude;
  }
};

/// Throws std::invalid_argument when coordinates or accuracy are out of range.
void validate_sample(const LocationSample& sample);

enum class ActivityLabel {
  Still,
  OnFoot,
  Bicycle,
  Vehicle,
  Unknown,
  // assigned only by recognition post-processing, never by the raw stream
  Metro,
  Bus,
  Tram,
  Train,
};

bool is_transit(ActivityLabel label);

/// Canonical serialized name ("still", "on_foot", ..., "train").
std::string_view to_string(ActivityLabel label);

/// Parses a serialized label. "renfe" is accepted as an alias for Train.
/// Throws std::invalid_argument for anything outside the closed set.
ActivityLabel parse_activity_label(std::string_view text);

/// Per-window tallies of the five raw activity labels.
struct ActivityWindowCounts {
  std::uint32_t vehicle_count = 0;
  std::uint32_t bicycle_count = 0;
  std::uint32_t on_foot_count = 0;
  std::uint32_t still_count = 0;
  std::uint32_t unknown_count = 0;

  std::uint32_t total() const {
    return vehicle_count + bicycle_count + on_foot_count + still_count +
           unknown_count;
  }
  void reset() { *this = ActivityWindowCounts{}; }
};

/// A merged activity interval. Invariants are enforced at construction:
///   - duration, distance and speed are non-negative
///   - Still segments carry zero distance/speed and exactly one point
///   - a line may only be set on transit activities
///   - first location does not postdate the last one
class Segment {
 public:
  Segment(ActivityLabel activity, LocationSample first_location,
          LocationSample last_location, double total_distance_m,
          std::int64_t total_duration_s, double average_speed_kmh,
          std::optional<std::string> line,
          std::vector<LocationSample> location_points);

  ActivityLabel activity() const { return activity_; }
  const LocationSample& first_location() const { return first_location_; }
  const LocationSample& last_location() const { return last_location_; }
  double total_distance_m() const { return total_distance_m_; }
  std::int64_t total_duration_s() const { return total_duration_s_; }
  double average_speed_kmh() const { return average_speed_kmh_; }
  const std::optional<std::string>& line() const { return line_; }
  const std::vector<LocationSample>& location_points() const {
    return location_points_;
  }

 private:
  ActivityLabel activity_;
  LocationSample first_location_;
  LocationSample last_location_;
  double total_distance_m_;
  std::int64_t total_duration_s_;
  double average_speed_kmh_;
  std::optional<std::string> line_;
  std::vector<LocationSample> location_points_;
};

}  // namespace mobility
