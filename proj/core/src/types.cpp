#include "mobility/types.hpp"

#include <stdexcept>
#include <utility>

namespace mobility {

void validate_sample(const LocationSample& sample) {
  if (sample.latitude < -90.0 || sample.latitude > 90.0) {
    throw std::invalid_argument("latitude out of range: " +
                                std::to_string(sample.latitude));
  }
  if (sample.longitude < -180.0 || sample.longitude > 180.0) {
    throw std::invalid_argument("longitude out of range: " +
                                std::to_string(sample.longitude));
  }
  if (!(sample.accuracy_m > 0.0)) {
    throw std::invalid_argument("accuracy must be positive");
  }
}

bool is_transit(ActivityLabel label) {
  switch (label) {
    case ActivityLabel::Metro:
    case ActivityLabel::Bus:
    case ActivityLabel::Tram:
    case ActivityLabel::Train:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(ActivityLabel label) {
  switch (label) {
    case ActivityLabel::Still:
      return "still";
    case ActivityLabel::OnFoot:
      return "on_foot";
    case ActivityLabel::Bicycle:
      return "bicycle";
    case ActivityLabel::Vehicle:
      return "vehicle";
    case ActivityLabel::Unknown:
      return "unknown";
    case ActivityLabel::Metro:
      return "metro";
    case ActivityLabel::Bus:
      return "bus";
    case ActivityLabel::Tram:
      return "tram";
    case ActivityLabel::Train:
      return "train";
  }
  throw std::logic_error("unreachable activity label");
}

ActivityLabel parse_activity_label(std::string_view text) {
  if (text == "still") return ActivityLabel::Still;
  if (text == "on_foot") return ActivityLabel::OnFoot;
  if (text == "bicycle") return ActivityLabel::Bicycle;
  if (text == "vehicle") return ActivityLabel::Vehicle;
  if (text == "unknown") return ActivityLabel::Unknown;
  if (text == "metro") return ActivityLabel::Metro;
  if (text == "bus") return ActivityLabel::Bus;
  if (text == "tram") return ActivityLabel::Tram;
  if (text == "train" || text == "renfe") return ActivityLabel::Train;
  throw std::invalid_argument("unknown activity label: " + std::string(text));
}

Segment::Segment(ActivityLabel activity, LocationSample first_location,
                 LocationSample last_location, double total_distance_m,
                 std::int64_t total_duration_s, double average_speed_kmh,
                 std::optional<std::string> line,
                 std::vector<LocationSample> location_points)
    : activity_(activity),
      first_location_(first_location),
      last_location_(last_location),
      total_distance_m_(total_distance_m),
      total_duration_s_(total_duration_s),
      average_speed_kmh_(average_speed_kmh),
      line_(std::move(line)),
      location_points_(std::move(location_points)) {
  validate_sample(first_location_);
  validate_sample(last_location_);
  for (const auto& point : location_points_) {
    validate_sample(point);
  }
  if (total_duration_s_ < 0) {
    throw std::invalid_argument("segment duration must be non-negative");
  }
  if (total_distance_m_ < 0.0) {
    throw std::invalid_argument("segment distance must be non-negative");
  }
  if (average_speed_kmh_ < 0.0) {
    throw std::invalid_argument("segment speed must be non-negative");
  }
  if (location_points_.empty()) {
    throw std::invalid_argument("segment needs at least one location point");
  }
  if (first_location_.timestamp_ms > last_location_.timestamp_ms) {
    throw std::invalid_argument("segment first location postdates the last");
  }
  if (activity_ == ActivityLabel::Still) {
    if (total_distance_m_ != 0.0 || average_speed_kmh_ != 0.0) {
      throw std::invalid_argument("still segment must have zero distance and speed");
    }
    if (location_points_.size() != 1) {
      throw std::invalid_argument("still segment carries exactly one point");
    }
  }
  if (line_ && !is_transit(activity_)) {
    throw std::invalid_argument("line is only valid on transit segments");
  }
}

}  // namespace mobility
