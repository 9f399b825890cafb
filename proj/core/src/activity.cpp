#include "mobility/activity.hpp"

#include <array>
#include <stdexcept>

namespace mobility::activity {

void ingest_label(ActivityWindowCounts& counts, std::string_view label) {
  if (label == "vehicle") {
    ++counts.vehicle_count;
  } else if (label == "bicycle") {
    ++counts.bicycle_count;
  } else if (label == "on_foot") {
    ++counts.on_foot_count;
  } else if (label == "still") {
    ++counts.still_count;
  } else if (label == "unknown") {
    ++counts.unknown_count;
  } else {
    throw std::invalid_argument("unknown raw activity label: " +
                                std::string(label));
  }
}

std::string_view map_detected_type(int detected_type) {
  switch (detected_type) {
    case kInVehicle:
      return "vehicle";
    case kOnBicycle:
      return "bicycle";
    case kOnFoot:
      return "on_foot";
    case kStill:
      return "still";
    case kUnknown:
      return "unknown";
    case kTilting:
      return "still";
    default:
      return "invalid";
  }
}

ActivityLabel estimate(const ActivityWindowCounts& counts) {
  struct Entry {
    ActivityLabel label;
    std::uint32_t count;
  };
  // priority order for tie-breaking
  const std::array<Entry, 5> entries{{
      {ActivityLabel::Vehicle, counts.vehicle_count},
      {ActivityLabel::Bicycle, counts.bicycle_count},
      {ActivityLabel::OnFoot, counts.on_foot_count},
      {ActivityLabel::Still, counts.still_count},
      {ActivityLabel::Unknown, counts.unknown_count},
  }};

  bool all_equal = true;
  for (const auto& entry : entries) {
    all_equal = all_equal && entry.count == entries[0].count;
  }
  if (all_equal) {
    return ActivityLabel::Still;
  }

  Entry best = entries[0];
  for (const auto& entry : entries) {
    if (entry.count > best.count) {
      best = entry;
    }
  }
  return best.label;
}

}  // namespace mobility::activity
