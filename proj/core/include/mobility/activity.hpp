#pragma once

#include <string_view>

#include "mobility/types.hpp"

namespace mobility::activity {

/// Increments the counter matching a raw activity label
/// ("vehicle", "bicycle", "on_foot", "still" or "unknown").
/// Throws std::invalid_argument for any other text.
void ingest_label(ActivityWindowCounts& counts, std::string_view label);

/// Detected-activity integer codes delivered by the recognition provider.
enum DetectedType : int {
  kInVehicle = 0,
  kOnBicycle = 1,
  kOnFoot = 2,
  kStill = 3,
  kUnknown = 4,
  kTilting = 5,
};

/// Maps a detected-activity code to its raw label. TILTING is folded into
/// "still". Unrecognized codes map to "invalid", which no counter accepts.
std::string_view map_detected_type(int detected_type);

/// The window's dominant activity: the label with the strictly largest
/// count. Tied maxima resolve by priority vehicle > bicycle > on_foot >
/// still > unknown, except a five-way tie (including all-zero counts),
/// which resolves to still.
ActivityLabel estimate(const ActivityWindowCounts& counts);

}  // namespace mobility::activity
