#pragma once

#include <cmath>
#include <ctime>
#include <filesystem>
#include <numbers>
#include <vector>

#include "mobility/network.hpp"
#include "mobility/types.hpp"

namespace testutil {

inline std::filesystem::path data_dir() {
  return std::filesystem::path(MOBILITY_DATA_DIR);
}

inline mobility::LocationSample sample(double lat, double lon, double accuracy,
                                       std::int64_t t_ms, bool wifi = true) {
  return {lat, lon, accuracy, t_ms, wifi};
}

/// Epoch milliseconds of a local wall-clock instant (TZ pinned in main).
inline std::int64_t local_epoch_ms(int year, int month, int day, int hour,
                                   int minute, int second, int millis = 0) {
  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = month - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = minute;
  tm.tm_sec = second;
  tm.tm_isdst = -1;
  return static_cast<std::int64_t>(std::mktime(&tm)) * 1000 + millis;
}

/// Independent distance oracle (haversine, mean Earth radius).
inline double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kRadius = 6'371'000.0;
  const auto rad = [](double degrees) {
    return degrees * std::numbers::pi / 180.0;
  };
  const double dlat = rad(lat2 - lat1);
  const double dlon = rad(lon2 - lon1);
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(rad(lat1)) * std::cos(rad(lat2)) *
                       std::sin(dlon / 2) * std::sin(dlon / 2);
  return kRadius * 2.0 * std::atan2(std::sqrt(a), std::sqrt(1.0 - a));
}

/// The six timestamped walking fixes of the reference trail.
inline std::vector<mobility::LocationSample> reference_walk_trail() {
  const auto at = [](int hour, int minute, int second, int millis = 0) {
    return local_epoch_ms(2015, 1, 15, hour, minute, second, millis);
  };
  return {
      sample(41.441145, 2.1659081, 35.0, at(9, 46, 44, 900)),
      sample(41.4410568, 2.1660705, 40.0, at(9, 47, 11)),
      sample(41.441012, 2.1661082, 30.0, at(9, 47, 32)),
      sample(41.4409738, 2.1661926, 45.0, at(9, 48, 13)),
      sample(41.440959, 2.1662142, 38.0, at(9, 48, 34)),
      sample(41.4410113, 2.1663986, 42.0, at(9, 49, 7)),
  };
}

inline mobility::TransitNetwork barcelona_network() {
  return mobility::load_network(data_dir() / "stations.json",
                                data_dir() / "line_orders.json");
}

constexpr double kCanyellesLat = 41.4417702469479;
constexpr double kCanyellesLon = 2.16633743592508;
constexpr double kMontbauLat = 41.4306544208465;
constexpr double kMontbauLon = 2.14505193131497;

constexpr double kWalkTrailDistanceM = 49.69776445992602;
constexpr double kMetroPathDistanceM = 2270.152587890625;

}  // namespace testutil
