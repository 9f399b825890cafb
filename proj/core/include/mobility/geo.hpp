#pragma once

#include <span>

#include "mobility/types.hpp"

namespace mobility::geo {

inline constexpr double kEarthRadiusM = 6'371'000.0;

/// Planar equirectangular distance in meters:
///   x = dlon * cos((lat1 + lat2) / 2), y = dlat, d = sqrt(x^2 + y^2) * R
/// with all angles in radians. Good to well under 0.5% for separations
/// below a few kilometers at mid latitudes.
double distance_m(double lat1, double lon1, double lat2, double lon2,
                  double earth_radius_m = kEarthRadiusM);

double distance_m(const LocationSample& a, const LocationSample& b,
                  double earth_radius_m = kEarthRadiusM);

/// Sum of distance_m over consecutive pairs. A single point has length zero.
/// Throws std::invalid_argument on an empty trail.
double path_distance_m(std::span<const LocationSample> points,
                       double earth_radius_m = kEarthRadiusM);

/// Straight-line distance between a trail's first and last points,
/// ignoring everything in between. Throws on an empty trail.
double block_distance_m(std::span<const LocationSample> points,
                        double earth_radius_m = kEarthRadiusM);

/// km/h from meters and seconds: distance * 3.6 / duration.
/// Throws std::invalid_argument when duration is zero; stationary segments
/// are handled by the callers and never reach this.
double average_speed_kmh(double distance_m, double duration_s);

/// Inverse geodesic on the WGS84 ellipsoid (Vincenty), returned at float
/// precision to match the rounding of mobile location stacks.
double geodesic_distance_m(double lat1, double lon1, double lat2, double lon2);

}  // namespace mobility::geo
