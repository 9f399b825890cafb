#include "mobility/geo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mobility::geo {

namespace {

inline double to_radians(double degrees) {
  return degrees * std::numbers::pi / 180.0;
}

}  // namespace

double distance_m(double lat1, double lon1, double lat2, double lon2,
                  double earth_radius_m) {
  lat1 = to_radians(lat1);
  lon1 = to_radians(lon1);
  lat2 = to_radians(lat2);
  lon2 = to_radians(lon2);

  const double x = (lon2 - lon1) * std::cos((lat1 + lat2) / 2);
  const double y = lat1 - lat2;
  return std::sqrt(x * x + y * y) * earth_radius_m;
}

double distance_m(const LocationSample& a, const LocationSample& b,
                  double earth_radius_m) {
  return distance_m(a.latitude, a.longitude, b.latitude, b.longitude,
                    earth_radius_m);
}

double path_distance_m(std::span<const LocationSample> points,
                       double earth_radius_m) {
  if (points.empty()) {
    throw std::invalid_argument("path_distance_m: empty trail");
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    total += distance_m(points[i], points[i + 1], earth_radius_m);
  }
  return total;
}

double block_distance_m(std::span<const LocationSample> points,
                        double earth_radius_m) {
  if (points.empty()) {
    throw std::invalid_argument("block_distance_m: empty trail");
  }
  return distance_m(points.front(), points.back(), earth_radius_m);
}

double average_speed_kmh(double distance_m, double duration_s) {
  if (duration_s == 0.0) {
    throw std::invalid_argument("average_speed_kmh: zero duration");
  }
  return distance_m * 3.6 / duration_s;
}

double geodesic_distance_m(double lat1, double lon1, double lat2, double lon2) {
  // Vincenty inverse formula, WGS84.
  constexpr double a = 6'378'137.0;
  constexpr double b = 6'356'752.3142;
  constexpr double f = (a - b) / a;
  constexpr double a_sq_minus_b_sq_over_b_sq = (a * a - b * b) / (b * b);
  constexpr int max_iterations = 20;

  lat1 = to_radians(lat1);
  lon1 = to_radians(lon1);
  lat2 = to_radians(lat2);
  lon2 = to_radians(lon2);

  const double big_l = lon2 - lon1;
  const double u1 = std::atan((1.0 - f) * std::tan(lat1));
  const double u2 = std::atan((1.0 - f) * std::tan(lat2));
  const double cos_u1 = std::cos(u1);
  const double cos_u2 = std::cos(u2);
  const double sin_u1 = std::sin(u1);
  const double sin_u2 = std::sin(u2);
  const double cos_u1_cos_u2 = cos_u1 * cos_u2;
  const double sin_u1_sin_u2 = sin_u1 * sin_u2;

  double sigma = 0.0;
  double delta_sigma = 0.0;
  double big_a = 1.0;
  double lambda = big_l;

  for (int iter = 0; iter < max_iterations; ++iter) {
    const double lambda_orig = lambda;
    const double cos_lambda = std::cos(lambda);
    const double sin_lambda = std::sin(lambda);

    const double t1 = cos_u2 * sin_lambda;
    const double t2 = cos_u1 * sin_u2 - sin_u1 * cos_u2 * cos_lambda;
    const double sin_sq_sigma = t1 * t1 + t2 * t2;
    const double sin_sigma = std::sqrt(sin_sq_sigma);
    const double cos_sigma = sin_u1_sin_u2 + cos_u1_cos_u2 * cos_lambda;
    sigma = std::atan2(sin_sigma, cos_sigma);

    const double sin_alpha =
        sin_sigma == 0.0 ? 0.0 : cos_u1_cos_u2 * sin_lambda / sin_sigma;
    const double cos_sq_alpha = 1.0 - sin_alpha * sin_alpha;
    const double cos_2sm =
        cos_sq_alpha == 0.0 ? 0.0
                            : cos_sigma - 2.0 * sin_u1_sin_u2 / cos_sq_alpha;

    const double u_squared = cos_sq_alpha * a_sq_minus_b_sq_over_b_sq;
    big_a = 1.0 + (u_squared / 16384.0) *
                      (4096.0 + u_squared *
                                    (-768.0 + u_squared *
                                                  (320.0 - 175.0 * u_squared)));
    const double big_b =
        (u_squared / 1024.0) *
        (256.0 + u_squared * (-128.0 + u_squared * (74.0 - 47.0 * u_squared)));
    const double big_c =
        (f / 16.0) * cos_sq_alpha * (4.0 + f * (4.0 - 3.0 * cos_sq_alpha));
    const double cos_2sm_sq = cos_2sm * cos_2sm;
    delta_sigma =
        big_b * sin_sigma *
        (cos_2sm +
         (big_b / 4.0) *
             (cos_sigma * (-1.0 + 2.0 * cos_2sm_sq) -
              (big_b / 6.0) * cos_2sm * (-3.0 + 4.0 * sin_sigma * sin_sigma) *
                  (-3.0 + 4.0 * cos_2sm_sq)));

    lambda = big_l +
             (1.0 - big_c) * f * sin_alpha *
                 (sigma + big_c * sin_sigma *
                              (cos_2sm + big_c * cos_sigma *
                                             (-1.0 + 2.0 * cos_2sm * cos_2sm)));

    const double delta = lambda == 0.0 ? 0.0 : (lambda - lambda_orig) / lambda;
    if (std::abs(delta) < 1.0e-12) {
      break;
    }
  }

  return static_cast<float>(b * big_a * (sigma - delta_sigma));
}

}  // namespace mobility::geo
