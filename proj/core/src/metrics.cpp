#include "mobility/metrics.hpp"

#include <stdexcept>

namespace mobility::metrics {

double calories_kcal(double duration_s, double speed_kmh, double weight_kg,
                     const PipelineConfig& config) {
  if (duration_s < 0.0) {
    throw std::invalid_argument("duration must be non-negative");
  }
  if (!(weight_kg > 0.0)) {
    throw std::invalid_argument("weight must be positive");
  }
  const double met = speed_kmh < config.met_speed_threshold_kmh
                         ? config.met_slow
                         : config.met_fast;
  return met * weight_kg * duration_s / 3600.0;
}

double co2_saved_g(double distance_m, const PipelineConfig& config) {
  if (distance_m < 0.0) {
    throw std::invalid_argument("distance must be non-negative");
  }
  return config.co2_g_per_km * distance_m / 1000.0;
}

DayTotals daily_totals(std::span<const Segment> segments, double weight_kg,
                       const PipelineConfig& config) {
  DayTotals totals;
  for (const auto& segment : segments) {
    if (segment.activity() == ActivityLabel::OnFoot) {
      totals.kcal +=
          calories_kcal(static_cast<double>(segment.total_duration_s()),
                        segment.average_speed_kmh(), weight_kg, config);
    } else if (is_transit(segment.activity())) {
      totals.co2_g += co2_saved_g(segment.total_distance_m(), config);
    }
  }
  return totals;
}

}  // namespace mobility::metrics
