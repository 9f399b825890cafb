#pragma once

#include <span>

#include "mobility/config.hpp"
#include "mobility/types.hpp"

namespace mobility::metrics {

/// Calories burned over a walking interval from the MET table: the slow
/// ratio below the threshold speed, the fast one at or above it.
/// 1 MET = 1 kcal per kg per hour.
double calories_kcal(double duration_s, double speed_kmh, double weight_kg,
                     const PipelineConfig& config);

/// Grams of CO2 a car would have emitted over the same distance.
double co2_saved_g(double distance_m, const PipelineConfig& config);

struct DayTotals {
  double kcal = 0.0;
  double co2_g = 0.0;
};

/// Calories summed over walking segments; CO2 over metro, bus, tram and
/// train segments. Private vehicles and bicycles contribute to neither.
DayTotals daily_totals(std::span<const Segment> segments, double weight_kg,
                       const PipelineConfig& config);

}  // namespace mobility::metrics
