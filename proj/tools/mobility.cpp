// Batch front end: simulate traces, turn them into recognized segment
// files, compute daily metrics and push files to an upload backend.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mobility/config.hpp"
#include "mobility/metrics.hpp"
#include "mobility/network.hpp"
#include "mobility/pipeline.hpp"
#include "mobility/simulate.hpp"
#include "mobility/store.hpp"
#include "mobility/transit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitIo = 3;

namespace fs = std::filesystem;
using namespace mobility;

/// Station database plus, when available, line orders from the same file
/// or a sibling line_orders.json.
TransitNetwork load_network_for_cli(const fs::path& stations_path) {
  TransitNetwork network = load_stations(stations_path);

  std::ifstream probe(stations_path);
  const nlohmann::json doc = nlohmann::json::parse(probe);
  if (doc.contains("line_orders")) {
    for (const auto& [line, names] : doc.at("line_orders").items()) {
      std::vector<std::string> order;
      for (const auto& name : names) {
        order.push_back(name.get<std::string>());
      }
      network.line_orders[line] = std::move(order);
    }
    return network;
  }

  const fs::path sibling = stations_path.parent_path() / "line_orders.json";
  if (fs::exists(sibling)) {
    load_line_orders(sibling, network);
  }
  return network;
}

std::string date_from_filename(const fs::path& path) {
  static const std::regex kDate("([0-9]{2}-[0-9]{2}-[0-9]{4})");
  std::smatch match;
  const std::string name = path.filename().string();
  if (std::regex_search(name, match, kDate)) {
    return match[1];
  }
  return "-";
}

int cmd_simulate(const std::string& scenario_path, const std::string& preset,
                 std::optional<std::uint64_t> seed, const fs::path& out) {
  sim::Scenario scenario;
  if (!preset.empty()) {
    scenario = sim::preset(preset);
  } else {
    scenario = sim::load_scenario(scenario_path);
  }
  if (seed) {
    scenario.seed = *seed;
  }
  sim::generate_to_file(scenario, out);
  std::printf("wrote %s\n", out.string().c_str());
  return kExitOk;
}

int cmd_process(const fs::path& trace_path, const std::string& config_path,
                const std::string& network_path, const std::string& schedule_path,
                const fs::path& out) {
  PipelineConfig config;
  if (!config_path.empty()) {
    config = load_config(config_path);
  }

  TransitNetwork network;
  if (!network_path.empty()) {
    network = load_network_for_cli(network_path);
  }

  std::vector<ScheduleTrip> schedule;
  if (!schedule_path.empty()) {
    schedule = load_schedule(schedule_path);
  }

  const auto trace = read_trace(trace_path);
  RunResult run = run_trace(trace, config, &network);
  const auto segments =
      transit::post_process(run.segments, schedule, network, config);

  store::write_segments(out, segments);
  write_event_log(fs::path(out.string() + ".log"), run.events);
  std::printf("wrote %s (%zu segments) and %s.log (%zu events)\n",
              out.string().c_str(), segments.size(), out.string().c_str(),
              run.events.size());
  return kExitOk;
}

int cmd_stats(const fs::path& segments_path, double weight_kg) {
  const auto segments = store::read_segments(segments_path);
  PipelineConfig config;
  const auto totals = metrics::daily_totals(segments, weight_kg, config);

  store::DailyStats stats;
  stats.set(date_from_filename(segments_path), totals.kcal, totals.co2_g);
  std::fputs(stats.to_csv().c_str(), stdout);
  return kExitOk;
}

int cmd_export_geojson(const fs::path& segments_path, const fs::path& out) {
  const auto segments = store::read_segments(segments_path);
  std::ofstream stream(out);
  if (!stream) {
    throw std::runtime_error("cannot write: " + out.string());
  }
  stream << store::segments_to_geojson(segments);
  std::printf("wrote %s (%zu features)\n", out.string().c_str(),
              segments.size());
  return kExitOk;
}

int cmd_upload(const fs::path& segments_path, const std::string& destination,
               const fs::path& id_file) {
  store::UserIdentity identity;
  bool have_identity = false;
  if (fs::exists(id_file)) {
    std::ifstream in(id_file);
    std::getline(in, identity.id_hex);
    try {
      store::validate_identity(identity);
      have_identity = true;
    } catch (const std::exception&) {
      have_identity = false;  // regenerate a corrupt id
    }
  }
  if (!have_identity) {
    identity = store::generate_identity();
    std::ofstream out(id_file);
    if (!out) {
      throw std::runtime_error("cannot write id file: " + id_file.string());
    }
    out << identity.id_hex << '\n';
  }

  const auto result = store::upload(segments_path, destination, identity);
  if (!result.ok) {
    std::fprintf(stderr, "upload failed: %s\n", result.error.c_str());
    return kExitIo;
  }
  std::printf("uploaded to %s\n", result.target.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobility trace segmentation and transport recognition"};
  app.require_subcommand(1);

  // simulate
  std::string scenario_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic trace");
  simulate->add_option("scenario", scenario_path, "Scenario JSON file");
  simulate->add_option("--preset", preset_name, "Preset name (journey1..journey5)");
  simulate->add_option("--seed", seed, "Override the scenario seed");
  simulate->add_option("--out", sim_out, "Output trace path")->required();

  // process
  std::string trace_path;
  std::string config_path;
  std::string network_path;
  std::string schedule_path;
  std::string process_out;
  auto* process = app.add_subcommand("process", "Segment a trace and recognize transport");
  process->add_option("trace", trace_path, "Input trace file")->required();
  process->add_option("--config", config_path, "Pipeline config JSON");
  process->add_option("--network", network_path, "Station database JSON");
  process->add_option("--schedule", schedule_path, "Bus/tram schedule JSON");
  process->add_option("--out", process_out, "Output segment file")->required();

  // stats
  std::string stats_path;
  double weight_kg = 0.0;
  auto* stats = app.add_subcommand("stats", "Daily calories and CO2 totals as CSV");
  stats->add_option("segments", stats_path, "Segment JSON file")->required();
  stats->add_option("--weight", weight_kg, "Rider weight in kg")->required();

  // export-geojson
  std::string geojson_in;
  std::string geojson_out;
  auto* geojson = app.add_subcommand("export-geojson", "Segments as a GeoJSON FeatureCollection");
  geojson->add_option("segments", geojson_in, "Segment JSON file")->required();
  geojson->add_option("--out", geojson_out, "Output GeoJSON path")->required();

  // upload
  std::string upload_path;
  std::string destination;
  std::string id_file;
  auto* upload = app.add_subcommand("upload", "Push a segment file to an upload backend");
  upload->add_option("segments", upload_path, "Segment JSON file")->required();
  upload->add_option("--dest", destination, "Directory or http(s) base URL")->required();
  upload->add_option("--id-file", id_file, "Path holding the anonymous user id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      if (preset_name.empty() == scenario_path.empty()) {
        std::fprintf(stderr, "simulate needs a scenario file or --preset\n");
        return kExitUsage;
      }
      return cmd_simulate(scenario_path, preset_name, seed, sim_out);
    }
    if (process->parsed()) {
      return cmd_process(trace_path, config_path, network_path, schedule_path,
                         process_out);
    }
    if (stats->parsed()) {
      return cmd_stats(stats_path, weight_kg);
    }
    if (geojson->parsed()) {
      return cmd_export_geojson(geojson_in, geojson_out);
    }
    if (upload->parsed()) {
      return cmd_upload(upload_path, destination, id_file);
    }
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
  return kExitUsage;
}
