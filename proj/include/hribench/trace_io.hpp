#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hribench/engine.hpp"

namespace hribench {

// JSONL record layout (one object per line, keys in this order):
//   step, t_ms, robot{x,y,heading}, pedestrians[{x,y,r}], readings[6 x (cm|null)],
//   arm{servo1,servo2,reacting}, command{arm:{servo1,servo2}|null, base:"+N"|...|null},
//   phase, latched_sensor (1..6|null), dist_cm (number|null)
nlohmann::ordered_json to_json(const TraceRecord& record);
TraceRecord record_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const SafetyMetrics& metrics);
SafetyMetrics metrics_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const MetricsParams& params);
MetricsParams metrics_params_from_json(const nlohmann::json& j);

void write_jsonl(std::ostream& out, std::span<const TraceRecord> trace);
std::string to_jsonl(std::span<const TraceRecord> trace);
std::vector<TraceRecord> parse_jsonl(std::string_view text);
std::vector<TraceRecord> read_jsonl(const std::filesystem::path& path);

/// Header: step,t_ms,robot_x,robot_y,ped_x,ped_y,dist_cm,arm_reacting,s1,...,s6.
/// ped_x/ped_y are pedestrian 0; out-of-range readings and absent values are empty cells.
void write_csv(std::ostream& out, std::span<const TraceRecord> trace);

void write_path_csv(std::ostream& out, std::span<const TraceRecord> trace);
void write_distance_csv(std::ostream& out, std::span<const TraceRecord> trace);
void write_arm_flag_csv(std::ostream& out, std::span<const TraceRecord> trace);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace hribench
