#pragma once

#include "weightlab/measure.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace weightlab {

/// {"pieces":[{"a":"p/q","b":"p/q","d":"p/q"}],"atoms":[{"x":"p/q","m":"p/q"}]}
nlohmann::json measure_to_json(const PiecewiseMeasure& mu);
PiecewiseMeasure measure_from_json(const nlohmann::json& j);

void write_measure_file(const std::filesystem::path& path, const PiecewiseMeasure& mu);
PiecewiseMeasure read_measure_file(const std::filesystem::path& path);

/// Writes JSON with a trailing newline; throws InvalidArgument on I/O failure.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace weightlab
