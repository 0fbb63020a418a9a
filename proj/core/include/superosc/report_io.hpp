#pragma once

#include "superosc/experiments.hpp"

#include <string>

namespace superosc {

/// JSON renderings of reports. Complex numbers appear as [re, im] pairs;
/// every physical quantity is serialized in the config's own units.
std::string to_json(const ExperimentReport& report, int indent = 2);
std::string to_json(const SweepResult& sweep, int indent = 2);

/// CSV with a header row; the first column is the axis, strictly increasing
/// with constant step.
void write_csv(const SampleTable& table, const std::string& path);

}  // namespace superosc
