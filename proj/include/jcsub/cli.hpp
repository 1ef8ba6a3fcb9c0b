// Copyright 2026 The jcsub Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cli.hpp - scenario configuration, the run pipeline and result files.

#pragma once

#include "jcsub/analysis.hpp"

#include <json.hpp>

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jcsub::cli {

inline constexpr const char* kSoftwareVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitConfigInvalid = 2,
    kExitCrossCheck = 3,
    kExitIo = 4,
};

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Command-line values that replace config keys of the same name.
struct Overrides {
    std::optional<double> omega, omega0, g, alpha_mag, alpha_phase;
    std::optional<std::string> n_max;  // integer or "auto"
    std::optional<double> uu, ud_re, ud_im, dd;
    std::optional<std::array<double, 3>> grid;  // start, stop, steps
    std::optional<std::vector<std::string>> channels;
    std::optional<bool> oracle;
    std::optional<std::string> format, path;
    std::optional<std::string> id;
};

struct OutputSpec {
    std::string format = "csv";  // csv | json
    std::string path = "jcsub_series.csv";
};

struct ScenarioRun {
    analysis::Scenario scenario;
    nlohmann::ordered_json echo;  // fully resolved config of this scenario
    std::string output_path;
    std::vector<std::string> warnings;
};

struct RunConfig {
    std::vector<ScenarioRun> runs;
    OutputSpec output;
};

/// Parses config text (may be empty: "{}") and applies overrides. Throws
/// ConfigError with a line:column or key-path diagnostic.
RunConfig load_config(const std::string& text, const Overrides& overrides = {});
RunConfig load_config_file(const std::string& path, const Overrides& overrides = {});

std::string emit_csv(const analysis::TimeSeries& series);
// Config-time warnings plus the series-truncation flag raised by the run.
std::vector<std::string> result_warnings(const ScenarioRun& run, const analysis::SeriesResult& result);

nlohmann::ordered_json emit_json(const ScenarioRun& run, const analysis::SeriesResult& result);
/// Inverse of the channel part of emit_json.
analysis::TimeSeries series_from_json(const nlohmann::ordered_json& doc);

/// Writes via a sibling temporary file and rename. Throws IoError.
void write_atomic(const std::string& path, const std::string& content);

/// Runs every scenario and writes its result files. Returns an ExitCode;
/// diagnostics go to `log`.
int run(const RunConfig& config, std::ostream& log);

}  // namespace jcsub::cli
