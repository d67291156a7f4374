#pragma once

#include <spiralbrick/column.hpp>
#include <spiralbrick/executor.hpp>
#include <spiralbrick/perception.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace spiralbrick {

/// Fully resolved run configuration. Parsing fills defaults for every
/// omitted optional field and validates all invariants at once.
struct RunConfig {
    ColumnSpec column;
    double lambda = 0.01;  // margins as given, also folded into column.base
    double kappa = 0.05;
    ExecutorConfig executor;
    PerceptionConfig perception;
    ConveyorRegion conveyor;
    int retries = 3;
    std::uint64_t seed = 42;
    std::string out_dir = "spiralbrick_run";
};

/// Parses and validates a config document. ParseError carries the JSON
/// context; ValidationError lists every violated invariant with its path.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

/// Resolved config re-serialized with all defaults filled in.
std::string config_to_json(const RunConfig& config);

std::vector<std::string> preset_names();

/// Built-in configurations covering the five base families with the
/// default brick and executor parameters. "paper_defaults" is the square
/// column preset.
RunConfig preset_config(const std::string& name);

AssemblyConfig assembly_config(const RunConfig& config);

}  // namespace spiralbrick
