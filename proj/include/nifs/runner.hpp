#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

// Config-driven orchestration behind the nifs-atlas command line.
namespace nifs::runner {

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;  // overrides a seed given in the config
    unsigned threads = 0;               // 0: hardware concurrency
};

struct RunResult {
    std::string summary;  // one line
    std::vector<std::filesystem::path> artifacts;
};

inline const std::vector<std::string> kActions{"pieces", "certify", "dichotomy", "render", "sample", "invariance"};

/// Validates and runs a JSON config. `action` must match the config's
/// "action" key when both are present. Errors are nifs::Error with
/// ErrorKind::config for schema problems.
RunResult run_config(std::string_view json_text, std::string_view action, const RunOptions& options);

struct Preset {
    std::string name;
    std::string description;
};

std::vector<Preset> presets();

RunResult run_preset(std::string_view name, const RunOptions& options);

} // namespace nifs::runner
