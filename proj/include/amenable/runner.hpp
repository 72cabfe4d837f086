#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "amenable/report.hpp"

namespace amenable::runner {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kInvalidConfig = 2,
    kAssertionFailed = 3,
    kResourceCap = 4,
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentInfo {
    std::string kind;
    std::string description;
};

const std::vector<ExperimentInfo>& experiments();

// Validates a raw config and materializes every default. Throws ConfigError.
Json resolve_config(const Json& raw);

// In-memory outputs of one run, keyed by path relative to the results directory.
struct RunArtifacts {
    Json resolved;
    Json results;
    Report verification;
    std::map<std::string, std::string> files;
};

// Runs a resolved config. Throws ResourceCapExceeded and the library errors.
RunArtifacts execute(const Json& resolved);

// summary.json and verification.json contents
std::string summary_json(const RunArtifacts& a);
std::string verification_json(const RunArtifacts& a);

struct RunOutcome {
    int exit_code = kOk;
    std::string message;
    std::filesystem::path results_dir;
};

// Parses, resolves and runs; writes <out>/results/ only after the run
// finished. `out_override` replaces the config's output_dir when nonempty.
RunOutcome run_file(const std::filesystem::path& config, const std::filesystem::path& out_override = {});
RunOutcome run_json(const Json& raw, const std::filesystem::path& out_override = {});

// Re-evaluates every check in a verification.json; exit code 0 or 3.
RunOutcome verify_file(const std::filesystem::path& report);

}  // namespace amenable::runner
