#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fraclog/errors.hpp"

namespace fraclog {

/// Parameter values: reals, integers, comma-separated real lists, or words.
using ConfigValue = std::variant<double, long, std::vector<double>, std::string>;

struct RunConfig {
    std::string command;
    std::map<std::string, ConfigValue> params;

    bool has(const std::string& key) const { return params.count(key) != 0; }
    double real(const std::string& key) const;
    long integer(const std::string& key) const;
    const std::vector<double>& list(const std::string& key) const;
    const std::string& word(const std::string& key) const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ParseResult {
    std::optional<RunConfig> config;
    std::vector<std::string> errors;
};

extern const std::vector<std::string> commands;

/**
 * Parses `command key=value ...`. file_text, if given, holds `key = value` lines with `#`
 * comments; command-line pairs override it. Every problem is collected, not just the first.
 * Defaults are filled in for the command, and p is checked against the admissible window
 * for blowup and squeeze.
 */
ParseResult parse_config(const std::vector<std::string>& args, const std::optional<std::string>& file_text = {});

/// `key = value` lines (command first) that parse back to the same config.
std::string to_text(const RunConfig& config);

/// FNV-1a of to_text without output_dir, as 16 hex digits.
std::string config_hash(const RunConfig& config);

struct Table {
    std::string suffix;  // empty for the main table
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Stage {
    std::string name;
    bool converged = false;
    std::string detail;
};

struct RunManifest {
    RunConfig config;
    std::string status = "ok";
    std::string failure_stage;
    std::string error;
    std::map<std::string, double> derived;
    std::vector<Stage> stages;
    std::vector<std::string> notes;
    std::vector<std::string> outputs;
    /// Small JSON side files, written as `<stem>_<name>.json` (e.g. the blow-up rate fit).
    std::map<std::string, std::map<std::string, double>> summaries;
    double wall_seconds = 0.0;
    std::string timestamp;
};

/// CSV text: header line, then rows with 17 significant digits, `nan` for NaN, `\n` endings.
std::string format_csv(const Table& table);

/**
 * Writes `<command>_<timestamp>_<hash>[_suffix].csv` per table, the summaries, and the manifest
 * `<command>_<timestamp>_<hash>.json` into dir (created if missing). Throws an io error naming
 * the path if anything cannot be written. Returns the manifest with the output list filled in.
 */
RunManifest write_outputs(const std::vector<Table>& tables, RunManifest manifest, const std::string& dir);

/// Manifest as pretty-printed JSON.
std::string manifest_json(const RunManifest& manifest);

/// Runs a parsed command and returns its tables. Solver errors propagate as fraclog::Error;
/// derived quantities and stages completed so far are recorded in manifest either way.
std::vector<Table> run_command(const RunConfig& config, RunManifest& manifest);

/// Process exit code for an error kind: 2 for bad input, 3 for numerical failure, 4 for io.
int exit_code(ErrorKind kind);

/// Environment variable naming the default output directory.
inline constexpr const char* output_dir_env = "FRACLOG_OUTPUT_DIR";

}  // namespace fraclog
