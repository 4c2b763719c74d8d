// fraclog: command-line front end.
//
//   fraclog <command> [key=value ...] [--config FILE] [--output-dir DIR]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fraclog/cli_io.hpp"
#include "fraclog/errors.hpp"

namespace {

std::string output_dir(const fraclog::RunConfig& cfg) {
    if (cfg.has("output_dir")) return cfg.word("output_dir");
    if (const char* env = std::getenv(fraclog::output_dir_env)) return env;
    return ".";
}

// A manifest is written even when the run fails; if that is impossible too, say so and move on.
void write_failure(const std::vector<fraclog::Table>& tables, const fraclog::RunManifest& m, const std::string& dir) {
    try {
        const fraclog::RunManifest written = fraclog::write_outputs(tables, m, dir);
        std::cerr << "manifest: " << written.outputs.back() << "\n";
    } catch (const fraclog::Error& e) {
        std::cerr << "could not write manifest: " << e.what() << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional logistic equation laboratory"};
    app.require_subcommand(1);
    std::string config_file;
    std::string out_flag;
    app.add_option("-c,--config", config_file, "Config file with `key = value` lines")->check(CLI::ExistingFile);
    app.add_option("-o,--output-dir", out_flag, "Output directory (default: $FRACLOG_OUTPUT_DIR or .)");

    const std::map<std::string, std::string> help{
        {"ctau", "Tabulate the barrier integral C(tau)"},
        {"solve", "Solve the logistic Dirichlet problem"},
        {"eigen", "First eigenpair and eigenvalue scaling"},
        {"blowup", "Boundary blow-up solution and rate fit"},
        {"squeeze", "Sub/super squeezing table over radii"},
        {"balls", "Increasing-ball solutions with variable coefficients"},
        {"tail", "Tail profile against the limit plateau"},
    };
    std::vector<std::string> pairs;
    for (const std::string& name : fraclog::commands) {
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("params", pairs, "key=value pairs");
        sub->fallthrough();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::vector<std::string> args{app.get_subcommands().front()->get_name()};
    args.insert(args.end(), pairs.begin(), pairs.end());
    if (!out_flag.empty()) args.push_back("output_dir=" + out_flag);

    std::optional<std::string> file_text;
    if (!config_file.empty()) {
        std::ifstream in(config_file);
        std::ostringstream ss;
        ss << in.rdbuf();
        if (!in) {
            std::cerr << "cannot read config file " << config_file << "\n";
            return 4;
        }
        file_text = ss.str();
    }

    const fraclog::ParseResult parsed = fraclog::parse_config(args, file_text);
    if (!parsed.config) {
        fraclog::RunManifest m;
        m.config.command = args.front();
        m.status = "failed";
        m.failure_stage = "parse_config";
        for (const std::string& err : parsed.errors) {
            std::cerr << "config error: " << err << "\n";
            m.error += (m.error.empty() ? "" : "; ") + err;
        }
        const char* env = std::getenv(fraclog::output_dir_env);
        write_failure({}, m, !out_flag.empty() ? out_flag : env ? env : ".");
        return 2;
    }

    const fraclog::RunConfig& cfg = *parsed.config;
    const std::string dir = output_dir(cfg);
    fraclog::RunManifest manifest;
    manifest.config = cfg;
    const auto start = std::chrono::steady_clock::now();
    std::vector<fraclog::Table> tables;
    try {
        tables = fraclog::run_command(cfg, manifest);
    } catch (const fraclog::Error& e) {
        manifest.status = "failed";
        manifest.failure_stage = manifest.stages.empty() ? cfg.command : "after " + manifest.stages.back().name;
        manifest.error = std::string(fraclog::to_string(e.kind())) + ": " + e.what();
        manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cerr << manifest.error << "\n";
        write_failure({}, manifest, dir);
        return fraclog::exit_code(e.kind());
    } catch (const std::exception& e) {
        manifest.status = "failed";
        manifest.failure_stage = cfg.command;
        manifest.error = e.what();
        std::cerr << "error: " << e.what() << "\n";
        write_failure({}, manifest, dir);
        return 3;
    }
    manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    try {
        const fraclog::RunManifest written = fraclog::write_outputs(tables, manifest, dir);
        for (const std::string& f : written.outputs) std::cout << dir << "/" << f << "\n";
    } catch (const fraclog::Error& e) {
        std::cerr << e.what() << "\n";
        return 4;
    }
    return 0;
}
