#include "fraclog/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fraclog/special_functions.hpp"

namespace fraclog {

namespace {

enum class Kind { real, integer, list, word };

struct Key {
    Kind kind;
    std::optional<ConfigValue> fallback;
    std::vector<std::string> words;  // allowed values for Kind::word, empty = any
};

using Schema = std::map<std::string, Key>;

Key real(double v) { return {Kind::real, v, {}}; }
Key real_opt() { return {Kind::real, std::nullopt, {}}; }
Key integer(long v) { return {Kind::integer, v, {}}; }
Key list(std::vector<double> v) { return {Kind::list, std::move(v), {}}; }
Key list_opt() { return {Kind::list, std::nullopt, {}}; }
Key word(std::string v, std::vector<std::string> allowed) { return {Kind::word, std::move(v), std::move(allowed)}; }

void add_coefficients(Schema& s, bool with_b = true) {
    s["a_inf"] = real(1.0);
    s["a_amp"] = real(0.0);
    if (with_b) {
        s["b_inf"] = real(1.0);
        s["b_amp"] = real(0.0);
    }
}

void add_exterior(Schema& s) {
    s["exterior"] = word("zero", {"zero", "constant", "power_decay", "gaussian_bump", "cosine"});
    s["exterior_c"] = real(1.0);
    s["exterior_s"] = real(2.0);
    s["exterior_sigma"] = real(1.0);
    s["exterior_k"] = real(1.0);
}

const std::map<std::string, Schema>& schemas() {
    static const std::map<std::string, Schema> all = [] {
        std::map<std::string, Schema> m;
        const Schema common{{"alpha", real(0.5)}, {"output_dir", {Kind::word, std::nullopt, {}}}};

        Schema ctau = common;
        ctau["points"] = integer(50);
        ctau["tau_min"] = real(-0.99);
        ctau["tau_max"] = real(-0.01);
        m["ctau"] = ctau;

        Schema solve = common;
        solve["p"] = real(2.5);
        solve["mu"] = real(100.0);
        solve["R"] = real(1.0);
        solve["h"] = real(0.01);
        solve["L"] = real_opt();
        solve["tol"] = real(1e-9);
        solve["max_iter"] = integer(20000);
        solve["method"] = word("newton", {"newton", "monotone_sub", "monotone_super"});
        add_coefficients(solve);
        add_exterior(solve);
        m["solve"] = solve;

        Schema eigen = common;
        eigen["R"] = real(1.0);
        eigen["h"] = real(0.01);
        eigen["L"] = real_opt();
        eigen["radii"] = list_opt();
        eigen["h_rel"] = real(0.01);
        add_coefficients(eigen, false);
        m["eigen"] = eigen;

        Schema blowup = common;
        blowup["p"] = real(2.5);
        blowup["mu"] = real(1.0);
        blowup["R"] = real(1.0);
        blowup["h"] = real(0.002);
        blowup["L"] = real_opt();
        blowup["delta"] = real(0.25);
        blowup["caps"] = list({1e1, 1e2, 1e3, 1e4, 1e5, 1e6});
        blowup["pin_cells"] = real(2.0);
        blowup["window_min"] = real_opt();
        blowup["window_max"] = real_opt();
        blowup["tol"] = real(1e-10);
        add_coefficients(blowup);
        add_exterior(blowup);
        m["blowup"] = blowup;

        Schema squeeze = common;
        squeeze["p"] = real(2.5);
        squeeze["lambda"] = real(1.0);
        squeeze["radii"] = list({2, 4, 8, 16});
        squeeze["h_rel"] = real(1.0 / 200.0);
        squeeze["caps"] = list({1e1, 1e2, 1e3, 1e4, 1e5, 1e6});
        squeeze["w_exterior"] = word("constant", {"constant", "zero"});
        squeeze["tol"] = real(1e-9);
        m["squeeze"] = squeeze;

        Schema balls = common;
        balls["p"] = real(2.5);
        balls["lambda"] = real(1.0);
        balls["radii"] = list({2, 4, 8});
        balls["h"] = real(0.02);
        balls["tol"] = real(1e-9);
        add_coefficients(balls);
        m["balls"] = balls;

        Schema tail = common;
        tail["p"] = real(2.5);
        tail["lambda"] = real(1.0);
        tail["R"] = real(16.0);
        tail["h"] = real(0.04);
        tail["tol"] = real(1e-9);
        add_coefficients(tail);
        m["tail"] = tail;
        return m;
    }();
    return all;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_real(const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const char* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<long> parse_integer(const std::string& text) {
    const std::string t = trim(text);
    long v = 0;
    const char* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc() || ptr != end) return std::nullopt;
    return v;
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_value(const ConfigValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_real(x);
            } else if constexpr (std::is_same_v<T, long>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, std::vector<double>>) {
                std::string s;
                for (std::size_t k = 0; k < x.size(); ++k) s += (k ? "," : "") + format_real(x[k]);
                return s;
            } else {
                return x;
            }
        },
        v);
}

// lambda and mu name the same growth parameter; each command has one canonical spelling.
std::string canonical_key(const std::string& command, const std::string& key) {
    const Schema& s = schemas().at(command);
    if (key == "lambda" && !s.count("lambda") && s.count("mu")) return "mu";
    if (key == "mu" && !s.count("mu") && s.count("lambda")) return "lambda";
    return key;
}

}  // namespace

const std::vector<std::string> commands{"ctau", "solve", "eigen", "blowup", "squeeze", "balls", "tail"};

double RunConfig::real(const std::string& key) const { return std::get<double>(params.at(key)); }
long RunConfig::integer(const std::string& key) const { return std::get<long>(params.at(key)); }
const std::vector<double>& RunConfig::list(const std::string& key) const {
    return std::get<std::vector<double>>(params.at(key));
}
const std::string& RunConfig::word(const std::string& key) const { return std::get<std::string>(params.at(key)); }

ParseResult parse_config(const std::vector<std::string>& args, const std::optional<std::string>& file_text) {
    ParseResult out;
    std::vector<std::pair<std::string, std::string>> pairs;  // file first, so later CLI pairs win
    std::string command;

    if (file_text) {
        std::istringstream in(*file_text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                out.errors.push_back("config line " + std::to_string(lineno) + ": expected `key = value`");
                continue;
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key == "command")
                command = value;
            else
                pairs.emplace_back(key, value);
        }
    }
    std::size_t first = 0;
    if (!args.empty() && args[0].find('=') == std::string::npos) {
        command = args[0];
        first = 1;
    }
    for (std::size_t k = first; k < args.size(); ++k) {
        const auto eq = args[k].find('=');
        if (eq == std::string::npos || eq == 0) {
            out.errors.push_back("argument `" + args[k] + "` is not of the form key=value");
            continue;
        }
        pairs.emplace_back(trim(args[k].substr(0, eq)), trim(args[k].substr(eq + 1)));
    }
    if (command.empty()) {
        out.errors.push_back("no command given; expected one of ctau, solve, eigen, blowup, squeeze, balls, tail");
        return out;
    }
    if (!schemas().count(command)) {
        out.errors.push_back("unknown command `" + command + "`");
        return out;
    }

    const Schema& schema = schemas().at(command);
    RunConfig cfg;
    cfg.command = command;
    for (const auto& [raw_key, value] : pairs) {
        const std::string key = canonical_key(command, raw_key);
        const auto it = schema.find(key);
        if (it == schema.end()) {
            out.errors.push_back("unknown key `" + raw_key + "` for command " + command);
            continue;
        }
        const Key& spec = it->second;
        switch (spec.kind) {
            case Kind::real:
                if (const auto v = parse_real(value))
                    cfg.params[key] = *v;
                else
                    out.errors.push_back(key + ": `" + value + "` is not a finite real number");
                break;
            case Kind::integer:
                if (const auto v = parse_integer(value))
                    cfg.params[key] = *v;
                else
                    out.errors.push_back(key + ": `" + value + "` is not an integer");
                break;
            case Kind::list: {
                std::vector<double> xs;
                std::istringstream in(value);
                std::string item;
                bool ok = !value.empty();
                while (std::getline(in, item, ',')) {
                    if (const auto v = parse_real(item))
                        xs.push_back(*v);
                    else
                        ok = false;
                }
                if (ok)
                    cfg.params[key] = std::move(xs);
                else
                    out.errors.push_back(key + ": `" + value + "` is not a comma-separated list of finite reals");
                break;
            }
            case Kind::word:
                if (spec.words.empty() || std::find(spec.words.begin(), spec.words.end(), value) != spec.words.end()) {
                    cfg.params[key] = value;
                } else {
                    std::string allowed;
                    for (const auto& w : spec.words) allowed += (allowed.empty() ? "" : ", ") + w;
                    out.errors.push_back(key + ": `" + value + "` is not one of " + allowed);
                }
                break;
        }
    }
    for (const auto& [key, spec] : schema)
        if (!cfg.params.count(key) && spec.fallback) cfg.params[key] = *spec.fallback;

    // Range checks on what parsed.
    auto present = [&](const char* k) { return cfg.params.count(k) && std::holds_alternative<double>(cfg.params[k]); };
    if (present("alpha") && !(cfg.real("alpha") > 0.0 && cfg.real("alpha") < 1.0))
        out.errors.push_back("alpha must lie in (0, 1)");
    if (present("p") && !(cfg.real("p") > 1.0)) out.errors.push_back("p must exceed 1");
    for (const char* k : {"mu", "lambda", "R", "h", "h_rel", "delta", "tol", "pin_cells"})
        if (present(k) && !(cfg.real(k) > 0.0)) out.errors.push_back(std::string(k) + " must be positive");
    if ((command == "blowup" || command == "squeeze") && present("alpha") && present("p")) {
        const double a = cfg.real("alpha"), p = cfg.real("p");
        if (a > 0.0 && a < 1.0 && !admissible_p(p, a)) {
            std::ostringstream os;
            os << "p=" << p << " is outside the admissible window (" << 1.0 + 2.0 * a << ", " << (1.0 + a) / (1.0 - a)
               << ") for alpha=" << a;
            out.errors.push_back(os.str());
        }
    }
    if (out.errors.empty()) out.config = std::move(cfg);
    return out;
}

std::string to_text(const RunConfig& config) {
    std::string s = "command = " + config.command + "\n";
    for (const auto& [k, v] : config.params) s += k + " = " + format_value(v) + "\n";
    return s;
}

std::string config_hash(const RunConfig& config) {
    RunConfig c = config;
    c.params.erase("output_dir");
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : to_text(c)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_csv(const Table& table) {
    std::string s;
    for (std::size_t k = 0; k < table.columns.size(); ++k) s += (k ? "," : "") + table.columns[k];
    s += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) s += (k ? "," : "") + format_real(row[k]);
        s += "\n";
    }
    return s;
}

std::string manifest_json(const RunManifest& m) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["command"] = m.config.command;
    ordered_json cfg = ordered_json::object();
    for (const auto& [k, v] : m.config.params)
        std::visit([&](const auto& x) { cfg[k] = x; }, v);
    j["config"] = cfg;
    j["config_hash"] = config_hash(m.config);
    j["status"] = m.status;
    if (!m.failure_stage.empty()) j["failure_stage"] = m.failure_stage;
    if (!m.error.empty()) j["error"] = m.error;
    ordered_json derived = ordered_json::object();
    for (const auto& [k, v] : m.derived) derived[k] = std::isfinite(v) ? ordered_json(v) : ordered_json(format_real(v));
    j["derived"] = derived;
    ordered_json stages = ordered_json::array();
    for (const Stage& s : m.stages) stages.push_back({{"name", s.name}, {"converged", s.converged}, {"detail", s.detail}});
    j["stages"] = stages;
    j["notes"] = m.notes;
    j["outputs"] = m.outputs;
    j["wall_seconds"] = m.wall_seconds;
    j["timestamp"] = m.timestamp;
    j["version"] = "0.1.0";
    return j.dump(2) + "\n";
}

namespace {

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out) fail(ErrorKind::io, "failed writing " + path.string());
}

}  // namespace

RunManifest write_outputs(const std::vector<Table>& tables, RunManifest manifest, const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path root(dir.empty() ? "." : dir);
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec || !fs::is_directory(root)) fail(ErrorKind::io, "cannot create output directory " + root.string());
    if (manifest.timestamp.empty()) manifest.timestamp = utc_timestamp();
    const std::string stem = manifest.config.command + "_" + manifest.timestamp + "_" + config_hash(manifest.config);
    manifest.outputs.clear();
    for (const Table& t : tables) {
        const fs::path path = root / (stem + (t.suffix.empty() ? "" : "_" + t.suffix) + ".csv");
        write_file(path, format_csv(t));
        manifest.outputs.push_back(path.filename().string());
    }
    for (const auto& [name, values] : manifest.summaries) {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (const auto& [k, v] : values) j[k] = v;
        const fs::path path = root / (stem + "_" + name + ".json");
        write_file(path, j.dump(2) + "\n");
        manifest.outputs.push_back(path.filename().string());
    }
    const fs::path mpath = root / (stem + ".json");
    manifest.outputs.push_back(mpath.filename().string());
    write_file(mpath, manifest_json(manifest));
    return manifest;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::configuration:
        case ErrorKind::admissibility:
        case ErrorKind::domain:
        case ErrorKind::precondition:
            return 2;
        case ErrorKind::io:
            return 4;
        default:
            return 3;
    }
}

}  // namespace fraclog
