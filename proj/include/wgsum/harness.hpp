#pragma once
// Front end: flag/config parsing, subcommand dispatch, the results log and
// plot-script generation.  All numerics live in the other modules; this one
// moves strings around and maps error classes to exit codes.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace wgsum {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::string subcommand;

    unsigned k = 3;
    double x = 1e5;      // sum-side center, y = x^theta
    double theta = 0.9;
    double delta = 1e-4;
    double epsilon = 0.05;
    double X = 10;       // circle-side window center
    double Y = 3;        //   and half-width
    int s = 2;
    int64_t n = 0;
    int64_t n_hi = -1;   // n_hi < n: single point
    int64_t Q_S = 1000;
    std::string alpha = "1/7"; // "a/q" or "d.ddd@B"; validated where consumed
    int samples = 50;
    uint64_t seed = 1;
    unsigned bits = 320; // fixed-point phase precision

    // execution plumbing, not part of the config hash
    int workers = 0;     // 0 keeps the library default
    std::string method;  // hua: parseval|quadrature; sseries: truncate|euler|both
    std::string out;     // empty: stdout (report: directory)
    std::string log_file = "results.jsonl";
    bool no_log = false;

    bool operator==(const RunConfig&) const = default;
};

// Canonical argv (subcommand first): parse_config(serialize(cfg)) == cfg.
std::vector<std::string> serialize(const RunConfig& cfg);

// FNV-1a over the canonicalized computation parameters, as 16 hex digits.
// Worker count and output/log destinations are excluded: two runs with the
// same hash must produce byte-identical primary output.
std::string config_hash(const RunConfig& cfg);

// argv-style arguments, subcommand first.  --config FILE merges line-based
// "key = value" settings ("#" comments); explicit flags win.  Unknown flags,
// unknown config keys and malformed values are usage errors naming the key.
RunConfig parse_config(const std::vector<std::string>& args);

struct RunOutput {
    std::string csv;     // primary output (markdown for report)
    std::string payload; // JSON object summarizing the run, for the log
    // extra files (relative path, content); only report produces any
    std::vector<std::pair<std::string, std::string>> artifacts;
};

// Dispatches cfg to the module behind its subcommand.  Pure: writes nothing,
// so callers can compare outputs across worker counts.
RunOutput run_config(const RunConfig& cfg);

enum class PlotKind { RatioVsQ, RhoVsN, SeriesConvergence };

// Writes a self-contained matplotlib script that reads csv_path.  The CSV
// header (first non-comment line) must contain the columns the kind plots;
// the error lists any that are missing.
void emit_plot_script(const std::string& csv_path, PlotKind kind,
                      const std::string& script_path);

// $WGSUM_CACHE, or "" when unset (caching disabled).
std::string cache_dir();

// Appends one self-describing record (timestamp, config hash, subcommand,
// payload, version) to the log.
void append_log(const std::string& path, const RunConfig& cfg,
                const std::string& payload);

// Parse, dispatch, write artifacts, log, and map errors to exit codes
// (0 ok, 2 usage, 3 domain, 4 resource, 5 invariant).
int run_cli(int argc, char** argv);

} // namespace wgsum
