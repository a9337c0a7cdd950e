#pragma once

#include <map>
#include <optional>
#include <string>

#include <codazzi/named_examples.hpp>
#include <codazzi/report.hpp>

namespace codazzi::cli {

/// A run configuration: exactly one metric source (named example, inline
/// family, or raw component expressions), plus grid, probe, tolerances, seed
/// and output options. Field names mirror the config-file keys.
struct RunConfig {
    // metric source (exactly one)
    std::optional<std::string> example_id;
    std::optional<double> lambda;               // with mu_text: inline family
    std::optional<std::string> mu_text;
    std::map<std::string, std::string> raw_g;   // "tt" -> expression text
    std::map<std::string, std::string> raw_a;

    std::optional<Chart> chart;                 // required for family/raw sources
    std::optional<GridSpec> grid;
    std::optional<Point> probe;

    // characteristics command inputs
    std::optional<double> char_a, char_b, char_c;

    Tolerances tol;
    unsigned seed = 0;
    std::string out_dir;
    std::string format = "json"; // json | csv | both
};

/// Everything a command needs, resolved from a RunConfig.
struct ResolvedRun {
    std::string source_id; // example id or "inline"
    MetricField g;
    SymTensorField A;
    GridSpec grid_spec;
    Point probe;
    std::optional<FamilyInstance> family;
};

/// Parse the key = value section format. Unknown sections/keys, duplicate
/// metric sources, or malformed values raise ConfigError with a line number.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

ResolvedRun resolve(const RunConfig& cfg);

/// Serialize a config so that re-importing it reproduces the identical run.
/// Named examples are exported in resolved (inline) form. Floats print with
/// 17 significant digits for lossless round-trips.
std::string export_config(const RunConfig& cfg);

} // namespace codazzi::cli
