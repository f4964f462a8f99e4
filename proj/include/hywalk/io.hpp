#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hywalk/dehn.hpp"
#include "hywalk/hitting.hpp"

namespace hywalk {

// ---------------------------------------------------------------------------
// Text formats

// Diagram: one row per line, labels space-separated, "inf" for the infinite
// label; an optional leading "dim D" line fixes the ambient dimension
// (default: simplex rule d = m-1, clamped to {2,3}).
CoxeterDiagram parse_diagram(const std::string& text);

// Family file: "dim D" (optional), a "diagram"/"end" block, then
// "edge i j", "n-values 7 10 20 50 inf", "weights p1 ... pm" (1-based edge
// indices; weights accept decimals, fractions like 1/3, or "uniform").
CoxeterFamily parse_family(const std::string& text);

// Measure spec: "uniform-on-generators", "weights p1 ... pm", or lines
// "word : mass" with 1-based generator indices ("1 3 2 : 0.5").
FinSuppMeasure parse_measure(const std::string& spec, const MarkedGroup& g,
                             const Tolerances& tol = default_tolerances());

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
    std::string subcommand;
    // group source: exactly one of these is used
    std::optional<std::array<int, 3>> triangle;  // p, q, n (INF_LABEL allowed)
    std::string group_fixture;                   // sanov | zsquare | axis2
    std::string diagram_file;
    std::string family_file;
    std::string family_fixture;                  // t23n | dihedral6

    std::string measure_spec = "uniform-on-generators";
    int steps = 2000;
    int trials = 4000;
    int k_max = 8;
    int word_radius = 10;
    int bins = 64;
    double escape_radius = 1.0 - 1e-6;
    int max_steps = 100000;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = ".";
    std::map<std::string, double> tol_overrides;

    std::string echo;  // canonical key=value echo embedded in outputs
};

RunConfig parse_config_text(const std::string& text);
void apply_tolerance_overrides(Tolerances& tol, const std::map<std::string, double>& kv);
std::string config_echo(const RunConfig& c);

MarkedGroup resolve_group(const RunConfig& c, const Tolerances& tol);
CoxeterFamily resolve_family(const RunConfig& c);

// ---------------------------------------------------------------------------
// Output

std::string format_double(double v);  // 12 significant digits, locale-free

struct CsvWriter {
    std::string buffer;
    void header_block(const RunConfig& c);        // "# hywalk <version>" etc.
    void row(const std::vector<std::string>& cells);
    void comment(const std::string& line);
};

void write_run_meta(const RunConfig& c, double wall_seconds,
                    const std::vector<std::string>& outputs);

int word_display_base();  // 1-based indices in all text formats

std::string word_to_string(const std::vector<std::uint8_t>& w);

}  // namespace hywalk
