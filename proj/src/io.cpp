#include "hywalk/io.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hywalk {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        out.push_back(t);
    }
    return out;
}

int parse_label(const std::string& tok) {
    if (tok == "inf" || tok == "infinity" || tok == "oo") return INF_LABEL;
    try {
        return std::stoi(tok);
    } catch (...) {
        throw ConfigError("bad diagram label: " + tok);
    }
}

double parse_weight(const std::string& tok) {
    auto slash = tok.find('/');
    try {
        if (slash != std::string::npos) {
            double num = std::stod(tok.substr(0, slash));
            double den = std::stod(tok.substr(slash + 1));
            if (den == 0) throw ConfigError("weight with zero denominator: " + tok);
            return num / den;
        }
        return std::stod(tok);
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        throw ConfigError("bad weight: " + tok);
    }
}

std::vector<double> parse_weight_list(const std::vector<std::string>& toks, std::size_t m) {
    if (toks.size() == 1 && toks[0] == "uniform")
        return std::vector<double>(m, 1.0 / static_cast<double>(m));
    std::vector<double> w;
    for (const auto& t : toks) w.push_back(parse_weight(t));
    if (!m || w.size() == m) {
        // exact unit total for the uniform-by-fractions case
        double total = 0;
        for (double x : w) total += x;
        if (std::abs(total - 1.0) > 1e-9)
            throw ConfigError("weights sum to " + std::to_string(total) + ", expected 1");
        if (total != 1.0)
            for (double& x : w) x /= total;
        return w;
    }
    throw ConfigError("expected " + std::to_string(m) + " weights");
}

CoxeterDiagram diagram_from_rows(const std::vector<std::vector<std::string>>& rows,
                                 std::optional<int> dim) {
    int m = static_cast<int>(rows.size());
    if (m < 1) throw ConfigError("diagram: no rows");
    int d = dim.value_or(std::min(3, std::max(2, m - 1)));
    auto diag = make_diagram(m, d);
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(rows[i].size()) != m)
            throw ConfigError("diagram: row " + std::to_string(i + 1) + " has " +
                              std::to_string(rows[i].size()) + " entries, expected " +
                              std::to_string(m));
        for (int j = 0; j < m; ++j) diag.label(i, j) = parse_label(rows[i][j]);
    }
    check_diagram(diag);
    return diag;
}

}  // namespace

CoxeterDiagram parse_diagram(const std::string& text) {
    std::optional<int> dim;
    std::vector<std::vector<std::string>> rows;
    for (const auto& line : lines_of(text)) {
        auto toks = split_ws(line);
        if (toks.size() == 2 && toks[0] == "dim") {
            dim = std::stoi(toks[1]);
            continue;
        }
        rows.push_back(toks);
    }
    return diagram_from_rows(rows, dim);
}

CoxeterFamily parse_family(const std::string& text) {
    CoxeterFamily f;
    std::optional<int> dim;
    std::vector<std::vector<std::string>> rows;
    bool in_diagram = false, have_edge = false;
    std::vector<std::string> weight_toks;
    for (const auto& line : lines_of(text)) {
        auto toks = split_ws(line);
        if (in_diagram) {
            if (toks.size() == 1 && toks[0] == "end") {
                in_diagram = false;
                continue;
            }
            rows.push_back(toks);
            continue;
        }
        if (toks[0] == "diagram") {
            in_diagram = true;
        } else if (toks[0] == "dim" && toks.size() == 2) {
            dim = std::stoi(toks[1]);
        } else if (toks[0] == "edge" && toks.size() == 3) {
            f.marked_edge = {std::stoi(toks[1]) - 1, std::stoi(toks[2]) - 1};
            have_edge = true;
        } else if (toks[0] == "n-values") {
            for (std::size_t k = 1; k < toks.size(); ++k)
                f.n_values.push_back(parse_label(toks[k]));
        } else if (toks[0] == "weights") {
            weight_toks.assign(toks.begin() + 1, toks.end());
        } else if (toks[0] == "name" && toks.size() >= 2) {
            f.name = toks[1];
        } else {
            throw ConfigError("family file: unrecognized line: " + line);
        }
    }
    if (in_diagram) throw ConfigError("family file: diagram block not closed with 'end'");
    if (rows.empty()) throw ConfigError("family file: missing diagram block");
    if (!have_edge) throw ConfigError("family file: missing 'edge i j' line");
    if (weight_toks.empty()) throw ConfigError("family file: missing 'weights' line");
    f.base = diagram_from_rows(rows, dim);
    f.weights = parse_weight_list(weight_toks, static_cast<std::size_t>(f.base.size));
    if (f.name.empty()) f.name = "family";
    check_family(f);
    return f;
}

FinSuppMeasure parse_measure(const std::string& spec, const MarkedGroup& g,
                             const Tolerances& tol) {
    auto t = trim(spec);
    if (t == "uniform-on-generators" || t == "uniform") return uniform_on_generators(g, tol);
    auto toks = split_ws(t);
    if (!toks.empty() && toks[0] == "weights") {
        std::vector<std::string> w(toks.begin() + 1, toks.end());
        return measure_from_weights(g, parse_weight_list(w, g.generators.size()), tol);
    }
    // "word : mass" lines
    std::vector<std::pair<std::vector<std::uint8_t>, double>> atoms;
    for (const auto& line : lines_of(t)) {
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ConfigError("measure line needs 'word : mass': " + line);
        std::vector<std::uint8_t> word;
        for (const auto& w : split_ws(line.substr(0, colon))) {
            int idx = std::stoi(w);
            if (idx < 1 || idx > static_cast<int>(g.generators.size()))
                throw ConfigError("measure word index out of range: " + w);
            word.push_back(static_cast<std::uint8_t>(idx - 1));
        }
        atoms.emplace_back(std::move(word), parse_weight(trim(line.substr(colon + 1))));
    }
    if (atoms.empty()) throw ConfigError("empty measure spec");
    return measure_from_words(g, atoms, tol);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    std::vector<std::string> measure_block;
    bool in_measure = false;
    for (const auto& line : lines_of(text)) {
        if (in_measure) {
            if (line == "measure-end") {
                in_measure = false;
                continue;
            }
            measure_block.push_back(line);
            continue;
        }
        if (line == "measure-begin") {
            in_measure = true;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line needs 'key = value': " + line);
        auto key = trim(line.substr(0, eq));
        auto val = trim(line.substr(eq + 1));
        if (key == "seed")
            c.seed = std::stoull(val);
        else if (key == "threads")
            c.threads = std::stoi(val);
        else if (key == "steps")
            c.steps = std::stoi(val);
        else if (key == "trials")
            c.trials = std::stoi(val);
        else if (key == "k-max")
            c.k_max = std::stoi(val);
        else if (key == "word-radius")
            c.word_radius = std::stoi(val);
        else if (key == "bins")
            c.bins = std::stoi(val);
        else if (key == "escape-radius")
            c.escape_radius = std::stod(val);
        else if (key == "max-steps")
            c.max_steps = std::stoi(val);
        else if (key == "out")
            c.out_dir = val;
        else if (key == "measure")
            c.measure_spec = val;
        else if (key == "group")
            c.group_fixture = val;
        else if (key == "diagram-file")
            c.diagram_file = val;
        else if (key == "family-file")
            c.family_file = val;
        else if (key == "family")
            c.family_fixture = val;
        else if (key == "triangle") {
            std::array<int, 3> pqn{};
            std::string v = val;
            for (auto& ch : v)
                if (ch == ',') ch = ' ';
            auto toks = split_ws(v);
            if (toks.size() != 3) throw ConfigError("triangle = p,q,n expects three labels");
            for (int k = 0; k < 3; ++k) pqn[k] = parse_label(toks[k]);
            c.triangle = pqn;
        } else if (key.rfind("tol.", 0) == 0)
            c.tol_overrides[key.substr(4)] = std::stod(val);
        else
            throw ConfigError("unknown config key: " + key);
    }
    if (in_measure) throw ConfigError("config: measure block not closed");
    if (!measure_block.empty()) {
        std::string joined;
        for (const auto& l : measure_block) joined += l + "\n";
        c.measure_spec = joined;
    }
    c.echo = config_echo(c);
    return c;
}

void apply_tolerance_overrides(Tolerances& tol, const std::map<std::string, double>& kv) {
    for (const auto& [k, v] : kv) {
        if (k == "quant_grid")
            tol.quant_grid = v;
        else if (k == "key_audit")
            tol.key_audit = v;
        else if (k == "relation_residual")
            tol.relation_residual = v;
        else if (k == "prune_floor")
            tol.prune_floor = v;
        else if (k == "support_cap")
            tol.support_cap = static_cast<std::size_t>(v);
        else if (k == "ball_cap")
            tol.ball_cap = static_cast<int>(v);
        else if (k == "convolution_cap")
            tol.convolution_cap = static_cast<int>(v);
        else if (k == "entropy_slack")
            tol.entropy_slack = v;
        else if (k == "dist_clamp")
            tol.dist_clamp = v;
        else
            throw ConfigError("unknown tolerance override: tol." + k);
    }
}

std::string config_echo(const RunConfig& c) {
    std::ostringstream os;
    os << "seed=" << c.seed << " threads=" << c.threads << " steps=" << c.steps
       << " trials=" << c.trials << " k-max=" << c.k_max << " word-radius=" << c.word_radius
       << " bins=" << c.bins << " escape-radius=" << format_double(c.escape_radius)
       << " max-steps=" << c.max_steps;
    if (c.triangle)
        os << " triangle=" << (*c.triangle)[0] << "," << (*c.triangle)[1] << ","
           << ((*c.triangle)[2] == INF_LABEL ? std::string("inf")
                                             : std::to_string((*c.triangle)[2]));
    if (!c.group_fixture.empty()) os << " group=" << c.group_fixture;
    if (!c.diagram_file.empty()) os << " diagram-file=" << c.diagram_file;
    if (!c.family_file.empty()) os << " family-file=" << c.family_file;
    if (!c.family_fixture.empty()) os << " family=" << c.family_fixture;
    std::string m = c.measure_spec;
    for (auto& ch : m)
        if (ch == '\n') ch = ';';
    os << " measure=" << m;
    return os.str();
}

MarkedGroup resolve_group(const RunConfig& c, const Tolerances& tol) {
    int sources = (c.triangle ? 1 : 0) + (!c.group_fixture.empty() ? 1 : 0) +
                  (!c.diagram_file.empty() ? 1 : 0);
    if (sources != 1)
        throw ConfigError("config must name exactly one group source "
                          "(triangle=, group=, or diagram-file=)");
    if (c.triangle) return triangle_family((*c.triangle)[0], (*c.triangle)[1], (*c.triangle)[2], tol);
    if (!c.diagram_file.empty()) {
        auto d = parse_diagram(read_file(c.diagram_file));
        auto real = vinberg_realize(d, tol);
        real.group.name = c.diagram_file;
        return real.group;
    }
    if (c.group_fixture == "sanov") return sanov_group();
    if (c.group_fixture == "zsquare") return zsquare_group();
    if (c.group_fixture == "axis2") return axis_group(2.0);
    throw ConfigError("unknown group fixture: " + c.group_fixture);
}

CoxeterFamily resolve_family(const RunConfig& c) {
    if (!c.family_file.empty() && !c.family_fixture.empty())
        throw ConfigError("config must name at most one of family-file=, family=");
    if (!c.family_file.empty()) return parse_family(read_file(c.family_file));
    if (c.family_fixture == "t23n" || c.family_fixture.empty()) return triangle_23n_family();
    if (c.family_fixture == "dihedral6") return dihedral_family(6);
    throw ConfigError("unknown family fixture: " + c.family_fixture);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void CsvWriter::header_block(const RunConfig& c) {
    buffer += "# hywalk " HYWALK_VERSION "\n";
    buffer += "# config: " + c.echo + "\n";
    buffer += "# seed: " + std::to_string(c.seed) + "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buffer += ",";
        buffer += cells[i];
    }
    buffer += "\n";
}

void CsvWriter::comment(const std::string& line) { buffer += "# " + line + "\n"; }

void write_run_meta(const RunConfig& c, double wall_seconds,
                    const std::vector<std::string>& outputs) {
    nlohmann::json j;
    j["version"] = HYWALK_VERSION;
    j["subcommand"] = c.subcommand;
    j["config"] = c.echo;
    j["seed"] = c.seed;
    j["wall_seconds"] = wall_seconds;
    j["outputs"] = outputs;
    write_file(c.out_dir + "/run_meta.json", j.dump(2) + "\n");
}

int word_display_base() { return 1; }

std::string word_to_string(const std::vector<std::uint8_t>& w) {
    if (w.empty()) return "e";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += " ";
        s += std::to_string(static_cast<int>(w[i]) + 1);
    }
    return s;
}

}  // namespace hywalk
