#include <chrono>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hywalk/io.hpp"

namespace hw = hywalk;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

hw::FinSuppMeasure resolve_measure(const hw::RunConfig& c, const hw::MarkedGroup& g,
                                   const hw::Tolerances& tol) {
    return hw::parse_measure(c.measure_spec, g, tol);
}

int cmd_walk(const hw::RunConfig& c, const hw::Tolerances& tol) {
    auto g = hw::resolve_group(c, tol);
    auto mu = resolve_measure(c, g, tol);
    auto nd = hw::is_nondegenerate(mu, g, 4, tol);
    if (nd == hw::Nondegeneracy::Unknown)
        std::cerr << "warning: support may not generate the group (probe inconclusive)\n";

    hw::DriftOptions opt;
    opt.steps = c.steps;
    opt.trials = c.trials;
    opt.seed = c.seed;
    opt.threads = c.threads;
    opt.with_trace = true;
    Timer timer;
    auto res = hw::drift_mc(g, mu, opt, tol);

    hw::CsvWriter csv;
    csv.header_block(c);
    csv.row({"step", "mean_displacement"});
    for (int k = 0; k < opt.steps; ++k)
        csv.row({std::to_string(k + 1), hw::format_double(res.trace[k])});
    hw::write_file(c.out_dir + "/walk_trace.csv", csv.buffer);

    nlohmann::json j;
    j["group"] = g.name;
    j["drift"] = res.report.value;
    j["drift_ci"] = res.report.uncertainty;
    j["kind"] = hw::kind_name(res.report.kind);
    j["trials"] = res.report.samples_or_depth;
    j["steps"] = opt.steps;
    j["seed"] = c.seed;
    j["nondegenerate"] = nd == hw::Nondegeneracy::Yes ? "yes" : "unknown";
    hw::write_file(c.out_dir + "/walk_report.json", j.dump(2) + "\n");
    hw::write_run_meta(c, timer.seconds(), {"walk_trace.csv", "walk_report.json"});
    std::cout << "drift " << hw::format_double(res.report.value) << " +/- "
              << hw::format_double(res.report.uncertainty) << " (" << g.name << ")\n";
    return 0;
}

int cmd_entropy(const hw::RunConfig& c, const hw::Tolerances& tol) {
    auto g = hw::resolve_group(c, tol);
    auto mu = resolve_measure(c, g, tol);
    Timer timer;
    auto seq = hw::entropy_upper_sequence(mu, c.k_max, tol);
    hw::CsvWriter csv;
    csv.header_block(c);
    csv.row({"n", "H", "H_over_n", "dH", "support", "pruned_mass"});
    for (const auto& r : seq.rows)
        csv.row({std::to_string(r.n), hw::format_double(r.H), hw::format_double(r.H_over_n),
                 hw::format_double(r.dH), std::to_string(r.support),
                 hw::format_double(r.pruned_mass)});
    if (seq.overflow) csv.comment("overflow: " + *seq.overflow);
    hw::write_file(c.out_dir + "/entropy.csv", csv.buffer);
    hw::write_run_meta(c, timer.seconds(), {"entropy.csv"});
    std::cout << "entropy table with " << seq.rows.size() << " rows (" << g.name << ")";
    if (seq.overflow) std::cout << " [truncated: " << *seq.overflow << "]";
    std::cout << "\n";
    return seq.overflow ? 3 : 0;
}

int cmd_sweep(const hw::RunConfig& c, const hw::Tolerances& tol) {
    auto fam = hw::resolve_family(c);
    hw::SweepConfig sc;
    sc.k_max = c.k_max;
    sc.drift.steps = c.steps;
    sc.drift.trials = c.trials;
    sc.drift.seed = c.seed;
    sc.drift.threads = c.threads;
    Timer timer;
    auto rows = hw::family_sweep(fam, sc, tol);
    hw::CsvWriter csv;
    csv.header_block(c);
    csv.row({"family_param", "h_upper", "h_delta", "h_depth", "drift", "drift_ci", "v", "v_kind",
             "ratio_lo", "ratio_hi", "verdict", "seed"});
    for (const auto& r : rows) {
        if (r.failed) {
            csv.row({r.family_param, "", "", "", "", "", "", "", "", "", "failed",
                     std::to_string(r.seed)});
            csv.comment(r.family_param + ": " + r.error);
            continue;
        }
        csv.row({r.family_param, hw::format_double(r.h_upper), hw::format_double(r.h_delta),
                 std::to_string(r.h_depth), hw::format_double(r.drift),
                 hw::format_double(r.drift_ci), hw::format_double(r.v), r.v_kind,
                 hw::format_double(r.ratio_lo), hw::format_double(r.ratio_hi), r.verdict,
                 std::to_string(r.seed)});
    }
    hw::write_file(c.out_dir + "/sweep.csv", csv.buffer);
    hw::write_run_meta(c, timer.seconds(), {"sweep.csv"});
    std::cout << "sweep over " << rows.size() << " members of " << fam.name << "\n";
    return 0;
}

int cmd_hitting(const hw::RunConfig& c, const hw::Tolerances& tol) {
    auto g = hw::resolve_group(c, tol);
    auto mu = resolve_measure(c, g, tol);
    hw::HittingOptions opt;
    opt.trials = c.trials;
    opt.bins = c.bins;
    opt.seed = c.seed;
    opt.threads = c.threads;
    opt.sample.escape_radius = c.escape_radius;
    opt.sample.max_steps = c.max_steps;
    Timer timer;
    auto hist = hw::empirical_hitting(g, mu, opt, tol);
    auto stats = hw::uniformity_stats(hist);

    hw::CsvWriter csv;
    csv.header_block(c);
    csv.row({"bin_index", "bin_center_coords", "count"});
    for (int b = 0; b < hist.bins; ++b) {
        auto ctr = hist.bin_center(b);
        std::string coords = hw::format_double(ctr[0]) + " " + hw::format_double(ctr[1]);
        if (hist.dim == 3) coords += " " + hw::format_double(ctr[2]);
        csv.row({std::to_string(b), coords, std::to_string(hist.counts[b])});
    }
    hw::write_file(c.out_dir + "/hitting.csv", csv.buffer);

    nlohmann::json j;
    j["group"] = g.name;
    j["bins"] = hist.bins;
    j["total"] = hist.total;
    j["non_escaping"] = hist.non_escaping;
    j["warning_non_escaping"] = hist.warning_non_escaping;
    j["tv_from_uniform"] = stats.tv_from_uniform;
    j["chi_square"] = stats.chi_square;
    j["max_bin_ratio"] = stats.max_bin_ratio;
    j["undersampled"] = stats.undersampled;
    j["note"] = stats.note;
    j["seed"] = c.seed;
    hw::write_file(c.out_dir + "/hitting_stats.json", j.dump(2) + "\n");
    hw::write_run_meta(c, timer.seconds(), {"hitting.csv", "hitting_stats.json"});
    std::cout << "hitting histogram: " << hist.total << " escaped, " << hist.non_escaping
              << " non-escaping, tv " << hw::format_double(stats.tv_from_uniform) << "\n";
    return 0;
}

int cmd_ball(const hw::RunConfig& c, const hw::Tolerances& tol) {
    auto g = hw::resolve_group(c, tol);
    Timer timer;
    auto elems = hw::ball(g, c.word_radius, tol);
    hw::CsvWriter csv;
    csv.header_block(c);
    csv.row({"index", "word_length", "word", "orbit_dist"});
    for (std::size_t i = 0; i < elems.size(); ++i)
        csv.row({std::to_string(i), std::to_string(elems[i].word.size()),
                 hw::word_to_string(elems[i].word), hw::format_double(elems[i].orbit_dist)});
    hw::write_file(c.out_dir + "/ball.csv", csv.buffer);
    hw::write_run_meta(c, timer.seconds(), {"ball.csv"});
    std::cout << "|ball(" << c.word_radius << ")| = " << elems.size() << " (" << g.name << ")\n";
    return 0;
}

int cmd_verify(const hw::RunConfig& c, const hw::Tolerances& tol) {
    auto g = hw::resolve_group(c, tol);
    Timer timer;
    auto rep = hw::verify_relations(g, tol);
    nlohmann::json j;
    j["group"] = g.name;
    j["max_residual"] = rep.max_residual;
    j["worst_relator"] = rep.worst_relator;
    j["relators_checked"] = rep.relators_checked;
    bool pass = rep.max_residual <= 10 * tol.relation_residual;
    j["pass"] = pass;
    hw::write_file(c.out_dir + "/verify.json", j.dump(2) + "\n");
    hw::write_run_meta(c, timer.seconds(), {"verify.json"});
    std::cout << "relations: " << rep.relators_checked << " checked, max residual "
              << hw::format_double(rep.max_residual) << " at " << rep.worst_relator
              << (pass ? " [pass]" : " [FAIL]") << "\n";
    return pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random-walk laboratory for discrete hyperbolic isometry groups"};
    app.require_subcommand(1);

    std::string config_path, out_dir, measure_spec, group_fixture, diagram_file, family_file,
        family_fixture, triangle_spec;
    std::uint64_t seed = 0;
    int threads = 0, steps = 0, trials = 0, kmax = 0, bins = 0, word_radius = 0, max_steps = 0;
    double escape_radius = 0;

    app.add_option("--config", config_path, "config file (key = value lines)");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads");
    app.add_option("--steps", steps, "walk steps per trial");
    app.add_option("--trials", trials, "Monte Carlo trials");
    app.add_option("--k-max", kmax, "convolution depth");
    app.add_option("--bins", bins, "boundary histogram bins");
    app.add_option("--word-radius", word_radius, "enumeration word radius");
    app.add_option("--max-steps", max_steps, "boundary walk step cap");
    app.add_option("--escape-radius", escape_radius, "ball-model escape threshold");
    app.add_option("--measure", measure_spec, "measure spec");
    app.add_option("--group", group_fixture, "group fixture name");
    app.add_option("--diagram", diagram_file, "Coxeter diagram file");
    app.add_option("--family", family_fixture, "family fixture name");
    app.add_option("--family-file", family_file, "family description file");
    app.add_option("--triangle", triangle_spec, "inline triangle p,q,n");

    for (const char* name : {"walk", "entropy", "sweep", "hitting", "ball", "verify"})
        app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);

    try {
        hw::RunConfig cfg;
        if (!config_path.empty()) cfg = hw::parse_config_text(hw::read_file(config_path));
        if (app.count("--seed")) cfg.seed = seed;
        if (app.count("--out")) cfg.out_dir = out_dir;
        if (app.count("--threads")) cfg.threads = threads;
        if (app.count("--steps")) cfg.steps = steps;
        if (app.count("--trials")) cfg.trials = trials;
        if (app.count("--k-max")) cfg.k_max = kmax;
        if (app.count("--bins")) cfg.bins = bins;
        if (app.count("--word-radius")) cfg.word_radius = word_radius;
        if (app.count("--max-steps")) cfg.max_steps = max_steps;
        if (app.count("--escape-radius")) cfg.escape_radius = escape_radius;
        if (app.count("--measure")) cfg.measure_spec = measure_spec;
        if (app.count("--group")) cfg.group_fixture = group_fixture;
        if (app.count("--diagram")) cfg.diagram_file = diagram_file;
        if (app.count("--family")) cfg.family_fixture = family_fixture;
        if (app.count("--family-file")) cfg.family_file = family_file;
        if (app.count("--triangle")) {
            std::string v = triangle_spec;
            for (auto& ch : v)
                if (ch == ',') ch = ' ';
            std::istringstream is(v);
            std::string a, b, cc;
            if (!(is >> a >> b >> cc)) throw hw::ConfigError("--triangle expects p,q,n");
            auto lab = [](const std::string& s) {
                return (s == "inf" || s == "oo") ? hw::INF_LABEL : std::stoi(s);
            };
            cfg.triangle = std::array<int, 3>{lab(a), lab(b), lab(cc)};
        }
        cfg.subcommand = app.get_subcommands().front()->get_name();
        cfg.echo = hw::config_echo(cfg);

        hw::Tolerances tol;
        hw::apply_tolerance_overrides(tol, cfg.tol_overrides);

        if (cfg.subcommand == "walk") return cmd_walk(cfg, tol);
        if (cfg.subcommand == "entropy") return cmd_entropy(cfg, tol);
        if (cfg.subcommand == "sweep") return cmd_sweep(cfg, tol);
        if (cfg.subcommand == "hitting") return cmd_hitting(cfg, tol);
        if (cfg.subcommand == "ball") return cmd_ball(cfg, tol);
        if (cfg.subcommand == "verify") return cmd_verify(cfg, tol);
        std::cerr << "unknown subcommand\n";
        return 2;
    } catch (const hw::CapError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const hw::AuditError& e) {
        std::cerr << "numerical audit: " << e.what() << "\n";
        return 4;
    } catch (const hw::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const hw::GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
