#include "hywalk/dehn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hywalk {

void check_family(const CoxeterFamily& f, const Tolerances& tol) {
    check_diagram(f.base);
    auto [i, j] = f.marked_edge;
    if (i < 0 || j < 0 || i >= f.base.size || j >= f.base.size || i == j)
        throw ConfigError("family: marked edge is not an edge of the diagram");
    if (f.n_values.empty()) return;
    for (std::size_t k = 0; k + 1 < f.n_values.size(); ++k) {
        if (f.n_values[k] == INF_LABEL)
            throw ConfigError("family: the infinite label must come last");
        if (f.n_values[k] >= f.n_values[k + 1])
            throw ConfigError("family: n-values must be strictly ascending");
    }
    if (f.weights.size() != static_cast<std::size_t>(f.base.size))
        throw ConfigError("family: weight count does not match diagram size");
    double total = 0;
    for (double w : f.weights) {
        if (!(w > 0)) throw ConfigError("family: weights must be strictly positive");
        total += w;
    }
    if (std::abs(total - 1.0) > tol.mass_total)
        throw ConfigError("family: weights must sum to 1");
}

FamilyMember instantiate(const CoxeterFamily& f, int n, const Tolerances& tol) {
    check_family(f, tol);
    if (std::find(f.n_values.begin(), f.n_values.end(), n) == f.n_values.end())
        throw ConfigError("instantiate: label not in the family's n-values");
    CoxeterDiagram d = f.base;
    auto [i, j] = f.marked_edge;
    d.label(i, j) = d.label(j, i) = n;
    auto real = vinberg_realize(d, tol);
    real.group.marked_edge = f.marked_edge;
    std::ostringstream os;
    os << f.name << "[";
    if (n == INF_LABEL)
        os << "inf]";
    else
        os << n << "]";
    real.group.name = os.str();
    FamilyMember m{real.group, measure_from_weights(real.group, f.weights, tol),
                   n != INF_LABEL && n < 6};
    return m;
}

CompatiblePair compatible_pair(const CoxeterFamily& f, int n, int m, const Tolerances& tol) {
    auto a = instantiate(f, n, tol);
    auto b = instantiate(f, m, tol);
    std::vector<int> corr(f.base.size);
    for (int k = 0; k < f.base.size; ++k) corr[k] = k;
    return {std::move(a.measure), std::move(b.measure), std::move(corr)};
}

std::vector<MonotonicityRow> monotonicity_harness(const CoxeterFamily& f, int n, int k_max,
                                                  const Tolerances& tol) {
    if (std::find(f.n_values.begin(), f.n_values.end(), INF_LABEL) == f.n_values.end())
        throw ConfigError("monotonicity_harness: family has no limit (inf) member");
    if (k_max < 1 || k_max > tol.convolution_cap)
        throw CapError("monotonicity_harness: k_max outside [1, convolution cap]");
    auto limit = instantiate(f, INF_LABEL, tol);
    auto member = instantiate(f, n, tol);

    std::vector<MonotonicityRow> rows;
    FinSuppMeasure accL = limit.measure, accM = member.measure;
    ConvolveOptions o;
    o.store_words = false;
    for (int k = 1; k <= k_max; ++k) {
        if (k > 1) {
            o.label = "power " + std::to_string(k);
            accL = convolve(limit.measure, accL, tol, o);
            accM = convolve(member.measure, accM, tol, o);
        }
        MonotonicityRow r;
        r.k = k;
        r.H_limit = entropy(accL);
        r.H_member = entropy(accM);
        r.slack = r.H_limit - r.H_member;
        if (r.slack < -tol.entropy_slack) {
            std::ostringstream os;
            os << "monotonicity_harness: negative slack " << r.slack << " at k = " << k
               << " (canonicalization suspect)";
            throw AuditError(os.str());
        }
        rows.push_back(r);
    }
    return rows;
}

std::vector<SweepRow> family_sweep(const CoxeterFamily& f, const SweepConfig& cfg,
                                   const Tolerances& tol) {
    check_family(f, tol);
    std::vector<SweepRow> rows;
    for (int n : f.n_values) {
        SweepRow row;
        row.family_param = n == INF_LABEL ? "inf" : std::to_string(n);
        row.seed = cfg.drift.seed;
        try {
            auto mem = instantiate(f, n, tol);
            auto seq = entropy_upper_sequence(mem.measure, cfg.k_max, tol);
            const auto& lastrow = seq.last();
            row.h_upper = lastrow.H_over_n;
            row.h_delta = lastrow.dH;
            row.h_depth = lastrow.n;
            auto drift = drift_mc(mem.group, mem.measure, cfg.drift, tol);
            row.drift = drift.report.value;
            row.drift_ci = drift.report.uncertainty;
            auto v = critical_exponent(mem.group,
                                       cfg.lattice_exact_v ? ExponentMode::LatticeExact
                                                           : ExponentMode::BallEstimate,
                                       cfg.ball_estimate_radius, tol);
            row.v = v.value;
            row.v_kind = kind_name(v.kind);
            auto diag = fundamental_diagnostic(seq.entropy_report(), drift.report, v);
            row.ratio_lo = diag.ratio_lo;
            row.ratio_hi = diag.ratio_hi;
            row.verdict = diag.verdict;
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

CoxeterFamily triangle_23n_family(std::vector<int> n_values, std::vector<double> weights) {
    CoxeterFamily f;
    f.base = make_diagram(3, 2);
    f.base.label(0, 1) = f.base.label(1, 0) = 2;
    f.base.label(1, 2) = f.base.label(2, 1) = 3;
    f.base.label(0, 2) = f.base.label(2, 0) = 7;  // overwritten per member
    f.marked_edge = {0, 2};
    f.n_values = n_values.empty() ? std::vector<int>{7, 10, 20, 50, INF_LABEL}
                                  : std::move(n_values);
    f.weights = weights.empty() ? std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3}
                                : std::move(weights);
    f.name = "triangle-2-3-n";
    return f;
}

CoxeterFamily dihedral_family(int n) {
    CoxeterFamily f;
    f.base = make_diagram(2, 2);
    f.base.label(0, 1) = f.base.label(1, 0) = n;
    f.marked_edge = {0, 1};
    f.n_values = {n, INF_LABEL};
    f.weights = {0.5, 0.5};
    f.name = "dihedral";
    return f;
}

}  // namespace hywalk
