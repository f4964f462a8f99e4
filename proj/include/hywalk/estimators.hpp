#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hywalk/measure.hpp"

namespace hywalk {

enum class EstimateKind { MonteCarlo, MonotoneBound, Exact };

const char* kind_name(EstimateKind k);

struct EstimateReport {
    double value = 0;
    EstimateKind kind = EstimateKind::MonteCarlo;
    double uncertainty = 0;        // 95% half-width (MC) or bracket width (bounds)
    std::uint64_t samples_or_depth = 0;
    std::uint64_t seed = 0;
};

struct WalkSample {
    int steps = 0;
    Isometry terminal;
    double displacement = 0;
    std::vector<std::array<double, 3>> trajectory;  // ball-model orbit, optional
};

// ---------------------------------------------------------------------------
// Drift

struct DriftOptions {
    int steps = 2000;
    int trials = 4000;
    std::uint64_t seed = 1;
    int threads = 1;
    bool with_trace = false;
    double step_budget = 1e10;  // steps * trials guard
};

struct DriftResult {
    EstimateReport report;                  // mean displacement / steps
    std::vector<double> trace;              // mean displacement per step (if requested)
};

// T independent products of iid mu-increments; the walk state is scale-tracked
// so displacement never overflows. Per-trial RNG streams are derived from
// (seed, trial index) and the reduction runs in fixed trial order, so results
// are bitwise identical for any thread count.
DriftResult drift_mc(const MarkedGroup& g, const FinSuppMeasure& mu, const DriftOptions& opt,
                     const Tolerances& tol = default_tolerances());

// ---------------------------------------------------------------------------
// Entropy sequence

struct EntropyRow {
    int n = 0;
    double H = 0;
    double H_over_n = 0;
    double dH = 0;             // H(mu^{*n}) - H(mu^{*(n-1)})
    double pruned_mass = 0;    // cumulative reported pruning loss
    std::size_t support = 0;
};

struct EntropySequence {
    std::vector<EntropyRow> rows;
    std::optional<std::string> overflow;   // set when the cap stopped the sequence early

    const EntropyRow& last() const { return rows.back(); }
    // estimate of record: last increment; H_n/n stays a certified upper bound
    EstimateReport entropy_report() const;
};

EntropySequence entropy_upper_sequence(const FinSuppMeasure& mu, int n_max,
                                       const Tolerances& tol = default_tolerances());

// ---------------------------------------------------------------------------
// Critical exponent

enum class ExponentMode { LatticeExact, BallEstimate };

// lattice-exact: v = d-1 (caller asserts the group is a lattice).
// ball-estimate: two-point growth slope of enumerated orbit counts between
// R_max/2 and R_max, an undercount-biased lower estimate.
EstimateReport critical_exponent(const MarkedGroup& g, ExponentMode mode, int word_radius,
                                 const Tolerances& tol = default_tolerances());

// ---------------------------------------------------------------------------
// Inequality diagnostic

struct DiagnosticVerdict {
    double ratio = 0;      // h / (l v)
    double ratio_lo = 0;   // conservative bracket
    double ratio_hi = 0;
    std::string verdict;   // singular-indicated | inconclusive | violation-suspect | degenerate
};

DiagnosticVerdict fundamental_diagnostic(const EstimateReport& h, const EstimateReport& l,
                                         const EstimateReport& v);

}  // namespace hywalk
