#pragma once

#include <string>
#include <vector>

#include "hywalk/estimators.hpp"

namespace hywalk {

// A Coxeter diagram with one marked edge whose label varies along the family;
// INF_LABEL (last, optional) is the limit group. Weights are the fixed
// per-generator probabilities shared by every member.
struct CoxeterFamily {
    CoxeterDiagram base;
    std::pair<int, int> marked_edge{0, 1};  // 0-based
    std::vector<int> n_values;              // ascending, INF_LABEL last if present
    std::vector<double> weights;
    std::string name;
};

void check_family(const CoxeterFamily& f, const Tolerances& tol = default_tolerances());

struct FamilyMember {
    MarkedGroup group;
    FinSuppMeasure measure;
    bool outside_right_angle_hypothesis = false;  // label below 6
};

FamilyMember instantiate(const CoxeterFamily& f, int n,
                         const Tolerances& tol = default_tolerances());

struct CompatiblePair {
    FinSuppMeasure mu_n;
    FinSuppMeasure mu_m;
    std::vector<int> correspondence;  // generator i -> i
};

CompatiblePair compatible_pair(const CoxeterFamily& f, int n, int m,
                               const Tolerances& tol = default_tolerances());

// Exact entropies of mu^{*k} on the limit group (reference) and on the filled
// member, with slack = H_k(limit) - H_k(member). Negative slack beyond
// tolerance would falsify the canonical-key bookkeeping and aborts.
struct MonotonicityRow {
    int k = 0;
    double H_limit = 0;
    double H_member = 0;
    double slack = 0;
};

std::vector<MonotonicityRow> monotonicity_harness(const CoxeterFamily& f, int n, int k_max,
                                                  const Tolerances& tol = default_tolerances());

// ---------------------------------------------------------------------------
// Family sweep

struct SweepConfig {
    int k_max = 12;
    DriftOptions drift;
    bool lattice_exact_v = true;  // per-family members are cocompact lattices
    int ball_estimate_radius = 10;
};

struct SweepRow {
    std::string family_param;  // "7", "10", ..., "inf"
    bool failed = false;
    std::string error;
    double h_upper = 0;   // H_k/k at depth k_max
    double h_delta = 0;   // last increment
    int h_depth = 0;
    double drift = 0;
    double drift_ci = 0;
    double v = 0;
    std::string v_kind;
    double ratio_lo = 0;
    double ratio_hi = 0;
    std::string verdict;
    std::uint64_t seed = 0;
};

// One row per family member (limit row last when present). Per-member
// estimator failures are recorded in-row and the sweep continues.
std::vector<SweepRow> family_sweep(const CoxeterFamily& f, const SweepConfig& cfg,
                                   const Tolerances& tol = default_tolerances());

// Built-in fixtures.
CoxeterFamily triangle_23n_family(std::vector<int> n_values = {},
                                  std::vector<double> weights = {});
CoxeterFamily dihedral_family(int n = 6);

}  // namespace hywalk
