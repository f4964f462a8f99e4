#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hywalk {

// All numerical thresholds in one record. Estimator and enumeration code takes
// a const reference so a run can tighten or relax knobs without recompiling.
struct Tolerances {
    double hyperboloid_membership = 1e-9;   // |<x,x>+1| on the upper sheet
    double psl_det = 1e-9;                  // |det-1| after normalization
    double lorentz_form = 1e-8;             // ||A^T J A - J||_inf
    double boundary_norm = 1e-12;           // | |v|-1 | for boundary points
    double dist_clamp = 1e-6;               // cosh argument may dip below 1 by this much
    double quant_grid = 1e-8;               // canonical key quantization step
    double key_audit = 1e-6;                // same key, matrix distance above this aborts
    double relation_residual = 1e-9;        // default pass bar for verify_relations
    double mass_total = 1e-12;              // |sum of masses - 1|
    double prune_floor = 1e-15;             // convolution atom floor
    double entropy_slack = 1e-9;            // monotonicity comparisons
    std::size_t support_cap = 2'000'000;    // convolution atom cap
    int ball_cap = 14;                      // word-length enumeration cap
    int convolution_cap = 12;               // default max convolution depth
    double overflow_abort = 1e150;          // forward matrix walk entry cap
    int renorm_cadence = 32;                // det renormalization period (matrix walks)
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t;
    return t;
}

// Error taxonomy mirrors the CLI exit codes: config/realization (2),
// resource caps (3), numerical audits (4).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};
struct CapError : std::runtime_error {
    explicit CapError(const std::string& m) : std::runtime_error(m) {}
};
struct AuditError : std::runtime_error {
    explicit AuditError(const std::string& m) : std::runtime_error(m) {}
};
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace hywalk
