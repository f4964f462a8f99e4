#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hywalk/estimators.hpp"

namespace hywalk {

// max_steps exhausted before the orbit cleared the escape radius
struct NonEscapingError : GeometryError {
    explicit NonEscapingError(const std::string& m) : GeometryError(m) {}
};

// Equal-measure binning: 64 arcs on the circle, 8x8 equal-area
// (longitude x z-band) grid on the sphere.
struct BoundaryHistogram {
    int dim = 2;
    int bins = 64;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;        // escaped trials binned
    std::uint64_t non_escaping = 0;
    bool warning_non_escaping = false;  // > 1% of trials failed to escape
    std::uint64_t seed = 0;

    std::array<double, 3> bin_center(int b) const;
};

int boundary_bin(const BoundaryPoint& p, int bins);

struct SampleOptions {
    double escape_radius = 1.0 - 1e-6;  // ball-model norm threshold
    int max_steps = 100000;
    bool keep_trajectory = false;
};

struct LimitPointResult {
    BoundaryPoint point;
    WalkSample sample;
};

// Runs the walk, tracking w_n o in the ball model; returns the boundary
// projection of the first orbit point past the escape radius.
// Throws GeometryError("non-escaping") when max_steps is exhausted first
// (expected for elementary fixtures) and CapError past the entry guard.
LimitPointResult sample_limit_point(const MarkedGroup& g, const FinSuppMeasure& mu,
                                    const SampleOptions& opt, std::mt19937_64& rng,
                                    const Tolerances& tol = default_tolerances());

struct HittingOptions {
    int trials = 10000;
    int bins = 64;           // for dim 3 this is forced to 64 (8x8)
    std::uint64_t seed = 1;
    int threads = 1;
    SampleOptions sample;
};

BoundaryHistogram empirical_hitting(const MarkedGroup& g, const FinSuppMeasure& mu,
                                    const HittingOptions& opt,
                                    const Tolerances& tol = default_tolerances());

struct UniformityStats {
    double tv_from_uniform = 0;
    double chi_square = 0;
    double max_bin_ratio = 0;
    bool undersampled = false;  // total < 100 * bins
    std::string note = "indicator only";
};

UniformityStats uniformity_stats(const BoundaryHistogram& h);

// Radon-Nikodym weight of the Lebesgue boundary class:
// d(g lambda)/d lambda (xi) = exp(-(d-1) beta_xi(g o, o)).
double rn_weight(const Isometry& g, const BoundaryPoint& xi,
                 const Tolerances& tol = default_tolerances());

// One-step pushforward of a sampled empirical measure by mu (mix over support
// atoms of the boundary action); finite-sample proxy for stationarity.
std::vector<double> pushed_bin_weights(const std::vector<BoundaryPoint>& points,
                                       const FinSuppMeasure& mu, int bins);

double tv_between(const BoundaryHistogram& h, const std::vector<double>& weights);

}  // namespace hywalk
