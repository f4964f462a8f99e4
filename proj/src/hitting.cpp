#include "hywalk/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace hywalk {

namespace {

constexpr int kBands = 8;  // sphere binning: 8 z-bands x 8 longitude sectors

int clampi(int v, int lo, int hi) { return std::max(lo, std::min(hi, v)); }

}  // namespace

int boundary_bin(const BoundaryPoint& p, int bins) {
    if (p.dim == 2) {
        double a = std::atan2(p.v[1], p.v[0]);  // (-pi, pi]
        int b = static_cast<int>(std::floor((a + M_PI) / (2 * M_PI) * bins));
        return clampi(b, 0, bins - 1);
    }
    int band = clampi(static_cast<int>(std::floor((p.v[2] + 1.0) / 2.0 * kBands)), 0, kBands - 1);
    double lon = std::atan2(p.v[1], p.v[0]);
    int sec = clampi(static_cast<int>(std::floor((lon + M_PI) / (2 * M_PI) * kBands)), 0,
                     kBands - 1);
    return band * kBands + sec;
}

std::array<double, 3> BoundaryHistogram::bin_center(int b) const {
    if (dim == 2) {
        double a = (b + 0.5) * 2 * M_PI / bins - M_PI;
        return {std::cos(a), std::sin(a), 0.0};
    }
    int band = b / kBands, sec = b % kBands;
    double z = (band + 0.5) * 2.0 / kBands - 1.0;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double lon = (sec + 0.5) * 2 * M_PI / kBands - M_PI;
    return {r * std::cos(lon), r * std::sin(lon), z};
}

namespace {

double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t pick_atom(const std::vector<double>& cdf, double u) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<double> make_cdf(const FinSuppMeasure& mu) {
    std::vector<double> cdf;
    cdf.reserve(mu.atoms.size());
    double acc = 0;
    for (const auto& a : mu.atoms) cdf.push_back(acc += a.mass);
    if (!cdf.empty()) cdf.back() = 1.0;
    return cdf;
}

std::array<double, 3> orbit_ball_point(const MarkedGroup& g, const Isometry& w) {
    if (is_moebius(g.model)) {
        auto p = mobius_apply(std::get<MoebiusIsometry>(w), halfspace_basepoint(g.model));
        return to_ball_model(p, g.model);
    }
    auto x = lorentz_apply(std::get<LorentzIsometry>(w), lorentz_basepoint(g.dim()));
    return to_ball_model(x);
}

// det drift control for long forward products
void renormalize(Isometry& w) {
    if (auto* m = std::get_if<MoebiusIsometry>(&w)) {
        canonicalize(*m);
        return;
    }
    auto& l = std::get<LorentzIsometry>(w);
    const int n = l.dim + 1;
    auto col_dot = [&](int i, int j) {
        double s = -l.a[0 * n + i] * l.a[0 * n + j];
        for (int k = 1; k < n; ++k) s += l.a[k * n + i] * l.a[k * n + j];
        return s;
    };
    // Minkowski Gram-Schmidt on columns: c0 timelike, the rest spacelike
    double t = std::sqrt(-col_dot(0, 0));
    for (int k = 0; k < n; ++k) l.a[k * n + 0] /= t;
    for (int j = 1; j < n; ++j) {
        double p0 = col_dot(j, 0);
        for (int k = 0; k < n; ++k) l.a[k * n + j] += p0 * l.a[k * n + 0];
        for (int i = 1; i < j; ++i) {
            double pi = col_dot(j, i);
            for (int k = 0; k < n; ++k) l.a[k * n + j] -= pi * l.a[k * n + i];
        }
        double s = std::sqrt(col_dot(j, j));
        for (int k = 0; k < n; ++k) l.a[k * n + j] /= s;
    }
}

}  // namespace

LimitPointResult sample_limit_point(const MarkedGroup& g, const FinSuppMeasure& mu,
                                    const SampleOptions& opt, std::mt19937_64& rng,
                                    const Tolerances& tol) {
    if (!(opt.escape_radius > 0) || !(opt.escape_radius < 1))
        throw ConfigError("sample_limit_point: escape radius must lie in (0,1)");
    auto cdf = make_cdf(mu);
    Isometry w = identity_for(g.model);
    LimitPointResult out;
    out.sample.steps = 0;
    const double er2 = opt.escape_radius * opt.escape_radius;
    for (int k = 1; k <= opt.max_steps; ++k) {
        w = compose(w, mu.atoms[pick_atom(cdf, next_uniform(rng))].g.mat);
        if (k % tol.renorm_cadence == 0) renormalize(w);
        if (max_abs_entry(w) > tol.overflow_abort)
            throw AuditError("sample_limit_point: matrix entries exceeded " +
                             std::to_string(tol.overflow_abort) + " at step " +
                             std::to_string(k) + " despite renormalization");
        auto b = orbit_ball_point(g, w);
        if (opt.keep_trajectory) out.sample.trajectory.push_back(b);
        double n2 = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
        if (n2 >= er2) {
            out.sample.steps = k;
            out.sample.terminal = w;
            out.sample.displacement = orbit_displacement(g, w, tol);
            out.point = boundary_project(b, g.dim(), tol);
            return out;
        }
    }
    throw NonEscapingError("sample_limit_point: no escape within " +
                           std::to_string(opt.max_steps) + " steps");
}

BoundaryHistogram empirical_hitting(const MarkedGroup& g, const FinSuppMeasure& mu,
                                    const HittingOptions& opt, const Tolerances& tol) {
    BoundaryHistogram h;
    h.dim = g.dim();
    h.bins = (h.dim == 3) ? 64 : opt.bins;
    h.seed = opt.seed;
    if (h.bins < 1) throw ConfigError("empirical_hitting: bins >= 1");
    h.counts.assign(static_cast<std::size_t>(h.bins), 0);
    if (opt.trials <= 0) return h;

    const int T = opt.trials;
    const int nthreads = std::max(1, opt.threads);
    std::vector<std::vector<std::uint64_t>> part(nthreads,
                                                 std::vector<std::uint64_t>(h.bins, 0));
    std::vector<std::uint64_t> part_miss(nthreads, 0);
    auto run = [&](int wk) {
        for (int t = wk; t < T; t += nthreads) {
            std::mt19937_64 rng(stream_seed(opt.seed, static_cast<std::uint64_t>(t)));
            try {
                auto res = sample_limit_point(g, mu, opt.sample, rng, tol);
                ++part[wk][boundary_bin(res.point, h.bins)];
            } catch (const NonEscapingError&) {
                ++part_miss[wk];
            }
        }
    };
    if (nthreads == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (int wk = 0; wk < nthreads; ++wk) pool.emplace_back(run, wk);
        for (auto& th : pool) th.join();
    }
    for (int wk = 0; wk < nthreads; ++wk) {
        h.non_escaping += part_miss[wk];
        for (int b = 0; b < h.bins; ++b) h.counts[b] += part[wk][b];
    }
    for (auto c : h.counts) h.total += c;
    h.warning_non_escaping = h.non_escaping * 100 > static_cast<std::uint64_t>(T);
    return h;
}

UniformityStats uniformity_stats(const BoundaryHistogram& h) {
    UniformityStats s;
    s.undersampled = h.total < static_cast<std::uint64_t>(100) * h.bins;
    if (h.total == 0) return s;
    double expected = static_cast<double>(h.total) / h.bins;
    for (auto c : h.counts) {
        double cc = static_cast<double>(c);
        s.tv_from_uniform += std::abs(cc / h.total - 1.0 / h.bins);
        s.chi_square += (cc - expected) * (cc - expected) / expected;
        s.max_bin_ratio = std::max(s.max_bin_ratio, cc / expected);
    }
    s.tv_from_uniform *= 0.5;
    return s;
}

double rn_weight(const Isometry& g, const BoundaryPoint& xi, const Tolerances& tol) {
    Model m = isometry_model(g);
    double beta;
    if (is_moebius(m)) {
        auto o = halfspace_basepoint(m);
        auto go = mobius_apply(std::get<MoebiusIsometry>(g), o);
        beta = busemann(xi, go, o);
    } else {
        auto o = lorentz_basepoint(model_dim(m));
        auto go = lorentz_apply(std::get<LorentzIsometry>(g), o);
        beta = busemann(xi, go, o);
    }
    (void)tol;
    return std::exp(-(model_dim(m) - 1) * beta);
}

std::vector<double> pushed_bin_weights(const std::vector<BoundaryPoint>& points,
                                       const FinSuppMeasure& mu, int bins) {
    std::vector<double> w(static_cast<std::size_t>(bins), 0.0);
    for (const auto& p : points)
        for (const auto& a : mu.atoms)
            w[boundary_bin(apply_boundary(a.g.mat, p), bins)] += a.mass;
    return w;
}

double tv_between(const BoundaryHistogram& h, const std::vector<double>& weights) {
    double wt = 0;
    for (double v : weights) wt += v;
    if (h.total == 0 || wt <= 0) return 0;
    double tv = 0;
    for (int b = 0; b < h.bins; ++b)
        tv += std::abs(static_cast<double>(h.counts[b]) / h.total - weights[b] / wt);
    return 0.5 * tv;
}

}  // namespace hywalk
