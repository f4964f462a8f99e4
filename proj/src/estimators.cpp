#include "hywalk/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace hywalk {

const char* kind_name(EstimateKind k) {
    switch (k) {
        case EstimateKind::MonteCarlo: return "monte-carlo";
        case EstimateKind::MonotoneBound: return "monotone-bound";
        case EstimateKind::Exact: return "exact";
    }
    return "?";
}

namespace {

double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// cumulative table for atom sampling, laid out in atom insertion order
struct Sampler {
    std::vector<double> cdf;
    std::size_t pick(double u) const {
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t i = static_cast<std::size_t>(it - cdf.begin());
        return std::min(i, cdf.size() - 1);
    }
};

Sampler make_sampler(const FinSuppMeasure& mu) {
    Sampler s;
    s.cdf.reserve(mu.atoms.size());
    double acc = 0;
    for (const auto& a : mu.atoms) {
        acc += a.mass;
        s.cdf.push_back(acc);
    }
    if (!s.cdf.empty()) s.cdf.back() = 1.0;
    return s;
}

// Scale-tracked walk state: applies left increments and reports d(o, w o).
// Lorentz groups track the orbit vector, Moebius groups the matrix with
// cosh d(o, M o) = ||M||_F^2 / 2.
struct WalkState {
    bool lorentz = true;
    int dim = 2;
    std::array<double, 4> y{};
    std::array<cplx, 4> m{};
    double logscale = 0;

    void reset(const MarkedGroup& g) {
        lorentz = !is_moebius(g.model);
        dim = g.dim();
        logscale = 0;
        if (lorentz) {
            y = {1.0, 0.0, 0.0, 0.0};
        } else {
            m = {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(1, 0)};
        }
    }

    void apply_left(const Isometry& g) {
        if (lorentz) {
            const auto& l = std::get<LorentzIsometry>(g);
            const int n = dim + 1;
            std::array<double, 4> out{};
            for (int i = 0; i < n; ++i) {
                double s = 0;
                for (int k = 0; k < n; ++k) s += l.a[i * n + k] * y[k];
                out[i] = s;
            }
            y = out;
            if (y[0] > 2.0) {
                double f = y[0];
                for (int i = 0; i < n; ++i) y[i] /= f;
                logscale += std::log(f);
            }
        } else {
            const auto& mo = std::get<MoebiusIsometry>(g);
            std::array<cplx, 4> out;
            out[0] = mo.a[0] * m[0] + mo.a[1] * m[2];
            out[1] = mo.a[0] * m[1] + mo.a[1] * m[3];
            out[2] = mo.a[2] * m[0] + mo.a[3] * m[2];
            out[3] = mo.a[2] * m[1] + mo.a[3] * m[3];
            m = out;
            double f = 0;
            for (const auto& e : m) f = std::max(f, std::abs(e.real()) + std::abs(e.imag()));
            if (f > 1e6) {
                for (auto& e : m) e /= f;
                logscale += std::log(f);
            }
        }
    }

    double displacement() const {
        if (lorentz) {
            // cosh d = e^{logscale} * y0
            double L = logscale + std::log(std::max(y[0], 1e-300));
            if (L < 30.0) return std::acosh(std::max(1.0, std::exp(L)));
            return L + std::log(2.0);
        }
        double f2 = 0;
        for (const auto& e : m) f2 += std::norm(e);
        double L = 2.0 * logscale + std::log(f2 / 2.0);
        if (L < 30.0) return std::acosh(std::max(1.0, std::exp(L)));
        return L + std::log(2.0);
    }
};

constexpr int kBlock = 64;  // trial block size; reductions run in block order

}  // namespace

DriftResult drift_mc(const MarkedGroup& g, const FinSuppMeasure& mu, const DriftOptions& opt,
                     const Tolerances& tol) {
    if (opt.steps < 1 || opt.trials < 1) throw ConfigError("drift_mc: steps and trials >= 1");
    if (static_cast<double>(opt.steps) * opt.trials > opt.step_budget)
        throw CapError("drift_mc: steps*trials exceeds the run budget");
    if (mu.model != g.model) throw ConfigError("drift_mc: measure model mismatch");
    check_measure(mu, tol);

    const Sampler sampler = make_sampler(mu);
    const int T = opt.trials, n = opt.steps;
    const int nblocks = (T + kBlock - 1) / kBlock;
    std::vector<double> disp(static_cast<std::size_t>(T), 0.0);
    std::vector<std::vector<double>> block_trace;
    if (opt.with_trace)
        block_trace.assign(nblocks, std::vector<double>(static_cast<std::size_t>(n), 0.0));

    auto run_block = [&](int blk) {
        WalkState st;
        int t0 = blk * kBlock, t1 = std::min(T, t0 + kBlock);
        for (int t = t0; t < t1; ++t) {
            std::mt19937_64 rng(stream_seed(opt.seed, static_cast<std::uint64_t>(t)));
            st.reset(g);
            for (int k = 0; k < n; ++k) {
                std::size_t ai = sampler.pick(next_uniform(rng));
                st.apply_left(mu.atoms[ai].g.mat);
                if (opt.with_trace) block_trace[blk][k] += st.displacement();
            }
            disp[t] = st.displacement() / n;
        }
    };

    int nthreads = std::max(1, opt.threads);
    if (nthreads == 1) {
        for (int b = 0; b < nblocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        // static interleaved assignment; every block writes only its own slots
        for (int w = 0; w < nthreads; ++w)
            pool.emplace_back([&, w]() {
                for (int b = w; b < nblocks; b += nthreads) run_block(b);
            });
        for (auto& th : pool) th.join();
    }

    double mean = 0;
    for (int t = 0; t < T; ++t) mean += disp[t];
    mean /= T;
    double var = 0;
    for (int t = 0; t < T; ++t) var += (disp[t] - mean) * (disp[t] - mean);
    var = (T > 1) ? var / (T - 1) : 0.0;
    double hw = (T > 1) ? 1.96 * std::sqrt(var / T) : 0.0;

    DriftResult out;
    out.report = {mean, EstimateKind::MonteCarlo, hw, static_cast<std::uint64_t>(T), opt.seed};
    if (opt.with_trace) {
        out.trace.assign(static_cast<std::size_t>(n), 0.0);
        for (int b = 0; b < nblocks; ++b)
            for (int k = 0; k < n; ++k) out.trace[k] += block_trace[b][k];
        for (int k = 0; k < n; ++k) out.trace[k] /= T;
    }
    return out;
}

EstimateReport EntropySequence::entropy_report() const {
    EstimateReport r;
    const auto& row = rows.back();
    r.value = row.dH;
    r.kind = EstimateKind::MonotoneBound;
    // pruning is the only quantified error source; the depth bias is one-sided
    r.uncertainty = row.pruned_mass > 0 ? row.pruned_mass * std::log(1.0 / 1e-15) : 0.0;
    r.samples_or_depth = static_cast<std::uint64_t>(row.n);
    return r;
}

EntropySequence entropy_upper_sequence(const FinSuppMeasure& mu, int n_max,
                                       const Tolerances& tol) {
    if (n_max < 1) throw ConfigError("entropy_upper_sequence: n_max >= 1");
    if (n_max > tol.convolution_cap)
        throw CapError("entropy_upper_sequence: n_max " + std::to_string(n_max) +
                       " exceeds convolution cap " + std::to_string(tol.convolution_cap));
    check_measure(mu, tol);
    EntropySequence seq;
    FinSuppMeasure acc = mu;
    double prevH = 0;
    for (int k = 1; k <= n_max; ++k) {
        if (k > 1) {
            ConvolveOptions o;
            o.store_words = false;
            o.label = "power " + std::to_string(k);
            try {
                acc = convolve(mu, acc, tol, o);
            } catch (const CapError& e) {
                if (seq.rows.empty()) throw;
                seq.overflow = std::string(e.what()) + "; largest completed n = " +
                               std::to_string(k - 1);
                return seq;
            }
        }
        double H = entropy(acc);
        seq.rows.push_back({k, H, H / k, H - prevH, acc.dropped_mass, acc.atoms.size()});
        prevH = H;
    }
    return seq;
}

EstimateReport critical_exponent(const MarkedGroup& g, ExponentMode mode, int word_radius,
                                 const Tolerances& tol) {
    EstimateReport r;
    r.samples_or_depth = static_cast<std::uint64_t>(word_radius);
    if (mode == ExponentMode::LatticeExact) {
        r.value = g.dim() - 1;
        r.kind = EstimateKind::Exact;
        return r;
    }
    auto elems = ball(g, word_radius, tol);
    double rmax = 0;
    for (const auto& e : elems) rmax = std::max(rmax, e.orbit_dist);
    r.kind = EstimateKind::MonotoneBound;
    if (rmax <= 0 || elems.size() < 2) {
        r.value = 0;
        return r;
    }
    double rlo = rmax / 2;
    std::size_t nlo = 0, nhi = 0;
    for (const auto& e : elems) {
        if (e.orbit_dist <= rlo) ++nlo;
        if (e.orbit_dist <= rmax) ++nhi;
    }
    if (nhi <= nlo) {
        r.value = 0;
        return r;
    }
    r.value = (std::log(static_cast<double>(nhi)) - std::log(static_cast<double>(nlo))) /
              (rmax - rlo);
    return r;
}

DiagnosticVerdict fundamental_diagnostic(const EstimateReport& h, const EstimateReport& l,
                                         const EstimateReport& v) {
    DiagnosticVerdict d;
    if (!(l.value > l.uncertainty) || !(v.value > 0)) {
        d.verdict = "degenerate";
        return d;
    }
    d.ratio = h.value / (l.value * v.value);
    d.ratio_lo = (h.value - h.uncertainty) / ((l.value + l.uncertainty) * v.value);
    d.ratio_hi = (h.value + h.uncertainty) / ((l.value - l.uncertainty) * v.value);
    if (d.ratio_hi < 1.0)
        d.verdict = "singular-indicated";
    else if (d.ratio_lo > 1.0 + 1e-6)
        d.verdict = "violation-suspect";
    else
        d.verdict = "inconclusive";
    return d;
}

}  // namespace hywalk
