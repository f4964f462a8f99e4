#include "hywalk/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hywalk {

void check_measure(const FinSuppMeasure& mu, const Tolerances& tol) {
    double total = 0;
    for (const auto& a : mu.atoms) {
        if (!(a.mass > 0)) throw ConfigError("measure: non-positive atom mass");
        total += a.mass;
    }
    if (std::abs(total - 1.0) > tol.mass_total)
        throw ConfigError("measure: total mass " + std::to_string(total) + " != 1");
    if (mu.atoms.size() != mu.index.size())
        throw ConfigError("measure: key index out of sync");
}

namespace {

void insert_mass(FinSuppMeasure& mu, GroupElement&& g, double mass, const Tolerances& tol) {
    auto it = mu.index.find(g.key);
    if (it != mu.index.end()) {
        audit_key_match(mu.atoms[it->second].g.mat, g.mat, tol);
        mu.atoms[it->second].mass += mass;
        return;
    }
    mu.index.emplace(g.key, mu.atoms.size());
    mu.atoms.push_back({std::move(g), mass});
}

}  // namespace

FinSuppMeasure uniform_on_generators(const MarkedGroup& g, const Tolerances& tol) {
    std::vector<double> w(g.generators.size(), 1.0 / static_cast<double>(g.generators.size()));
    return measure_from_weights(g, w, tol);
}

FinSuppMeasure measure_from_weights(const MarkedGroup& g, const std::vector<double>& weights,
                                    const Tolerances& tol) {
    if (weights.size() != g.generators.size())
        throw ConfigError("measure: weight count does not match generator count");
    FinSuppMeasure mu;
    mu.model = g.model;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0)) throw ConfigError("measure: weights must be strictly positive");
        GroupElement e = g.generators[i];
        insert_mass(mu, std::move(e), weights[i], tol);
    }
    check_measure(mu, tol);
    return mu;
}

FinSuppMeasure measure_from_words(
    const MarkedGroup& g, const std::vector<std::pair<std::vector<std::uint8_t>, double>>& rows,
    const Tolerances& tol) {
    FinSuppMeasure mu;
    mu.model = g.model;
    for (const auto& [word, mass] : rows) {
        if (!(mass > 0)) throw ConfigError("measure: masses must be strictly positive");
        insert_mass(mu, make_element(word_to_matrix(g, word), word, tol), mass, tol);
    }
    check_measure(mu, tol);
    return mu;
}

FinSuppMeasure point_mass(const MarkedGroup& g, const std::vector<std::uint8_t>& word,
                          const Tolerances& tol) {
    return measure_from_words(g, {{word, 1.0}}, tol);
}

double entropy(const FinSuppMeasure& mu) {
    std::vector<double> masses;
    masses.reserve(mu.atoms.size());
    for (const auto& a : mu.atoms) masses.push_back(a.mass);
    std::sort(masses.begin(), masses.end());
    double h = 0;
    for (double m : masses) h -= m * std::log(m);
    return h;
}

FinSuppMeasure convolve(const FinSuppMeasure& mu, const FinSuppMeasure& nu, const Tolerances& tol,
                        const ConvolveOptions& opt) {
    if (mu.model != nu.model) throw ConfigError("convolve: measures on different models");
    FinSuppMeasure out;
    out.model = mu.model;
    out.words_stored = opt.store_words && mu.words_stored && nu.words_stored;
    out.dropped_mass = mu.dropped_mass + nu.dropped_mass;
    for (const auto& ga : mu.atoms)
        for (const auto& hb : nu.atoms) {
            Isometry prod = compose(ga.g.mat, hb.g.mat);
            std::vector<std::uint8_t> w;
            if (out.words_stored) {
                w = ga.g.word;
                w.insert(w.end(), hb.g.word.begin(), hb.g.word.end());
            }
            insert_mass(out, make_element(std::move(prod), std::move(w), tol),
                        ga.mass * hb.mass, tol);
            if (out.atoms.size() > tol.support_cap) {
                std::ostringstream os;
                os << "convolve: support cap " << tol.support_cap << " exceeded";
                if (!opt.label.empty()) os << " at " << opt.label;
                throw CapError(os.str());
            }
        }
    if (opt.prune) {
        double dropped = 0;
        std::vector<Atom> kept;
        kept.reserve(out.atoms.size());
        for (auto& a : out.atoms) {
            if (a.mass < tol.prune_floor)
                dropped += a.mass;
            else
                kept.push_back(std::move(a));
        }
        if (dropped > 0) {
            out.atoms = std::move(kept);
            out.index.clear();
            double scale = 1.0 / (1.0 - dropped);
            for (std::size_t i = 0; i < out.atoms.size(); ++i) {
                out.atoms[i].mass *= scale;
                out.index.emplace(out.atoms[i].g.key, i);
            }
            out.dropped_mass += dropped;
        }
    }
    return out;
}

FinSuppMeasure convolve_power(const FinSuppMeasure& mu, int n, const Tolerances& tol,
                              const ConvolveOptions& opt) {
    if (n < 1) throw ConfigError("convolve_power: n must be >= 1");
    FinSuppMeasure acc = mu;
    for (int k = 2; k <= n; ++k) {
        ConvolveOptions o = opt;
        o.label = "power " + std::to_string(k);
        acc = convolve(mu, acc, tol, o);
    }
    return acc;
}

FinSuppMeasure pushforward(const FinSuppMeasure& mu, const MarkedGroup& target,
                           const std::vector<int>& correspondence, const Tolerances& tol) {
    if (!mu.words_stored)
        throw ConfigError("pushforward: measure atoms carry no words");
    std::vector<bool> seen(target.generators.size(), false);
    if (correspondence.size() > target.generators.size())
        throw ConfigError("pushforward: correspondence longer than target generator list");
    for (int t : correspondence) {
        if (t < 0 || t >= static_cast<int>(target.generators.size()) || seen[t])
            throw ConfigError("pushforward: correspondence is not a generator bijection");
        seen[t] = true;
    }
    FinSuppMeasure out;
    out.model = target.model;
    out.dropped_mass = mu.dropped_mass;
    for (const auto& a : mu.atoms) {
        std::vector<std::uint8_t> w;
        w.reserve(a.g.word.size());
        for (auto idx : a.g.word) {
            if (idx >= correspondence.size())
                throw ConfigError("pushforward: word index outside the correspondence");
            w.push_back(static_cast<std::uint8_t>(correspondence[idx]));
        }
        Isometry mat = word_to_matrix(target, w);
        insert_mass(out, make_element(std::move(mat), std::move(w), tol), a.mass, tol);
    }
    check_measure(out, tol);
    return out;
}

Nondegeneracy is_nondegenerate(const FinSuppMeasure& mu, const MarkedGroup& g, int probe_radius,
                               const Tolerances& tol) {
    if (probe_radius < 1 || probe_radius > tol.ball_cap)
        throw CapError("is_nondegenerate: probe radius outside [1, ball cap]");
    // semigroup closure of the support up to probe_radius
    std::unordered_map<std::uint64_t, Isometry> reached;
    std::vector<Isometry> frontier;
    auto id = identity_for(g.model);
    reached.emplace(canonical_key(id, tol), id);
    frontier.push_back(id);
    for (int r = 0; r < probe_radius; ++r) {
        std::vector<Isometry> next;
        for (const auto& m : frontier)
            for (const auto& a : mu.atoms) {
                Isometry p = compose(m, a.g.mat);
                if (auto* mo = std::get_if<MoebiusIsometry>(&p)) canonicalize(*mo);
                auto key = canonical_key(p, tol);
                if (reached.emplace(key, p).second) next.push_back(std::move(p));
                if (reached.size() > tol.support_cap)
                    throw CapError("is_nondegenerate: closure cap exceeded");
            }
        frontier = std::move(next);
    }
    for (const auto& e : ball(g, probe_radius / 2, tol))
        if (reached.find(e.key) == reached.end()) return Nondegeneracy::Unknown;
    return Nondegeneracy::Yes;
}

}  // namespace hywalk
