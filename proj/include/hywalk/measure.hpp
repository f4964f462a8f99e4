#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hywalk/group.hpp"

namespace hywalk {

struct Atom {
    GroupElement g;
    double mass = 0;
};

// Finitely supported probability measure on a marked group. Atoms are kept in
// first-insertion order (all iteration and sampling is order-deterministic);
// the index maps canonical keys to positions.
struct FinSuppMeasure {
    Model model = Model::LOR2;
    std::vector<Atom> atoms;
    std::unordered_map<std::uint64_t, std::size_t> index;
    double dropped_mass = 0.0;  // cumulative pruning loss across convolutions
    bool words_stored = true;

    const Atom* find(std::uint64_t key) const {
        auto it = index.find(key);
        return it == index.end() ? nullptr : &atoms[it->second];
    }
};

void check_measure(const FinSuppMeasure& mu, const Tolerances& tol = default_tolerances());

FinSuppMeasure uniform_on_generators(const MarkedGroup& g,
                                     const Tolerances& tol = default_tolerances());
FinSuppMeasure measure_from_weights(const MarkedGroup& g, const std::vector<double>& weights,
                                    const Tolerances& tol = default_tolerances());
FinSuppMeasure measure_from_words(const MarkedGroup& g,
                                  const std::vector<std::pair<std::vector<std::uint8_t>, double>>& rows,
                                  const Tolerances& tol = default_tolerances());
FinSuppMeasure point_mass(const MarkedGroup& g, const std::vector<std::uint8_t>& word,
                          const Tolerances& tol = default_tolerances());

// Shannon entropy in nats; masses are accumulated in ascending order so equal
// multisets of masses give bit-identical values.
double entropy(const FinSuppMeasure& mu);

struct ConvolveOptions {
    bool store_words = true;
    bool prune = true;
    std::string label;  // context for cap errors, e.g. "power 7"
};

FinSuppMeasure convolve(const FinSuppMeasure& mu, const FinSuppMeasure& nu,
                        const Tolerances& tol = default_tolerances(),
                        const ConvolveOptions& opt = {});

// mu^{*n} by iterated mu * mu^{*k}; every intermediate entropy is wanted by
// the estimators, so no squaring.
FinSuppMeasure convolve_power(const FinSuppMeasure& mu, int n,
                              const Tolerances& tol = default_tolerances(),
                              const ConvolveOptions& opt = {});

// Re-evaluates every atom word in the target group, generator i -> generator
// correspondence[i]; canonical-key collisions in the target merge by adding
// masses. Pruning disabled; total mass is preserved exactly.
FinSuppMeasure pushforward(const FinSuppMeasure& mu, const MarkedGroup& target,
                           const std::vector<int>& correspondence,
                           const Tolerances& tol = default_tolerances());

enum class Nondegeneracy { Yes, Unknown };

// "yes" when semigroup products of the support up to probe_radius cover the
// generator ball of radius probe_radius/2; never claims "no".
Nondegeneracy is_nondegenerate(const FinSuppMeasure& mu, const MarkedGroup& g, int probe_radius,
                               const Tolerances& tol = default_tolerances());

}  // namespace hywalk
