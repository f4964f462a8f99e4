#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hywalk/measure.hpp"

using namespace hywalk;

namespace {

std::mt19937_64 rng(77001ULL);
double runif() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// random small measure supported on ball(2) of the group
FinSuppMeasure random_measure(const MarkedGroup& g) {
    auto b2 = ball(g, 2);
    std::vector<std::pair<std::vector<std::uint8_t>, double>> rows;
    double total = 0;
    for (const auto& e : b2) {
        double w = 0.05 + runif();
        rows.emplace_back(e.word, w);
        total += w;
    }
    for (auto& [w, m] : rows) m /= total;
    // uses words, so atoms merge by canonical key automatically
    return measure_from_words(g, rows);
}

}  // namespace

TEST_CASE("entropy closed forms") {
    auto s = sanov_group();
    auto mu = uniform_on_generators(s);
    CHECK(entropy(mu) == doctest::Approx(std::log(4.0)).epsilon(1e-12));

    auto delta = point_mass(s, {0});
    CHECK(entropy(delta) == 0.0);

    auto w = measure_from_weights(s, {0.5, 0.25, 0.125, 0.125});
    // (1/2, 1/4, 1/8, 1/8): H = 1.75 log 2
    CHECK(entropy(w) == doctest::Approx(1.75 * std::log(2.0)).epsilon(1e-12));
    auto w3 = measure_from_words(s, {{{0}, 0.5}, {{2}, 0.25}, {{3}, 0.25}});
    CHECK(entropy(w3) == doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("measure validation") {
    auto s = sanov_group();
    CHECK_THROWS_AS(measure_from_weights(s, {0.5, 0.5}), ConfigError);
    CHECK_THROWS_AS(measure_from_weights(s, {0.5, 0.5, 0.5, -0.5}), ConfigError);
    CHECK_THROWS_AS(measure_from_weights(s, {0.3, 0.3, 0.3, 0.3}), ConfigError);
}

TEST_CASE("convolution basics") {
    auto s = sanov_group();
    auto mu = uniform_on_generators(s);

    // delta_e * mu = mu
    auto id = point_mass(s, {});
    auto conv = convolve(id, mu);
    REQUIRE(conv.atoms.size() == mu.atoms.size());
    for (const auto& a : mu.atoms) {
        const auto* b = conv.find(a.g.key);
        REQUIRE(b != nullptr);
        CHECK(std::abs(b->mass - a.mass) < 1e-12);
    }

    // order-2 element: delta_r * delta_r = delta_e
    auto d = make_diagram(2, 2);
    d.label(0, 1) = d.label(1, 0) = INF_LABEL;
    auto di = vinberg_realize(d).group;
    auto dr = point_mass(di, {0});
    auto sq = convolve(dr, dr);
    REQUIRE(sq.atoms.size() == 1);
    CHECK(sq.atoms[0].g.key == canonical_key(identity_for(di.model)));

    // mu uniform on {a, a^-1}: mu*mu = {a^2: 1/4, e: 1/2, a^-2: 1/4}
    auto ax = axis_group(2.0);
    auto half = uniform_on_generators(ax);
    auto h2 = convolve(half, half);
    REQUIRE(h2.atoms.size() == 3);
    const auto* e = h2.find(canonical_key(identity_for(ax.model)));
    REQUIRE(e != nullptr);
    CHECK(e->mass == doctest::Approx(0.5));
    for (const auto& a : h2.atoms)
        if (a.g.key != e->g.key) CHECK(a.mass == doctest::Approx(0.25));
}

TEST_CASE("free group entropy H2 = 3.5 log 2 by exact 16-term enumeration") {
    auto s = sanov_group();
    auto mu = uniform_on_generators(s);
    auto m2 = convolve(mu, mu);
    CHECK(entropy(m2) == doctest::Approx(3.5 * std::log(2.0)).epsilon(1e-12));
    // oracle: 16 ordered pairs, 4 cancel to e, 12 distinct reduced words
    CHECK(m2.atoms.size() == 13);
}

TEST_CASE("convolution subadditivity and associativity") {
    auto g = triangle_family(2, 3, 7);
    for (int trial = 0; trial < 50; ++trial) {
        auto mu = random_measure(g);
        auto nu = random_measure(g);
        CHECK(entropy(convolve(mu, nu)) <= entropy(mu) + entropy(nu) + 1e-9);
    }
    auto a = random_measure(g), b = random_measure(g), c = random_measure(g);
    auto left = convolve(convolve(a, b), c);
    auto right = convolve(a, convolve(b, c));
    REQUIRE(left.atoms.size() == right.atoms.size());
    for (const auto& at : left.atoms) {
        const auto* bt = right.find(at.g.key);
        REQUIRE(bt != nullptr);
        CHECK(std::abs(at.mass - bt->mass) < 1e-10);
    }
}

TEST_CASE("support cap raises a labeled error") {
    Tolerances tol;
    tol.support_cap = 30;  // |supp mu*3| = 40 on the free group
    auto s = sanov_group();
    auto mu = uniform_on_generators(s, tol);
    ConvolveOptions opt;
    opt.label = "power 3";
    CHECK_THROWS_WITH_AS(
        (void)convolve(convolve(mu, mu, tol), mu, tol, opt),
        doctest::Contains("power 3"), CapError);
}

TEST_CASE("pushforward: identity, free-to-abelian collisions, mass preservation") {
    auto s = sanov_group();
    auto mu = uniform_on_generators(s);
    std::vector<int> id_corr{0, 1, 2, 3};

    auto same = pushforward(mu, s, id_corr);
    REQUIRE(same.atoms.size() == mu.atoms.size());
    for (const auto& a : mu.atoms) CHECK(std::abs(same.find(a.g.key)->mass - a.mass) < 1e-15);

    // free on {a,b} -> Z^2: no length-1 collisions
    auto z2 = zsquare_group();
    auto push = pushforward(mu, z2, id_corr);
    CHECK(push.atoms.size() == 4);
    for (const auto& a : push.atoms) CHECK(a.mass == doctest::Approx(0.25));

    // second convolution: H((push mu)^*2) = 3 log 2 <= H(mu^*2) = 3.5 log 2
    auto mu2 = convolve(mu, mu);
    auto push2 = pushforward(mu2, z2, id_corr);
    CHECK(entropy(push2) == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(entropy(push2) <= entropy(mu2) + 1e-9);

    // the two routes agree: push then convolve == convolve then push
    auto conv_of_push = convolve(push, push);
    REQUIRE(conv_of_push.atoms.size() == push2.atoms.size());
    for (const auto& a : push2.atoms)
        CHECK(std::abs(conv_of_push.find(a.g.key)->mass - a.mass) < 1e-12);

    // exact mass conservation
    double total = 0;
    for (const auto& a : push2.atoms) total += a.mass;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));

    // measures without words cannot be pushed
    ConvolveOptions nw;
    nw.store_words = false;
    auto wordless = convolve(mu, mu, default_tolerances(), nw);
    CHECK_THROWS_AS(pushforward(wordless, z2, id_corr), ConfigError);
    CHECK_THROWS_AS(pushforward(mu, z2, std::vector<int>{0, 0, 2, 3}), ConfigError);
}

TEST_CASE("finite-level entropy inequality along the quotient") {
    // the free group covers Z^2 via a -> (1,0), b -> (0,1); every level obeys
    // H(push(mu)^*n) <= H(mu^*n)
    auto s = sanov_group();
    auto z2 = zsquare_group();
    auto mu = uniform_on_generators(s);
    std::vector<int> corr{0, 1, 2, 3};
    auto pushed = pushforward(mu, z2, corr);
    auto accF = mu;
    auto accZ = pushed;
    for (int n = 2; n <= 6; ++n) {
        accF = convolve(mu, accF);
        accZ = convolve(pushed, accZ);
        CHECK(entropy(accZ) <= entropy(accF) + 1e-9);
    }
}

TEST_CASE("nondegeneracy probe") {
    auto g = triangle_family(2, 3, 7);
    CHECK(is_nondegenerate(uniform_on_generators(g), g, 4) == Nondegeneracy::Yes);
    CHECK(is_nondegenerate(point_mass(g, {0}), g, 4) == Nondegeneracy::Unknown);

    auto d = make_diagram(2, 2);
    d.label(0, 1) = d.label(1, 0) = INF_LABEL;
    auto di = vinberg_realize(d).group;
    CHECK(is_nondegenerate(uniform_on_generators(di), di, 4) == Nondegeneracy::Yes);
}
