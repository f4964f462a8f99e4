#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "exact_coxeter.hpp"
#include "hywalk/group.hpp"

using namespace hywalk;

namespace {

MarkedGroup t237() { return triangle_family(2, 3, 7); }

}  // namespace

TEST_CASE("canonical keys collapse PSL signs and involutions") {
    MoebiusIsometry M;
    M.model = Model::UHP2;
    M.a = {cplx(1, 0), cplx(3, 0), cplx(2, 0), cplx(7, 0)};
    canonicalize(M);
    MoebiusIsometry N;
    N.model = Model::UHP2;
    N.a = {cplx(-1, 0), cplx(-3, 0), cplx(-2, 0), cplx(-7, 0)};
    canonicalize(N);
    CHECK(canonical_key(Isometry(M)) == canonical_key(Isometry(N)));

    auto g = t237();
    for (const auto& r : g.generators) {
        auto rr = compose(r.mat, r.mat);
        CHECK(canonical_key(rr) == canonical_key(identity_for(g.model)));
    }
}

TEST_CASE("key collision audit") {
    auto g = t237();
    const auto& a = g.generators[0].mat;
    const auto& b = g.generators[2].mat;
    CHECK_THROWS_AS(audit_key_match(a, b), AuditError);  // far apart: corruption
    CHECK_NOTHROW(audit_key_match(a, a));
}

TEST_CASE("vinberg realization: right-angle pair") {
    auto d = make_diagram(2, 2);
    d.label(0, 1) = d.label(1, 0) = 2;
    auto real = vinberg_realize(d);
    CHECK(real.signature.kind == GramSignature::Spherical);
    CHECK(std::abs(lorentz_product(real.normals[0], real.normals[1])) < 1e-12);
    for (const auto& e : real.normals)
        CHECK(lorentz_product(e, e) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("vinberg realization: triangle signatures") {
    // (2,3,7): det G = 1 - cos^2(pi/3) - cos^2(pi/7) < 0, hyperbolic
    double detG = 1 - std::pow(std::cos(M_PI / 3), 2) - std::pow(std::cos(M_PI / 7), 2);
    CHECK(detG < 0);
    auto real = vinberg_realize(t237().diagram.value());
    CHECK(real.signature.kind == GramSignature::Hyperbolic);

    auto sig = gram_signature(t237().diagram.value());
    CHECK(sig.kind == GramSignature::Hyperbolic);
    CHECK(sig.positive == 2);
    CHECK(sig.negative == 1);

    // (2,3,6) is Euclidean-degenerate
    auto d6 = make_diagram(3, 2);
    d6.label(0, 1) = d6.label(1, 0) = 2;
    d6.label(1, 2) = d6.label(2, 1) = 3;
    d6.label(0, 2) = d6.label(2, 0) = 6;
    CHECK_THROWS_AS(vinberg_realize(d6), ConfigError);
    CHECK(gram_signature(d6).kind == GramSignature::Degenerate);

    // all labels 2 in d=2: spherical, rejected
    auto dsph = make_diagram(3, 2);
    CHECK_THROWS_AS(vinberg_realize(dsph), ConfigError);
    CHECK(gram_signature(dsph).kind == GramSignature::Spherical);
}

TEST_CASE("vinberg realization reproduces the Gram matrix") {
    for (auto labels :
         {std::array<int, 3>{2, 3, 7}, {2, 4, 5}, {3, 3, 4}, {2, 3, INF_LABEL}}) {
        auto g = triangle_family(labels[0], labels[1], labels[2]);
        auto real = vinberg_realize(*g.diagram);
        auto G = gram_matrix(*g.diagram);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(lorentz_product(real.normals[i], real.normals[j]) -
                               G[i * 3 + j]) < 1e-10);
    }
}

TEST_CASE("verify_relations") {
    auto g = t237();
    auto rep = verify_relations(g);
    CHECK(rep.max_residual < 1e-9);
    CHECK(rep.relators_checked == 6);

    // sensitivity: a 1e-3 entry perturbation must show up
    auto bad = g;
    auto& mat = std::get<LorentzIsometry>(bad.generators[2].mat);
    mat.a[0] += 1e-3;
    auto rep2 = verify_relations(bad);
    CHECK(rep2.max_residual > 1e-4);
}

TEST_CASE("ball: radius 0 and infinite dihedral growth") {
    auto g = t237();
    auto b0 = ball(g, 0);
    REQUIRE(b0.size() == 1);
    CHECK(b0[0].word.empty());

    auto dinf = make_diagram(2, 2);
    dinf.label(0, 1) = dinf.label(1, 0) = INF_LABEL;
    auto di = vinberg_realize(dinf).group;
    auto b2 = ball(di, 2);
    CHECK(b2.size() == 5);  // e, r1, r2, r1r2, r2r1
    for (int r = 1; r <= 9; ++r)
        CHECK(ball(di, r).size() == static_cast<std::size_t>(2 * r + 1));
}

TEST_CASE("ball: nesting, words, displacement") {
    auto g = t237();
    auto b5 = ball(g, 5);
    auto b8 = ball(g, 8);
    std::set<std::uint64_t> keys8;
    for (const auto& e : b8) keys8.insert(e.key);
    for (const auto& e : b5) CHECK(keys8.count(e.key) == 1);

    for (const auto& e : b8) {
        auto m = word_to_matrix(g, e.word);
        CHECK(max_entry_distance(m, e.mat) < 1e-7);
        CHECK(e.orbit_dist >= 0);
    }

    CHECK_THROWS_AS(ball(g, 99), CapError);
}

TEST_CASE("ball sizes match the exact-arithmetic oracle up to radius 8") {
    auto g = t237();
    auto oracle = hywalk_oracle::triangle237_ball_sizes(8);
    for (int r = 0; r <= 8; ++r)
        CHECK(ball(g, r).size() == oracle[static_cast<std::size_t>(r)]);
}

TEST_CASE("500 shortest words dedupe to the oracle count") {
    auto g = t237();
    const std::size_t n_words = 500;
    std::set<std::uint64_t> seen;
    std::vector<Isometry> layer{identity_for(g.model)};
    seen.insert(canonical_key(layer[0]));
    std::size_t emitted = 1;
    while (emitted < n_words) {
        std::vector<Isometry> next;
        for (const auto& m : layer) {
            for (const auto& gen : g.generators) {
                if (emitted >= n_words) break;
                auto p = compose(m, gen.mat);
                ++emitted;
                seen.insert(canonical_key(p));
                next.push_back(std::move(p));
            }
            if (emitted >= n_words) break;
        }
        layer = std::move(next);
    }
    CHECK(seen.size() == hywalk_oracle::triangle237_distinct_words(n_words));
}

TEST_CASE("triangle family: relations, parabolic limit, convergence") {
    auto rep = verify_relations(t237());
    CHECK(rep.max_residual < 1e-9);

    // (2,3,inf): r1 r3 is parabolic, |trace| of its PSL2 image is 2
    auto ginf = triangle_family(2, 3, INF_LABEL);
    auto r1r3 = compose(std::get<LorentzIsometry>(ginf.generators[0].mat),
                        std::get<LorentzIsometry>(ginf.generators[2].mat));
    auto mob = lorentz_to_moebius(r1r3);
    double tr = std::abs(mob.a[0] + mob.a[3]);
    CHECK(tr == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(deviation_from_identity(Isometry(r1r3)) > 0.1);  // parabolic, not trivial

    // generator matrices converge entrywise to the limit, monotonically
    double dev_prev = 1e9;
    for (int n : {10, 20, 50}) {
        auto gn = triangle_family(2, 3, n);
        double dev = 0;
        for (int k = 0; k < 3; ++k)
            dev = std::max(dev,
                           max_entry_distance(gn.generators[k].mat, ginf.generators[k].mat));
        CHECK(dev < dev_prev);
        dev_prev = dev;
    }

    CHECK_THROWS_AS(triangle_family(2, 3, 5), ConfigError);  // spherical
    CHECK_THROWS_AS(triangle_family(2, 3, 6), ConfigError);  // Euclidean
}

TEST_CASE("moebius fixtures are duplicate-free and consistent") {
    for (auto g : {sanov_group(), zsquare_group(), axis_group(2.0)}) {
        check_marked_group(g);
        // generator, inverse pairs compose to the identity
        for (std::size_t i = 0; i + 1 < g.generators.size(); i += 2) {
            auto p = compose(g.generators[i].mat, g.generators[i + 1].mat);
            CHECK(deviation_from_identity(p) < 1e-12);
        }
    }
    // Sanov balls grow like the free group: |B(r)| = 1 + 4(3^r - 1)/2... counted directly
    auto s = sanov_group();
    std::size_t free_count = 1, sphere = 4;
    for (int r = 1; r <= 6; ++r) {
        free_count += sphere;
        CHECK(ball(s, r).size() == free_count);
        sphere *= 3;
    }
}
