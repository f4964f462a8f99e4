#include "hywalk/group.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace hywalk {

CoxeterDiagram make_diagram(int size, int dim) {
    CoxeterDiagram d;
    d.size = size;
    d.dim = dim;
    d.labels.assign(static_cast<std::size_t>(size) * size, 2);
    for (int i = 0; i < size; ++i) d.label(i, i) = 1;
    return d;
}

void check_diagram(const CoxeterDiagram& d) {
    if (d.size < 1) throw ConfigError("diagram: empty");
    if (d.dim != 2 && d.dim != 3) throw ConfigError("diagram: dimension must be 2 or 3");
    if (static_cast<int>(d.labels.size()) != d.size * d.size)
        throw ConfigError("diagram: label matrix size mismatch");
    for (int i = 0; i < d.size; ++i) {
        if (d.label(i, i) != 1) throw ConfigError("diagram: diagonal labels must be 1");
        for (int j = 0; j < d.size; ++j) {
            if (d.label(i, j) != d.label(j, i)) throw ConfigError("diagram: labels not symmetric");
            if (i != j && d.label(i, j) < 2) throw ConfigError("diagram: off-diagonal label < 2");
        }
    }
}

std::vector<double> gram_matrix(const CoxeterDiagram& d) {
    std::vector<double> G(static_cast<std::size_t>(d.size) * d.size, 0.0);
    for (int i = 0; i < d.size; ++i)
        for (int j = 0; j < d.size; ++j) {
            if (i == j)
                G[i * d.size + j] = 1.0;
            else {
                int m = d.label(i, j);
                G[i * d.size + j] = (m == INF_LABEL) ? -1.0 : -std::cos(M_PI / m);
            }
        }
    return G;
}

namespace {

// Jacobi sweeps; m is tiny here so no pivot strategy needed.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                double theta = (a[q * n + q] - a[p * n + p]) / (2 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1.0 / std::sqrt(t * t + 1), s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = a[i * n + i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace

SignatureReport gram_signature(const CoxeterDiagram& d, const Tolerances&) {
    auto G = gram_matrix(d);
    auto ev = symmetric_eigenvalues(G, d.size);
    SignatureReport r;
    const double z = 1e-9;
    for (double e : ev) {
        if (e > z)
            ++r.positive;
        else if (e < -z)
            ++r.negative;
        else
            ++r.zero;
    }
    std::ostringstream os;
    os << "signature (" << r.positive << "+, " << r.zero << "0, " << r.negative << "-)";
    r.detail = os.str();
    if (r.negative == 1 && r.zero == 0)
        r.kind = GramSignature::Hyperbolic;
    else if (r.negative == 0 && r.zero == 0)
        r.kind = GramSignature::Spherical;
    else if (r.negative == 0 && r.zero >= 1)
        r.kind = GramSignature::Degenerate;
    else
        r.kind = GramSignature::Unrealizable;
    return r;
}

GroupElement make_element(Isometry m, std::vector<std::uint8_t> word, const Tolerances& tol) {
    if (auto* mo = std::get_if<MoebiusIsometry>(&m)) canonicalize(*mo);
    GroupElement e;
    e.mat = std::move(m);
    e.word = std::move(word);
    e.key = canonical_key(e.mat, tol);
    return e;
}

double orbit_displacement(const MarkedGroup& g, const Isometry& m, const Tolerances& tol) {
    if (const auto* mo = std::get_if<MoebiusIsometry>(&m)) {
        double f2 = 0;
        for (const auto& e : mo->a) f2 += std::norm(e);
        double c = std::max(1.0, f2 / 2.0);
        return std::acosh(c);
    }
    const auto& lo = std::get<LorentzIsometry>(m);
    double c = lo.a[0];  // (g o)_0 = -<o, g o>
    if (c < 1.0 - tol.dist_clamp) throw GeometryError("orbit_displacement: invalid matrix");
    (void)g;
    return std::acosh(std::max(1.0, c));
}

Isometry word_to_matrix(const MarkedGroup& g, const std::vector<std::uint8_t>& word) {
    Isometry m = identity_for(g.model);
    for (auto idx : word) {
        if (idx >= g.generators.size()) throw ConfigError("word refers to a missing generator");
        m = compose(m, g.generators[idx].mat);
    }
    return m;
}

void check_marked_group(const MarkedGroup& g, const Tolerances& tol) {
    for (std::size_t i = 0; i < g.generators.size(); ++i)
        for (std::size_t j = i + 1; j < g.generators.size(); ++j)
            if (g.generators[i].key == g.generators[j].key)
                throw ConfigError("marked group: duplicate generators under canonical keys");
    if (g.diagram) {
        auto rep = verify_relations(g, tol);
        if (rep.max_residual > 10 * tol.relation_residual)
            throw AuditError("marked group: relation residual " +
                             std::to_string(rep.max_residual) + " at " + rep.worst_relator);
    }
}

VinbergRealization vinberg_realize(const CoxeterDiagram& d, const Tolerances& tol) {
    check_diagram(d);
    const int m = d.size, dim = d.dim;
    if (m > dim + 1)
        throw ConfigError("vinberg_realize: only m <= d+1 (simplex and sub-simplex) diagrams");
    auto G = gram_matrix(d);
    auto fail = [&](const std::string& why) {
        auto sig = gram_signature(d, tol);
        throw ConfigError("vinberg_realize: " + why + "; " + sig.detail);
    };

    // Triangular embedding: spatial axes 1..dim first, the time axis only for
    // a final timelike (hyperbolic) or null (parabolic) completion.
    std::vector<LorentzVector> normals;
    bool used_time = false, used_null = false;
    for (int i = 0; i < m; ++i) {
        LorentzVector e;
        e.dim = dim;
        double rem = 1.0;  // <e_i,e_i> = 1 minus what the solved coords carry
        for (int j = 0; j < i; ++j) {
            double dot = 0;
            for (int k = 1; k <= dim; ++k) dot += e.x[k] * normals[j].x[k];
            dot -= e.x[0] * normals[j].x[0];
            double pivot = normals[j].x[j + 1];
            if (std::abs(pivot) < 1e-12)
                fail("leading subdiagram is degenerate in this row order");
            double c = (G[i * m + j] - dot) / pivot;
            e.x[j + 1] = c;
        }
        for (int k = 1; k <= dim; ++k) rem -= e.x[k] * e.x[k];
        const double z = 1e-10;
        if (rem > z) {
            // spacelike completion on a fresh spatial axis
            if (i + 1 > dim) {
                if (i == m - 1) fail("spherical diagram (positive definite Gram)");
                fail("ran out of spatial directions");
            }
            e.x[i + 1] = std::sqrt(rem);
        } else if (rem < -z) {
            if (used_time || used_null) fail("more than one non-elliptic direction");
            if (i != m - 1) fail("timelike direction before the last row; reorder the diagram");
            used_time = true;
            e.x[0] = std::sqrt(-rem);
        } else {
            // parabolic: null completion time + fresh spatial axis
            if (used_time || used_null) fail("more than one non-elliptic direction");
            if (i != m - 1) fail("degenerate direction before the last row; reorder the diagram");
            if (i + 1 > dim) fail("degenerate diagram (Euclidean)");
            used_null = true;
            e.x[0] = 1.0;
            e.x[i + 1] = 1.0;
        }
        normals.push_back(e);
    }

    VinbergRealization out;
    out.signature.positive = m - (used_time ? 1 : 0) - (used_null ? 1 : 0);
    out.signature.negative = used_time ? 1 : 0;
    out.signature.zero = used_null ? 1 : 0;
    out.signature.kind = used_time    ? GramSignature::Hyperbolic
                         : used_null  ? GramSignature::Degenerate
                                      : GramSignature::Spherical;
    out.signature.detail = "realized";
    out.normals = normals;
    out.group.model = dim == 2 ? Model::LOR2 : Model::LOR3;
    out.group.diagram = d;
    for (int i = 0; i < m; ++i)
        out.group.generators.push_back(
            make_element(reflection_matrix(normals[i]), {static_cast<std::uint8_t>(i)}, tol));
    check_marked_group(out.group, tol);
    return out;
}

RelationReport verify_relations(const MarkedGroup& g, const Tolerances& tol) {
    if (!g.diagram) throw ConfigError("verify_relations: no diagram attached");
    const auto& d = *g.diagram;
    RelationReport rep;
    auto record = [&](double res, const std::string& name) {
        ++rep.relators_checked;
        if (res > rep.max_residual) {
            rep.max_residual = res;
            rep.worst_relator = name;
        }
    };
    for (int i = 0; i < d.size; ++i) {
        auto sq = compose(g.generators[i].mat, g.generators[i].mat);
        record(deviation_from_identity(sq), "r" + std::to_string(i + 1) + "^2");
    }
    for (int i = 0; i < d.size; ++i)
        for (int j = i + 1; j < d.size; ++j) {
            int mij = d.label(i, j);
            if (mij == INF_LABEL) continue;
            auto p = compose(g.generators[i].mat, g.generators[j].mat);
            Isometry pw = identity_for(g.model);
            for (int k = 0; k < mij; ++k) pw = compose(pw, p);
            std::ostringstream os;
            os << "(r" << i + 1 << " r" << j + 1 << ")^" << mij;
            record(deviation_from_identity(pw), os.str());
        }
    (void)tol;
    return rep;
}

std::vector<GroupElement> ball(const MarkedGroup& g, int radius, const Tolerances& tol) {
    if (radius < 0) throw ConfigError("ball: negative radius");
    if (radius > tol.ball_cap)
        throw CapError("ball: radius " + std::to_string(radius) + " exceeds cap " +
                       std::to_string(tol.ball_cap));
    std::vector<GroupElement> elems;
    std::unordered_map<std::uint64_t, std::size_t> index;
    auto push = [&](GroupElement&& e) -> bool {
        auto it = index.find(e.key);
        if (it != index.end()) {
            audit_key_match(elems[it->second].mat, e.mat, tol);
            return false;
        }
        if (elems.size() >= tol.support_cap) throw CapError("ball: support cap exceeded");
        e.orbit_dist = orbit_displacement(g, e.mat, tol);
        index.emplace(e.key, elems.size());
        elems.push_back(std::move(e));
        return true;
    };
    push(make_element(identity_for(g.model), {}, tol));
    std::size_t layer_begin = 0;
    for (int r = 1; r <= radius; ++r) {
        std::size_t layer_end = elems.size();
        for (std::size_t idx = layer_begin; idx < layer_end; ++idx)
            for (std::size_t gi = 0; gi < g.generators.size(); ++gi) {
                // copy: push may reallocate elems
                GroupElement parent = elems[idx];
                auto w = parent.word;
                w.push_back(static_cast<std::uint8_t>(gi));
                push(make_element(compose(parent.mat, g.generators[gi].mat), std::move(w), tol));
            }
        layer_begin = layer_end;
    }
    return elems;
}

MarkedGroup triangle_family(int p, int q, int n, const Tolerances& tol) {
    auto inv = [](int m) { return m == INF_LABEL ? 0.0 : 1.0 / m; };
    if (p < 2 || q < 2 || n < 2) throw ConfigError("triangle_family: labels must be >= 2");
    if (inv(p) + inv(q) + inv(n) >= 1.0 - 1e-12)
        throw ConfigError("triangle_family: 1/p + 1/q + 1/n must be < 1 (hyperbolic)");
    auto d = make_diagram(3, 2);
    d.label(0, 1) = d.label(1, 0) = p;
    d.label(1, 2) = d.label(2, 1) = q;
    d.label(0, 2) = d.label(2, 0) = n;
    auto real = vinberg_realize(d, tol);
    real.group.marked_edge = std::make_pair(0, 2);
    std::ostringstream os;
    os << "triangle(" << p << "," << q << ",";
    if (n == INF_LABEL)
        os << "inf)";
    else
        os << n << ")";
    real.group.name = os.str();
    return real.group;
}

namespace {

MoebiusIsometry real_matrix(Model m, double a, double b, double c, double d) {
    MoebiusIsometry g;
    g.model = m;
    g.a = {cplx(a, 0), cplx(b, 0), cplx(c, 0), cplx(d, 0)};
    canonicalize(g);
    return g;
}

}  // namespace

MarkedGroup sanov_group() {
    MarkedGroup g;
    g.model = Model::UHP2;
    g.name = "sanov";
    auto A = real_matrix(Model::UHP2, 1, 2, 0, 1);
    auto B = real_matrix(Model::UHP2, 1, 0, 2, 1);
    g.generators.push_back(make_element(A, {0}));
    g.generators.push_back(make_element(inverse(A), {1}));
    g.generators.push_back(make_element(B, {2}));
    g.generators.push_back(make_element(inverse(B), {3}));
    check_marked_group(g);
    return g;
}

MarkedGroup zsquare_group() {
    MarkedGroup g;
    g.model = Model::UHS3;
    g.name = "zsquare";
    MoebiusIsometry T;
    T.model = Model::UHS3;
    T.a = {cplx(1, 0), cplx(1, 0), cplx(0, 0), cplx(1, 0)};
    MoebiusIsometry U;
    U.model = Model::UHS3;
    U.a = {cplx(1, 0), cplx(0, 1), cplx(0, 0), cplx(1, 0)};
    canonicalize(T);
    canonicalize(U);
    g.generators.push_back(make_element(T, {0}));
    g.generators.push_back(make_element(inverse(T), {1}));
    g.generators.push_back(make_element(U, {2}));
    g.generators.push_back(make_element(inverse(U), {3}));
    check_marked_group(g);
    return g;
}

MarkedGroup axis_group(double lambda) {
    if (lambda <= 1.0) throw ConfigError("axis_group: lambda must exceed 1");
    MarkedGroup g;
    g.model = Model::UHP2;
    g.name = "axis";
    auto A = real_matrix(Model::UHP2, lambda, 0, 0, 1.0 / lambda);
    g.generators.push_back(make_element(A, {0}));
    g.generators.push_back(make_element(inverse(A), {1}));
    check_marked_group(g);
    return g;
}

}  // namespace hywalk
