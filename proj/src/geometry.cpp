#include "hywalk/geometry.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace hywalk {

namespace {

int msize(const LorentzIsometry& g) { return g.dim + 1; }

double& at(LorentzIsometry& g, int i, int j) { return g.a[i * (g.dim + 1) + j]; }
double at(const LorentzIsometry& g, int i, int j) { return g.a[i * (g.dim + 1) + j]; }

double jsig(int i) { return i == 0 ? -1.0 : 1.0; }

[[noreturn]] void geom_fail(const std::string& what) { throw GeometryError(what); }

}  // namespace

const char* model_name(Model m) {
    switch (m) {
        case Model::UHP2: return "UHP2";
        case Model::UHS3: return "UHS3";
        case Model::LOR2: return "LOR2";
        case Model::LOR3: return "LOR3";
    }
    return "?";
}

Model isometry_model(const Isometry& g) {
    if (const auto* m = std::get_if<MoebiusIsometry>(&g)) return m->model;
    const auto& l = std::get<LorentzIsometry>(g);
    return l.dim == 2 ? Model::LOR2 : Model::LOR3;
}

MoebiusIsometry moebius_identity(Model m) {
    MoebiusIsometry g;
    g.model = m;
    g.a = {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(1, 0)};
    return g;
}

LorentzIsometry lorentz_identity(int dim) {
    LorentzIsometry g;
    g.dim = dim;
    for (int i = 0; i <= dim; ++i) at(g, i, i) = 1.0;
    return g;
}

Isometry identity_for(Model m) {
    if (is_moebius(m)) return moebius_identity(m);
    return lorentz_identity(model_dim(m));
}

MoebiusIsometry compose(const MoebiusIsometry& g, const MoebiusIsometry& h) {
    if (g.model != h.model) geom_fail("compose: model mismatch");
    MoebiusIsometry r;
    r.model = g.model;
    r.a[0] = g.a[0] * h.a[0] + g.a[1] * h.a[2];
    r.a[1] = g.a[0] * h.a[1] + g.a[1] * h.a[3];
    r.a[2] = g.a[2] * h.a[0] + g.a[3] * h.a[2];
    r.a[3] = g.a[2] * h.a[1] + g.a[3] * h.a[3];
    canonicalize(r);
    return r;
}

LorentzIsometry compose(const LorentzIsometry& g, const LorentzIsometry& h) {
    if (g.dim != h.dim) geom_fail("compose: dimension mismatch");
    LorentzIsometry r;
    r.dim = g.dim;
    const int n = msize(g);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += at(g, i, k) * at(h, k, j);
            at(r, i, j) = s;
        }
    return r;
}

Isometry compose(const Isometry& g, const Isometry& h) {
    if (g.index() != h.index()) geom_fail("compose: mixed isometry kinds");
    if (const auto* mg = std::get_if<MoebiusIsometry>(&g))
        return compose(*mg, std::get<MoebiusIsometry>(h));
    return compose(std::get<LorentzIsometry>(g), std::get<LorentzIsometry>(h));
}

MoebiusIsometry inverse(const MoebiusIsometry& g) {
    MoebiusIsometry r;
    r.model = g.model;
    r.a = {g.a[3], -g.a[1], -g.a[2], g.a[0]};  // det 1
    canonicalize(r);
    return r;
}

LorentzIsometry inverse(const LorentzIsometry& g) {
    // A^{-1} = J A^T J for A in O(d,1)
    LorentzIsometry r;
    r.dim = g.dim;
    const int n = msize(g);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) at(r, i, j) = jsig(i) * jsig(j) * at(g, j, i);
    return r;
}

Isometry inverse(const Isometry& g) {
    if (const auto* m = std::get_if<MoebiusIsometry>(&g)) return inverse(*m);
    return inverse(std::get<LorentzIsometry>(g));
}

void canonicalize(MoebiusIsometry& g) {
    cplx det = g.a[0] * g.a[3] - g.a[1] * g.a[2];
    if (std::abs(det) < 1e-12) geom_fail("canonicalize: singular matrix");
    if (g.model == Model::UHP2) {
        if (det.real() <= 0.0)
            geom_fail("canonicalize: real Moebius matrix with det <= 0 is not in PSL2(R)");
        double s = 1.0 / std::sqrt(det.real());
        for (auto& e : g.a) e = cplx(e.real() * s, 0.0);
    } else {
        cplx s = 1.0 / std::sqrt(det);
        for (auto& e : g.a) e *= s;
    }
    // sign: first entry of (a,b,c,d) with |e| > 1e-9 decides
    for (const auto& e : g.a) {
        if (std::abs(e) <= 1e-9) continue;
        bool neg;
        if (std::abs(e.real()) > 1e-9)
            neg = e.real() < 0;
        else
            neg = e.imag() < 0;
        if (neg)
            for (auto& x : g.a) x = -x;
        break;
    }
}

double max_entry_distance(const Isometry& g, const Isometry& h) {
    if (g.index() != h.index()) return 1e300;
    double d = 0;
    if (const auto* mg = std::get_if<MoebiusIsometry>(&g)) {
        const auto& mh = std::get<MoebiusIsometry>(h);
        for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(mg->a[k] - mh.a[k]));
    } else {
        const auto& lg = std::get<LorentzIsometry>(g);
        const auto& lh = std::get<LorentzIsometry>(h);
        if (lg.dim != lh.dim) return 1e300;
        const int n2 = msize(lg) * msize(lg);
        for (int k = 0; k < n2; ++k) d = std::max(d, std::abs(lg.a[k] - lh.a[k]));
    }
    return d;
}

double max_abs_entry(const Isometry& g) {
    double d = 0;
    if (const auto* m = std::get_if<MoebiusIsometry>(&g)) {
        for (const auto& e : m->a) d = std::max(d, std::abs(e));
    } else {
        const auto& l = std::get<LorentzIsometry>(g);
        const int n2 = msize(l) * msize(l);
        for (int k = 0; k < n2; ++k) d = std::max(d, std::abs(l.a[k]));
    }
    return d;
}

double deviation_from_identity(const Isometry& g) {
    return max_entry_distance(g, identity_for(isometry_model(g)));
}

void check_hyperboloid(const LorentzVector& x, const Tolerances& tol) {
    double q = lorentz_product(x, x);
    if (std::abs(q + 1.0) > tol.hyperboloid_membership || x.x[0] <= 0)
        geom_fail("point is not on the upper hyperboloid sheet");
}

void check_lorentz_isometry(const LorentzIsometry& g, const Tolerances& tol) {
    const int n = msize(g);
    // A^T J A == J
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += at(g, k, i) * jsig(k) * at(g, k, j);
            double want = (i == j) ? jsig(i) : 0.0;
            if (std::abs(s - want) > tol.lorentz_form)
                geom_fail("matrix does not preserve the Lorentzian form");
        }
    if (at(g, 0, 0) <= 0) geom_fail("matrix swaps the hyperboloid sheets");
}

double lorentz_product(const LorentzVector& x, const LorentzVector& y) {
    if (x.dim != y.dim) geom_fail("lorentz_product: dimension mismatch");
    double s = -x.x[0] * y.x[0];
    for (int i = 1; i <= x.dim; ++i) s += x.x[i] * y.x[i];
    return s;
}

double dist_hyperboloid(const LorentzVector& x, const LorentzVector& y, const Tolerances& tol) {
    double c = -lorentz_product(x, y);
    if (c < 1.0 - tol.dist_clamp) geom_fail("dist_hyperboloid: cosh argument below 1");
    // acosh(c) via the difference vector: <x-y, x-y> = 2(c-1) is spacelike,
    // so cosh d = 1 + q/2 evaluates without cancellation and d(x,x) = 0 exactly
    LorentzVector diff = x;
    for (int i = 0; i <= x.dim; ++i) diff.x[i] -= y.x[i];
    double q = lorentz_product(diff, diff);
    if (q <= 0) return 0.0;
    return 2.0 * std::asinh(0.5 * std::sqrt(q));
}

double dist_halfspace(const HalfSpacePoint& p, const HalfSpacePoint& q) {
    if (p.h <= 0 || q.h <= 0) geom_fail("dist_halfspace: non-positive height");
    double dz = std::norm(p.z - q.z) + (p.h - q.h) * (p.h - q.h);
    return std::acosh(1.0 + dz / (2.0 * p.h * q.h));
}

LorentzVector lorentz_apply(const LorentzIsometry& g, const LorentzVector& x) {
    if (g.dim != x.dim) geom_fail("lorentz_apply: dimension mismatch");
    LorentzVector r;
    r.dim = x.dim;
    const int n = msize(g);
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int k = 0; k < n; ++k) s += at(g, i, k) * x.x[k];
        r.x[i] = s;
    }
    return r;
}

HalfSpacePoint mobius_apply(const MoebiusIsometry& g, const HalfSpacePoint& p) {
    // Upper half-space action of PSL2; restricts to the classical formula on
    // the vertical plane for real matrices.
    const cplx a = g.a[0], b = g.a[1], c = g.a[2], d = g.a[3];
    cplx czd = c * p.z + d;
    double den = std::norm(czd) + std::norm(c) * p.h * p.h;
    if (den <= 0) geom_fail("mobius_apply: degenerate denominator");
    HalfSpacePoint r;
    r.z = ((a * p.z + b) * std::conj(czd) + a * std::conj(c) * p.h * p.h) / den;
    r.h = p.h / den;
    if (g.model == Model::UHP2) r.z = cplx(r.z.real(), 0.0);
    return r;
}

LorentzVector reflect_lorentz(const LorentzVector& v, const LorentzVector& x) {
    double q = lorentz_product(v, v);
    if (q <= 1e-12) geom_fail("reflect_lorentz: vector is not spacelike");
    double s = 2.0 * lorentz_product(x, v) / q;
    LorentzVector r = x;
    for (int i = 0; i <= x.dim; ++i) r.x[i] -= s * v.x[i];
    return r;
}

LorentzIsometry reflection_matrix(const LorentzVector& v) {
    double q = lorentz_product(v, v);
    if (q <= 1e-12) geom_fail("reflection_matrix: vector is not spacelike");
    LorentzIsometry g = lorentz_identity(v.dim);
    for (int i = 0; i <= v.dim; ++i)
        for (int j = 0; j <= v.dim; ++j)
            at(g, i, j) -= 2.0 * v.x[i] * jsig(j) * v.x[j] / q;
    return g;
}

LorentzVector lorentz_basepoint(int dim) {
    LorentzVector o;
    o.dim = dim;
    o.x[0] = 1.0;
    return o;
}

HalfSpacePoint halfspace_basepoint(Model) { return {cplx(0, 0), 1.0}; }

std::array<double, 3> to_ball_model(const HalfSpacePoint& p, Model m) {
    if (p.h <= 0) geom_fail("to_ball_model: point on or below the model boundary");
    double n2 = std::norm(p.z) + p.h * p.h;
    double D = n2 + 2.0 * p.h + 1.0;
    std::array<double, 3> u{};
    u[0] = (n2 - 1.0) / D;
    u[1] = -2.0 * p.z.real() / D;
    if (m == Model::UHS3) u[2] = -2.0 * p.z.imag() / D;
    return u;
}

std::array<double, 3> to_ball_model(const LorentzVector& x) {
    if (x.x[0] <= 0) geom_fail("to_ball_model: not on the upper sheet");
    // stereographic image, then the axis swap that lines up with the Cayley
    // chart of the half-space model (basepoints and boundary charts agree)
    double w = 1.0 + x.x[0];
    std::array<double, 3> u{};
    u[0] = x.x[x.dim] / w;
    for (int k = 1; k < x.dim; ++k) u[k] = -x.x[k] / w;
    return u;
}

BoundaryPoint boundary_project(const std::array<double, 3>& ball, int dim, const Tolerances&) {
    double n2 = 0;
    for (int k = 0; k < dim; ++k) n2 += ball[k] * ball[k];
    if (n2 <= 0) geom_fail("boundary_project: zero vector");
    double s = 1.0 / std::sqrt(n2);
    BoundaryPoint b;
    b.dim = dim;
    for (int k = 0; k < dim; ++k) b.v[k] = ball[k] * s;
    return b;
}

std::pair<cplx, bool> boundary_to_halfspace(const BoundaryPoint& b) {
    double d = 1.0 - b.v[0];
    if (std::abs(d) < 1e-12) return {cplx(0, 0), true};
    if (b.dim == 2) return {cplx(-b.v[1] / d, 0.0), false};
    return {cplx(-b.v[1] / d, -b.v[2] / d), false};
}

BoundaryPoint halfspace_boundary_point(const cplx& zeta, bool at_infinity, int dim) {
    BoundaryPoint b;
    b.dim = dim;
    if (at_infinity) {
        b.v = {1.0, 0.0, 0.0};
        return b;
    }
    double D0 = std::norm(zeta) + 1.0;
    b.v[0] = (std::norm(zeta) - 1.0) / D0;
    b.v[1] = -2.0 * zeta.real() / D0;
    if (dim == 3) b.v[2] = -2.0 * zeta.imag() / D0;
    return b;
}

namespace {

// spatial direction of the null ray for a ball-boundary point (undoes the
// axis swap in to_ball_model)
std::array<double, 3> null_direction(const BoundaryPoint& b) {
    std::array<double, 3> s{};
    for (int k = 1; k < b.dim; ++k) s[k - 1] = -b.v[k];
    s[b.dim - 1] = b.v[0];
    return s;
}

BoundaryPoint from_null_direction(const std::array<double, 3>& s, int dim) {
    std::array<double, 3> u{};
    u[0] = s[dim - 1];
    for (int k = 1; k < dim; ++k) u[k] = -s[k - 1];
    return boundary_project(u, dim);
}

}  // namespace

BoundaryPoint apply_boundary(const Isometry& g, const BoundaryPoint& xi) {
    if (const auto* m = std::get_if<MoebiusIsometry>(&g)) {
        if (model_dim(m->model) != xi.dim) geom_fail("apply_boundary: dimension mismatch");
        auto [zeta, inf] = boundary_to_halfspace(xi);
        const cplx a = m->a[0], b = m->a[1], c = m->a[2], d = m->a[3];
        cplx num, den;
        if (inf) {
            num = a;
            den = c;
        } else {
            num = a * zeta + b;
            den = c * zeta + d;
        }
        if (std::abs(den) < 1e-100 * (std::abs(num) + 1.0))
            return halfspace_boundary_point(cplx(0, 0), true, xi.dim);
        return halfspace_boundary_point(num / den, false, xi.dim);
    }
    const auto& l = std::get<LorentzIsometry>(g);
    if (l.dim != xi.dim) geom_fail("apply_boundary: dimension mismatch");
    auto s = null_direction(xi);
    // null vector (1, s); image m = A n, renormalized to m0 = 1
    std::array<double, 4> n{1.0, s[0], s[1], s[2]};
    std::array<double, 4> out{};
    const int nn = l.dim + 1;
    for (int i = 0; i < nn; ++i) {
        double acc = 0;
        for (int k = 0; k < nn; ++k) acc += at(l, i, k) * n[k];
        out[i] = acc;
    }
    if (out[0] <= 0) geom_fail("apply_boundary: image left the forward light cone");
    std::array<double, 3> sp{};
    for (int k = 1; k < nn; ++k) sp[k - 1] = out[k] / out[0];
    return from_null_direction(sp, xi.dim);
}

double busemann(const BoundaryPoint& xi, const HalfSpacePoint& x, const HalfSpacePoint& y) {
    if (x.h <= 0 || y.h <= 0) geom_fail("busemann: point not in the interior");
    auto [zeta, inf] = boundary_to_halfspace(xi);
    auto height = [&](const HalfSpacePoint& p) {
        if (inf) return p.h;
        // height after the inversion sending zeta to infinity
        return p.h / (std::norm(p.z - zeta) + p.h * p.h);
    };
    return std::log(height(y)) - std::log(height(x));
}

double busemann(const BoundaryPoint& xi, const LorentzVector& x, const LorentzVector& y) {
    if (x.dim != y.dim || x.dim != xi.dim) geom_fail("busemann: dimension mismatch");
    auto s = null_direction(xi);
    auto pair_with_null = [&](const LorentzVector& p) {
        double acc = p.x[0];
        for (int k = 1; k <= p.dim; ++k) acc -= p.x[k] * s[k - 1];
        return acc;  // = -<p, (1,s)> > 0 on the sheet
    };
    return std::log(pair_with_null(x)) - std::log(pair_with_null(y));
}

LorentzVector halfspace_to_hyperboloid(const HalfSpacePoint& p, Model m) {
    if (p.h <= 0) geom_fail("halfspace_to_hyperboloid: non-positive height");
    int dim = model_dim(m);
    LorentzVector X;
    X.dim = dim;
    double n2 = std::norm(p.z) + p.h * p.h;
    X.x[0] = (n2 + 1.0) / (2.0 * p.h);
    X.x[1] = p.z.real() / p.h;
    if (dim == 3) X.x[2] = p.z.imag() / p.h;
    X.x[dim] = (n2 - 1.0) / (2.0 * p.h);
    return X;
}

HalfSpacePoint hyperboloid_to_halfspace(const LorentzVector& x) {
    double d = x.x[0] - x.x[x.dim];
    if (d <= 0) geom_fail("hyperboloid_to_halfspace: point maps through infinity");
    HalfSpacePoint p;
    p.h = 1.0 / d;
    p.z = (x.dim == 3) ? cplx(x.x[1] / d, x.x[2] / d) : cplx(x.x[1] / d, 0.0);
    return p;
}

LorentzIsometry moebius_to_lorentz(const MoebiusIsometry& g) {
    const int dim = model_dim(g.model);
    // Hermitian coordinates H(x) = [[x0+xd, z],[conj(z), x0-xd]] with
    // z = x1 (+ i x2); the action is H -> M H M^dagger.
    LorentzIsometry A;
    A.dim = dim;
    auto column = [&](int k) {
        cplx H00, H01, H11;  // basis element E_k
        if (k == 0) {
            H00 = 1; H01 = 0; H11 = 1;
        } else if (k == dim) {
            H00 = 1; H01 = 0; H11 = -1;
        } else if (k == 1) {
            H00 = 0; H01 = 1; H11 = 0;
        } else {
            H00 = 0; H01 = cplx(0, 1); H11 = 0;
        }
        const cplx a = g.a[0], b = g.a[1], c = g.a[2], d = g.a[3];
        // M H M^dagger
        cplx G00 = a * H00 + b * std::conj(H01);
        cplx G01 = a * H01 + b * H11;
        cplx G10 = c * H00 + d * std::conj(H01);
        cplx G11 = c * H01 + d * H11;
        cplx P00 = G00 * std::conj(a) + G01 * std::conj(b);
        cplx P01 = G00 * std::conj(c) + G01 * std::conj(d);
        cplx P11 = G10 * std::conj(c) + G11 * std::conj(d);
        std::array<double, 4> col{};
        col[0] = 0.5 * (P00.real() + P11.real());
        col[1] = P01.real();
        if (dim == 3) col[2] = P01.imag();
        col[dim] = 0.5 * (P00.real() - P11.real());
        return col;
    };
    for (int k = 0; k <= dim; ++k) {
        auto col = column(k);
        for (int i = 0; i <= dim; ++i) at(A, i, k) = col[i];
    }
    return A;
}

namespace {

// Moebius transformation sending (0, 1, inf) to (w0, w1, winf), projectively.
struct ProjPoint {
    cplx z{};
    bool inf = false;
};

MoebiusIsometry from_three_images(const ProjPoint& w0, const ProjPoint& w1, const ProjPoint& wi,
                                  Model model) {
    MoebiusIsometry g;
    g.model = model;
    cplx a, b, c, d;
    if (wi.inf) {
        a = w1.z - w0.z; b = w0.z; c = 0; d = 1;
    } else if (w0.inf) {
        a = wi.z; b = w1.z - wi.z; c = 1; d = 0;
    } else if (w1.inf) {
        a = wi.z; b = -w0.z; c = 1; d = -1;
    } else {
        a = wi.z * (w1.z - w0.z);
        b = w0.z * (wi.z - w1.z);
        c = w1.z - w0.z;
        d = wi.z - w1.z;
    }
    g.a = {a, b, c, d};
    canonicalize(g);
    return g;
}

}  // namespace

double determinant(const LorentzIsometry& g) {
    const int n = msize(g);
    double m[4][4];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = at(g, i, j);
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-300) return 0.0;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(m[piv][j], m[col][j]);
            det = -det;
        }
        det *= m[col][col];
        for (int r = col + 1; r < n; ++r) {
            double f = m[r][col] / m[col][col];
            for (int j = col; j < n; ++j) m[r][j] -= f * m[col][j];
        }
    }
    return det;
}

MoebiusIsometry lorentz_to_moebius(const LorentzIsometry& g, const Tolerances& tol) {
    check_lorentz_isometry(g, tol);
    if (determinant(g) < 0)
        geom_fail("lorentz_to_moebius: orientation-reversing element has no PSL2 image");
    const int dim = g.dim;
    const Model model = dim == 2 ? Model::UHP2 : Model::UHS3;
    Isometry gi = g;
    auto image = [&](const cplx& zeta, bool inf) {
        BoundaryPoint b = halfspace_boundary_point(zeta, inf, dim);
        BoundaryPoint out = apply_boundary(gi, b);
        auto [w, winf] = boundary_to_halfspace(out);
        return ProjPoint{w, winf};
    };
    ProjPoint w0 = image(cplx(0, 0), false);
    ProjPoint w1 = image(cplx(1, 0), false);
    ProjPoint wi = image(cplx(0, 0), true);
    return from_three_images(w0, w1, wi, model);
}

}  // namespace hywalk
