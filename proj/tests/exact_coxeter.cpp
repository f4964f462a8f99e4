#include "exact_coxeter.hpp"

#include <array>
#include <map>
#include <numeric>
#include <stdexcept>

namespace hywalk_oracle {

namespace {

using i128 = __int128;

long long checked(i128 v) {
    if (v > 0x7fffffffffffffffLL || v < -0x7fffffffffffffffLL)
        throw std::overflow_error("oracle fraction overflow");
    return static_cast<long long>(v);
}

Frac reduce(i128 n, i128 d) {
    if (d == 0) throw std::domain_error("oracle: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    i128 a = n < 0 ? -n : n, b = d;
    while (b) { i128 t = a % b; a = b; b = t; }
    if (a == 0) a = 1;
    return {checked(n / a), checked(d / a)};
}

Frac add(const Frac& x, const Frac& y) {
    return reduce(static_cast<i128>(x.num) * y.den + static_cast<i128>(y.num) * x.den,
                  static_cast<i128>(x.den) * y.den);
}
Frac mul(const Frac& x, const Frac& y) {
    return reduce(static_cast<i128>(x.num) * y.num, static_cast<i128>(x.den) * y.den);
}
Frac frac(long long n, long long d = 1) { return reduce(n, d); }
bool eq(const Frac& x, const Frac& y) { return x.num == y.num && x.den == y.den; }

// element of Q(c): p0 + p1 c + p2 c^2
struct Poly {
    std::array<Frac, 3> c{frac(0), frac(0), frac(0)};
};

Poly poly_const(const Frac& f) { Poly p; p.c[0] = f; return p; }

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r;
    for (int i = 0; i < 3; ++i) r.c[i] = add(a.c[i], b.c[i]);
    return r;
}

// multiply and reduce with c^3 = (4c^2 + 4c - 1)/8
Poly poly_mul(const Poly& a, const Poly& b) {
    std::array<Frac, 5> raw{frac(0), frac(0), frac(0), frac(0), frac(0)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) raw[i + j] = add(raw[i + j], mul(a.c[i], b.c[j]));
    const Frac q2 = frac(1, 2), q8 = frac(-1, 8);
    for (int deg = 4; deg >= 3; --deg) {
        Frac lead = raw[deg];
        if (lead.num == 0) continue;
        raw[deg] = frac(0);
        raw[deg - 1] = add(raw[deg - 1], mul(lead, q2));
        raw[deg - 2] = add(raw[deg - 2], mul(lead, q2));
        raw[deg - 3] = add(raw[deg - 3], mul(lead, q8));
    }
    Poly r;
    for (int i = 0; i < 3; ++i) r.c[i] = raw[i];
    return r;
}

using Mat = std::array<Poly, 9>;

Mat mat_mul(const Mat& A, const Mat& B) {
    Mat R;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Poly s;
            for (int k = 0; k < 3; ++k)
                s = poly_add(s, poly_mul(A[i * 3 + k], B[k * 3 + j]));
            R[i * 3 + j] = s;
        }
    return R;
}

std::vector<long long> fingerprint(const Mat& M) {
    std::vector<long long> f;
    f.reserve(54);
    for (const auto& p : M)
        for (const auto& fc : p.c) {
            f.push_back(fc.num);
            f.push_back(fc.den);
        }
    return f;
}

Mat identity_mat() {
    Mat I;
    for (int i = 0; i < 3; ++i) I[i * 3 + i] = poly_const(frac(1));
    return I;
}

// Gram of the (2,3,7) triangle in the triangle_family layout:
// labels m01 = 2, m12 = 3, m02 = 7 so G01 = 0, G12 = -1/2, G02 = -c.
std::array<Mat, 3> generators() {
    Poly zero, one = poly_const(frac(1));
    auto G = [&](int i, int j) -> Poly {
        if (i == j) return one;
        int a = i < j ? i : j, b = i < j ? j : i;
        if (a == 0 && b == 1) return zero;
        if (a == 1 && b == 2) return poly_const(frac(-1, 2));
        Poly mc;  // -c
        mc.c[1] = frac(-1);
        return mc;
    };
    std::array<Mat, 3> R;
    for (int i = 0; i < 3; ++i) {
        R[i] = identity_mat();
        for (int k = 0; k < 3; ++k) {
            // row i: delta_ik - 2 G_ik
            Poly twice = poly_mul(poly_const(frac(-2)), G(i, k));
            R[i][i * 3 + k] = (i == k) ? poly_add(poly_const(frac(1)), twice) : twice;
        }
    }
    return R;
}

}  // namespace

std::vector<std::size_t> triangle237_ball_sizes(int radius) {
    auto gens = generators();
    std::map<std::vector<long long>, bool> seen;
    std::vector<Mat> layer{identity_mat()};
    seen[fingerprint(layer[0])] = true;
    std::vector<std::size_t> sizes{1};
    for (int r = 1; r <= radius; ++r) {
        std::vector<Mat> next;
        for (const auto& M : layer)
            for (const auto& g : gens) {
                Mat P = mat_mul(M, g);
                auto fp = fingerprint(P);
                if (seen.emplace(std::move(fp), true).second) next.push_back(P);
            }
        sizes.push_back(seen.size());
        layer = std::move(next);
    }
    return sizes;
}

std::size_t triangle237_distinct_words(std::size_t n_words) {
    auto gens = generators();
    std::map<std::vector<long long>, bool> seen;
    std::vector<Mat> layer{identity_mat()};
    seen[fingerprint(layer[0])] = true;
    std::size_t emitted = 1;
    while (emitted < n_words) {
        std::vector<Mat> next;
        for (const auto& M : layer)
            for (const auto& g : gens) {
                if (emitted >= n_words) break;
                Mat P = mat_mul(M, g);
                ++emitted;
                seen.emplace(fingerprint(P), true);
                next.push_back(P);
            }
        if (emitted >= n_words) break;
        layer = std::move(next);
    }
    return seen.size();
}

}  // namespace hywalk_oracle
