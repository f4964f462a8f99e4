#include "hywalk/canonical.hpp"

#include <cmath>
#include <sstream>

namespace hywalk {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

namespace {

std::uint64_t quantize(double v, double grid) {
    double cells = v / grid;
    if (std::abs(cells) > 9.0e15)
        throw CapError("canonical_key: entry too large for the quantization grid");
    long long q = std::llround(cells);
    return static_cast<std::uint64_t>(q) + 0x8000000000000000ULL;
}

void fold(std::uint64_t& h, std::uint64_t v) { h = mix64(h ^ v); }

}  // namespace

std::uint64_t canonical_key(const Isometry& g, const Tolerances& tol) {
    std::uint64_t h = 0x51ed270b76a4b031ULL;
    if (const auto* m = std::get_if<MoebiusIsometry>(&g)) {
        fold(h, static_cast<std::uint64_t>(m->model));
        for (const auto& e : m->a) {
            fold(h, quantize(e.real(), tol.quant_grid));
            fold(h, quantize(e.imag(), tol.quant_grid));
        }
    } else {
        const auto& l = std::get<LorentzIsometry>(g);
        fold(h, 0x10u + static_cast<std::uint64_t>(l.dim));
        const int n2 = (l.dim + 1) * (l.dim + 1);
        for (int k = 0; k < n2; ++k) fold(h, quantize(l.a[k], tol.quant_grid));
    }
    return h;
}

void audit_key_match(const Isometry& stored, const Isometry& incoming, const Tolerances& tol) {
    double d = max_entry_distance(stored, incoming);
    if (d > tol.key_audit) {
        std::ostringstream os;
        os << "canonical key collision audit failed: matrices share a key but differ by " << d
           << " (> " << tol.key_audit << ")";
        throw AuditError(os.str());
    }
}

}  // namespace hywalk
