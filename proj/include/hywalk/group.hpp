#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hywalk/canonical.hpp"
#include "hywalk/geometry.hpp"

namespace hywalk {

// Edge label of a Coxeter diagram; INF_LABEL encodes m_ij = infinity.
constexpr int INF_LABEL = std::numeric_limits<int>::max();

struct CoxeterDiagram {
    int size = 0;                         // number of generating reflections
    int dim = 2;                          // ambient hyperbolic dimension
    std::vector<int> labels;              // row-major size x size, diagonal 1
    int label(int i, int j) const { return labels[i * size + j]; }
    int& label(int i, int j) { return labels[i * size + j]; }
};

CoxeterDiagram make_diagram(int size, int dim);
void check_diagram(const CoxeterDiagram& d);
// Gram matrix: G_ii = 1, G_ij = -cos(pi/m_ij), -1 for the infinite label.
std::vector<double> gram_matrix(const CoxeterDiagram& d);

struct GroupElement {
    Isometry mat;
    std::vector<std::uint8_t> word;  // generator indices, 0-based; empty = identity
    std::uint64_t key = 0;
    double orbit_dist = 0.0;         // d(o, g o), filled by enumeration
};

GroupElement make_element(Isometry m, std::vector<std::uint8_t> word,
                          const Tolerances& tol = default_tolerances());

struct MarkedGroup {
    Model model = Model::LOR2;
    std::vector<GroupElement> generators;
    std::optional<CoxeterDiagram> diagram;
    std::optional<std::pair<int, int>> marked_edge;  // 0-based generator pair
    std::string name;

    int dim() const { return model_dim(model); }
};

// Duplicate-free generator keys; relation residual when a diagram is present.
void check_marked_group(const MarkedGroup& g, const Tolerances& tol = default_tolerances());

// d(o, g o) with the model's fixed basepoint.
double orbit_displacement(const MarkedGroup& g, const Isometry& m,
                          const Tolerances& tol = default_tolerances());

Isometry word_to_matrix(const MarkedGroup& g, const std::vector<std::uint8_t>& word);

// ---------------------------------------------------------------------------
// Vinberg realization

enum class GramSignature { Hyperbolic, Spherical, Degenerate, Unrealizable };

struct SignatureReport {
    GramSignature kind = GramSignature::Unrealizable;
    int positive = 0, zero = 0, negative = 0;
    std::string detail;
};

SignatureReport gram_signature(const CoxeterDiagram& d,
                               const Tolerances& tol = default_tolerances());

// Unit spacelike normals in R^{d,1} with <e_i,e_j> = G_ij, built by a
// deterministic triangular embedding (continuous in the labels), and the
// corresponding reflection generators. m <= d+1; hyperbolic signature needs
// the leading (m-1)-minor positive definite, which holds for every simplex
// and dihedral family here. Throws ConfigError with the signature report when
// the diagram is spherical at full rank, Euclidean-degenerate, or otherwise
// unrealizable.
struct VinbergRealization {
    MarkedGroup group;
    std::vector<LorentzVector> normals;
    SignatureReport signature;
};

VinbergRealization vinberg_realize(const CoxeterDiagram& d,
                                   const Tolerances& tol = default_tolerances());

// ---------------------------------------------------------------------------
// Relations, enumeration, families

struct RelationReport {
    double max_residual = 0.0;
    std::string worst_relator;
    int relators_checked = 0;
};

RelationReport verify_relations(const MarkedGroup& g,
                                const Tolerances& tol = default_tolerances());

// Breadth-first closure of generator products up to word length radius,
// deduplicated by canonical key (with collision audit). Elements carry the
// first-found (hence shortest) word and d(o, g o).
std::vector<GroupElement> ball(const MarkedGroup& g, int radius,
                               const Tolerances& tol = default_tolerances());

// (p,q,n) triangle reflection group in d=2; n may be INF_LABEL. The n-edge is
// the marked generator pair (0,2). Requires 1/p + 1/q + 1/n < 1.
MarkedGroup triangle_family(int p, int q, int n,
                            const Tolerances& tol = default_tolerances());

// Built-in Moebius fixtures.
MarkedGroup sanov_group();     // free of rank 2 in PSL2(R): [[1,2],[0,1]], [[1,0],[2,1]]
MarkedGroup zsquare_group();   // Z^2 of parabolic translations in PSL2(C)
MarkedGroup axis_group(double lambda);  // <diag(l, 1/l)> with inverse, UHP2

}  // namespace hywalk
