#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <variant>

#include "hywalk/tolerances.hpp"

namespace hywalk {

using cplx = std::complex<double>;

// Which model a group (and its orbit bookkeeping) lives in.
//   UHP2 / UHS3 : upper half-plane / half-space, isometries as PSL2 matrices.
//   LOR2 / LOR3 : hyperboloid in R^{2,1} / R^{3,1}, isometries in O'(d,1).
enum class Model : std::uint8_t { UHP2, UHS3, LOR2, LOR3 };

inline int model_dim(Model m) {
    return (m == Model::UHP2 || m == Model::LOR2) ? 2 : 3;
}
inline bool is_moebius(Model m) { return m == Model::UHP2 || m == Model::UHS3; }
const char* model_name(Model m);

// ---------------------------------------------------------------------------
// Points

// Point of the hyperboloid sheet {<x,x> = -1, x0 > 0} in R^{d,1}, d = dim.
struct LorentzVector {
    int dim = 2;  // ambient hyperbolic dimension, coords used: 0..dim
    std::array<double, 4> x{};
};

// Half-space point: boundary coordinate z and height h > 0.
// UHP2 keeps z real (the classical point is z + i*h); UHS3 uses the full
// complex boundary coordinate.
struct HalfSpacePoint {
    cplx z{};
    double h = 1.0;
};

inline HalfSpacePoint uhp_point(cplx classical) {  // x+iy -> (x, y)
    return {cplx(classical.real(), 0.0), classical.imag()};
}
inline cplx uhp_classical(const HalfSpacePoint& p) { return {p.z.real(), p.h}; }

// Boundary point in disk/ball coordinates: unit vector on S^1 (dim 2) or
// S^2 (dim 3). The half-space point at infinity maps to (1, 0[, 0]).
struct BoundaryPoint {
    int dim = 2;
    std::array<double, 3> v{};
};

enum class BoundaryModel : std::uint8_t { Circle, Sphere };
inline BoundaryModel boundary_model(const BoundaryPoint& b) {
    return b.dim == 2 ? BoundaryModel::Circle : BoundaryModel::Sphere;
}

// ---------------------------------------------------------------------------
// Isometries

// PSL2 element; real entries (zero imaginary parts) in the UHP2 case.
// Stored normalized to det 1 and sign-canonicalized, so M and -M coincide.
struct MoebiusIsometry {
    Model model = Model::UHP2;
    std::array<cplx, 4> a{};  // row-major a b c d
};

// Element of O'(d,1): preserves J = diag(-1,1,..,1) and the upper sheet.
struct LorentzIsometry {
    int dim = 2;
    std::array<double, 16> a{};  // row-major (dim+1)x(dim+1)
};

using Isometry = std::variant<MoebiusIsometry, LorentzIsometry>;

Model isometry_model(const Isometry& g);

MoebiusIsometry moebius_identity(Model m);
LorentzIsometry lorentz_identity(int dim);
Isometry identity_for(Model m);

MoebiusIsometry compose(const MoebiusIsometry& g, const MoebiusIsometry& h);
LorentzIsometry compose(const LorentzIsometry& g, const LorentzIsometry& h);
Isometry compose(const Isometry& g, const Isometry& h);

MoebiusIsometry inverse(const MoebiusIsometry& g);
LorentzIsometry inverse(const LorentzIsometry& g);
Isometry inverse(const Isometry& g);

// Scale to det 1 and fix the PSL sign: scan a,b,c,d for the first entry with
// |e| > 1e-9 and negate the matrix if its real part is negative (an
// effectively-zero real part defers to the imaginary part).
void canonicalize(MoebiusIsometry& g);

double max_entry_distance(const Isometry& g, const Isometry& h);
double max_abs_entry(const Isometry& g);
double deviation_from_identity(const Isometry& g);

// Validation helpers (throw GeometryError on failure).
void check_hyperboloid(const LorentzVector& x, const Tolerances& tol = default_tolerances());
void check_lorentz_isometry(const LorentzIsometry& g, const Tolerances& tol = default_tolerances());

// ---------------------------------------------------------------------------
// Metric and actions

double lorentz_product(const LorentzVector& x, const LorentzVector& y);
double dist_hyperboloid(const LorentzVector& x, const LorentzVector& y,
                        const Tolerances& tol = default_tolerances());
double dist_halfspace(const HalfSpacePoint& p, const HalfSpacePoint& q);

LorentzVector lorentz_apply(const LorentzIsometry& g, const LorentzVector& x);
HalfSpacePoint mobius_apply(const MoebiusIsometry& g, const HalfSpacePoint& p);
BoundaryPoint apply_boundary(const Isometry& g, const BoundaryPoint& xi);

// Reflection in the hyperplane orthogonal to a unit spacelike v:
// x - 2<x,v>v, and its matrix I - 2 v (Jv)^T.
LorentzVector reflect_lorentz(const LorentzVector& v, const LorentzVector& x);
LorentzIsometry reflection_matrix(const LorentzVector& v);

// ---------------------------------------------------------------------------
// Basepoints and ball model

LorentzVector lorentz_basepoint(int dim);     // (1, 0, ..., 0)
HalfSpacePoint halfspace_basepoint(Model m);  // i resp. (0, 1)

// Cayley image in the open unit disk/ball; the model basepoint goes to 0.
// Rejects points on the boundary (height 0 / null vectors).
std::array<double, 3> to_ball_model(const HalfSpacePoint& p, Model m);
std::array<double, 3> to_ball_model(const LorentzVector& x);

BoundaryPoint boundary_project(const std::array<double, 3>& ball, int dim,
                               const Tolerances& tol = default_tolerances());

// Half-space boundary coordinate of a ball-boundary point; real for dim 2.
// Returns {value, is_infinity}.
std::pair<cplx, bool> boundary_to_halfspace(const BoundaryPoint& b);
BoundaryPoint halfspace_boundary_point(const cplx& zeta, bool at_infinity, int dim);

// ---------------------------------------------------------------------------
// Busemann cocycle and model conversions

// beta_xi(x, y) = lim_{z->xi} d(x,z) - d(y,z); positive when y sits deeper
// inside horoballs at xi than x. Closed forms per model.
double busemann(const BoundaryPoint& xi, const HalfSpacePoint& x, const HalfSpacePoint& y);
double busemann(const BoundaryPoint& xi, const LorentzVector& x, const LorentzVector& y);

LorentzVector halfspace_to_hyperboloid(const HalfSpacePoint& p, Model m);
HalfSpacePoint hyperboloid_to_halfspace(const LorentzVector& x);

// Conjugation between the two matrix pictures. moebius_to_lorentz is the
// symmetric-square / Hermitian action; lorentz_to_moebius requires an
// orientation-preserving input (det +1) and recovers the PSL2 matrix from
// the boundary images of 0, 1, infinity.
LorentzIsometry moebius_to_lorentz(const MoebiusIsometry& g);
MoebiusIsometry lorentz_to_moebius(const LorentzIsometry& g,
                                   const Tolerances& tol = default_tolerances());

double determinant(const LorentzIsometry& g);

}  // namespace hywalk
