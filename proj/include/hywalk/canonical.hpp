#pragma once

#include <cstdint>

#include "hywalk/geometry.hpp"
#include "hywalk/tolerances.hpp"

namespace hywalk {

// 64-bit key of a canonicalized matrix: entries snapped to a grid of step
// tol.quant_grid, then hashed together with the model tag. Matrices that agree
// within half a grid step land in the same cell and share the key; distinct
// quantized matrices can only collide through the hash itself, which the
// enumeration audit turns into a loud failure.
std::uint64_t canonical_key(const Isometry& g, const Tolerances& tol = default_tolerances());

// Collision audit for hash-equal pairs. Throws AuditError when the matrices
// are further apart than tol.key_audit (silent corruption otherwise).
void audit_key_match(const Isometry& stored, const Isometry& incoming,
                     const Tolerances& tol = default_tolerances());

// splitmix64; also used to derive per-trial RNG streams.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace hywalk
