#pragma once

#include "fredpair/block_space.hpp"

namespace fredpair {

/// The self-adjoint unitary 1 - 2P associated with a projection P.
DenseOp involution(const DenseOp& p, const Tolerance& tol = {});

/// Inverse map: projection (1 - F) / 2 associated with an involution F.
DenseOp involution_inverse(const DenseOp& f);

/// Point W(P0, P1)(t) of the norm-controlled path of projections joining P0
/// (t = 0) to P1 (t = 1), defined for ||P1 - P0|| < 1: with F = 1 - 2(.),
/// c = cos(pi t / 2), s = sin(pi t / 2),
///
///   W(t) = F^{-1}( X(t)^{-1/2} (F(P0) c + F(P1) s) ),
///   X(t) = 1 + (F(P0) F(P1) + F(P1) F(P0)) s c.
///
/// X(t) is Hermitian positive definite, so the principal inverse square root
/// is taken by unitary diagonalization. The result is symmetrized and checked
/// against the projection axioms at slack 1e-8; a larger deviation is an
/// error, not silently repaired. Along the path,
/// ||W(t) - P0|| <= ||P1 - P0||.
DenseOp w_path(const DenseOp& p0, const DenseOp& p1, double t, const Tolerance& tol = {});

/// Blockwise W path; every block pair must satisfy the distance precondition.
BlockProjection w_path(const BlockProjection& p0, const BlockProjection& p1, double t,
                       const Tolerance& tol = {});

/// Orthonormal bases (matrix columns) of V0 = Ran(P0) ∩ Ker(P1) (the
/// +1-eigenspace of P0 - P1), V1 = Ker(P0) ∩ Ran(P1) (the -1-eigenspace),
/// and their joint orthogonal complement V', to which both projections
/// restrict.
struct ExtremeSplit {
    DenseOp v0;
    DenseOp v1;
    DenseOp vp;
};
ExtremeSplit split_extreme(const DenseOp& p0, const DenseOp& p1, const Tolerance& tol = {});

/// Blockwise split for a Fredholm pair: the extreme eigenspaces of a Fredholm
/// pair are finite dimensional and confined to the aligned prefix. A ±1
/// eigenvalue inside a cycle block means the pair is not Fredholm and is
/// rejected.
struct BlockExtremeSplit {
    std::vector<ExtremeSplit> prefix; // one split per aligned prefix block
    std::size_t tail_start = 0;       // cycle blocks from here on are extreme-free
    Index dim_v0 = 0;
    Index dim_v1 = 0;
};
BlockExtremeSplit split_extreme(const BlockProjection& p0, const BlockProjection& p1,
                                const Tolerance& tol = {});

struct PathSample {
    double t = 0.0;
    DenseOp projection;
    double norm_to_start = 0.0;
};

/// Point of the extended path P(t) = W(P0|V', P1|V')(t) ⊕ 0 on V0 ⊕ 1 on V1.
/// P(1) = P1 exactly; P(0) differs from P0 by a finite-rank operator
/// supported on V0 ⊕ V1.
PathSample p_path(const DenseOp& p0, const DenseOp& p1, double t, const Tolerance& tol = {});

struct BlockPathSample {
    double t = 0.0;
    BlockProjection projection;
    double norm_to_start = 0.0;
    double calkin_to_start = 0.0;
};

/// Blockwise extended path for a Fredholm pair. Extreme eigenspaces must be
/// confined to the prefix; a ±1 eigenvalue inside a cycle block means the
/// pair is not Fredholm and is rejected. Along the path,
/// ||P(t) - P0||_C <= ||P1 - P0||_C.
BlockPathSample p_path(const BlockProjection& p0, const BlockProjection& p1, double t,
                       const Tolerance& tol = {});

} // namespace fredpair
