#pragma once

#include "fredpair/common.hpp"

#include <vector>

namespace fredpair {

/// Largest singular value; 0 for an empty matrix.
double op_norm(const DenseOp& m);

/// Number of singular values above rank_tol * (largest singular value).
Index rank_of(const DenseOp& m, const Tolerance& tol = {});

/// Orthogonal projector onto the span of the columns of `vectors`
/// (an n x k matrix; k may be 0, which yields the zero projector on C^n).
DenseOp orth_projector(const DenseOp& vectors, const Tolerance& tol = {});

/// Convenience overload for an explicit vector list. `ambient_dim` is
/// required so the empty list still determines a space.
DenseOp orth_projector(const std::vector<DenseVec>& vectors, Index ambient_dim,
                       const Tolerance& tol = {});

/// Deviations of a square matrix from the projection axioms:
/// first = ||M^2 - M||, second = ||M - M*||.
struct ProjectionDefect {
    double idempotency = 0.0;
    double hermiticity = 0.0;
    double max() const { return idempotency > hermiticity ? idempotency : hermiticity; }
};
ProjectionDefect projection_defect(const DenseOp& m);

/// True iff both projection defects are within proj_tol.
bool is_projection(const DenseOp& m, const Tolerance& tol = {});

/// Orthonormal basis of Ran(P) as matrix columns. P must pass is_projection.
DenseOp range_basis(const DenseOp& p, const Tolerance& tol = {});

/// Rank of a projection, splitting its singular values at 1/2. Immune to the
/// relative cutoff of rank_of, which miscounts blocks that are zero up to
/// roundoff.
Index projection_rank(const DenseOp& p);

/// Matrix of the compression x |-> Qx : Ran(P) -> Ran(Q), expressed in
/// orthonormal bases of the two ranges; shape rank(Q) x rank(P). The adjoint
/// of this matrix is the compression in the opposite direction, so kernel
/// and cokernel dimensions swap when the arguments swap.
DenseOp restricted_map(const DenseOp& p, const DenseOp& q, const Tolerance& tol = {});

struct FinitePairIndex {
    int index = 0;
    Index dim_ker = 0;
    Index dim_coker = 0;
};

/// Kernel/cokernel dimensions and index of restricted_map(p, q). In finite
/// dimensions the index always equals rank(p) - rank(q); this identity is
/// checked and a violation reported as a NumericalError.
///
/// Ordered-pair convention used throughout the library: the index of the
/// projection pair (A, B) is the index of the compression Ran(B) -> Ran(A),
/// i.e. pair_index_finite(B, A).index = rank(B) - rank(A).
FinitePairIndex pair_index_finite(const DenseOp& p, const DenseOp& q,
                                  const Tolerance& tol = {});

/// Orthonormal basis (as matrix columns) of the span of eigenvectors of the
/// Hermitian matrix `m` whose eigenvalue lies within eig_tol of `lambda`.
/// Zero columns if no eigenvalue is that close.
DenseOp eigenspace_at(const DenseOp& m, double lambda, const Tolerance& tol = {});

} // namespace fredpair
