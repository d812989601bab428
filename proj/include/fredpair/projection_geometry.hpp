#pragma once

#include "fredpair/block_space.hpp"

#include <vector>

namespace fredpair {

/// 2x2 orthogonal projection onto span{(a, b)}. Scale invariant; (0, 0) is
/// rejected.
DenseOp proj_line2(double a, double b);

/// ||proj_line2(a,b) - proj_line2(1,0)|| in closed form: |b| / sqrt(a^2+b^2),
/// the sine of the angle between the two lines.
double diff_norm_2d(double a, double b);

/// Sines of the principal angles between Ran(P) and Ran(Q), ascending.
/// Computed from the singular values (cosines) of the cross-Gram matrix of
/// orthonormal range bases, clamped into [0, 1] before conversion.
std::vector<double> principal_angle_sines(const DenseOp& p, const DenseOp& q,
                                          const Tolerance& tol = {});

/// Graph-type boundary condition: a base block projection S (splitting each
/// block into Y = Ran(S) and Z = Ker(S)) plus a blockwise map G : Y -> Z
/// stored on the full block with the support invariant (1-S) G S == G.
class GraphBC {
public:
    GraphBC(BlockProjection base, BlockOp map, const Tolerance& tol = {});

    const BlockProjection& base() const { return base_; }
    const BlockOp& map() const { return map_; }

    /// Same base, map scaled by s (support invariant is preserved).
    GraphBC scaled(double s) const;

private:
    BlockProjection base_;
    BlockOp map_;
};

/// Blockwise orthogonal projection onto the graph {y + Gy : y in Y}. Uses the
/// closed form P = (1+G) C (1+G)* with C the inverse of 1+G*G on Y, i.e. the
/// block operator [[C, CG*], [GC, GCG*]] with respect to Y ⊕ Z.
BlockProjection graph_projection(const GraphBC& bc, const Tolerance& tol = {});

/// g / sqrt(1 + g^2) with g = calkin_norm of the graph map; an upper bound
/// for calkin_norm(graph_projection(bc) - bc.base), attained for scalar
/// blocks.
double graphest_bound(const GraphBC& bc);

} // namespace fredpair
