#pragma once

#include "fredpair/projection_geometry.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace fredpair {

/// Deterministic random stream (splitmix64 core, hand-rolled transforms) so
/// that sequences do not depend on the standard library's distribution
/// implementations; identical seeds give identical corpora everywhere.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64();
    double uniform();                      // [0, 1)
    double uniform(double lo, double hi);  // [lo, hi)
    int uniform_int(int lo, int hi);       // inclusive bounds
    double normal();                       // standard normal (Box-Muller)
    Complex cnormal();                     // complex standard normal

private:
    std::uint64_t state_;
};

/// Haar-ish random unitary: QR of a complex Gaussian matrix.
DenseOp random_unitary(RandomStream& rs, Index n);

/// Random rank-r orthogonal projection on C^n.
DenseOp random_projection(RandomStream& rs, Index n, Index rank);

/// Rotates Ran(P) inside mutually orthogonal (range, kernel) planes by angles
/// with the given sines. The result P' is a projection of the same rank with
/// ||P - P'|| exactly max(sines). Requires enough room: sines.size() <=
/// min(rank, corank).
DenseOp rotate_range(RandomStream& rs, const DenseOp& p, const std::vector<double>& sines,
                     const Tolerance& tol = {});

struct PairCorpusParams {
    Index block_dim = 2;
    int max_prefix = 3;
    int max_cycle = 2;
    double max_cycle_sine = 0.9;  // cap on the cycle-block distance
    int prefix_rank_flips = 1;    // extra rank-one flips available per prefix block
};

/// Random eventually-periodic Fredholm pair: cycle blocks are plane rotations
/// of a common projection (distance <= max_cycle_sine < 1), prefix blocks may
/// additionally flip ranks, which is what carries the index.
std::pair<BlockProjection, BlockProjection> random_fredholm_pair(RandomStream& rs,
                                                                 const PairCorpusParams& params,
                                                                 const Tolerance& tol = {});

/// Random pair whose cycle blocks have mutually orthogonal ranges, i.e.
/// Calkin distance exactly 1: deliberately not Fredholm.
std::pair<BlockProjection, BlockProjection> random_orthogonal_tail_pair(
    RandomStream& rs, const Tolerance& tol = {});

/// Random dense projection pair with ||P1 - P0|| <= max_dist (exactly equal
/// to the largest drawn sine).
std::pair<DenseOp, DenseOp> random_dense_pair(RandomStream& rs, Index dim, double max_dist,
                                              const Tolerance& tol = {});

/// Random eventually-periodic graph boundary condition with blocks of the
/// given dimension and map norm up to max_norm.
GraphBC random_graph_bc(RandomStream& rs, Index block_dim, double max_norm,
                        const Tolerance& tol = {});

} // namespace fredpair
