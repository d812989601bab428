#pragma once

#include "fredpair/core_linalg.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <utility>
#include <vector>

namespace fredpair {

/// Eventually-periodic block-diagonal operator on H = ⊕_{i>=0} C^d:
/// a finite prefix of arbitrary d x d blocks followed by a finite cycle of
/// blocks repeated forever. Closed under the *-algebra operations, and the
/// operator norm, Calkin (essential) norm and finite-rank test are exactly
/// computable from the block lists.
class BlockOp {
public:
    BlockOp(Index block_dim, std::vector<DenseOp> prefix, std::vector<DenseOp> cycle);

    static BlockOp identity(Index block_dim);
    static BlockOp zero(Index block_dim);
    /// Cycle-only operator built from a single repeating block.
    static BlockOp repeating(DenseOp cycle_block);

    Index block_dim() const { return block_dim_; }
    const std::vector<DenseOp>& prefix() const { return prefix_; }
    const std::vector<DenseOp>& cycle() const { return cycle_; }
    std::size_t prefix_len() const { return prefix_.size(); }
    std::size_t cycle_len() const { return cycle_.size(); }

    /// i-th diagonal block (0-based), unrolling the cycle as needed.
    const DenseOp& block(std::size_t i) const;

    BlockOp adjoint() const;
    BlockOp scaled(Complex s) const;

private:
    Index block_dim_;
    std::vector<DenseOp> prefix_;
    std::vector<DenseOp> cycle_;
};

/// Representations of a and b with a common prefix length (max of the two)
/// and a common cycle length (lcm), blockwise content unchanged as operators.
std::pair<BlockOp, BlockOp> align(const BlockOp& a, const BlockOp& b);

/// Blockwise algebra. Binary operations align their operands first.
BlockOp operator+(const BlockOp& a, const BlockOp& b);
BlockOp operator-(const BlockOp& a, const BlockOp& b);
BlockOp operator*(const BlockOp& a, const BlockOp& b); // composition
BlockOp operator*(Complex s, const BlockOp& a);

/// Operator norm: max block norm over prefix and cycle.
double bop_norm(const BlockOp& a);

/// Calkin (essential) norm: max block norm over the cycle alone. The prefix
/// is a finite-rank perturbation and does not contribute.
double calkin_norm(const BlockOp& a);

/// Norm of the restriction to the tail starting at block n_start. Monotone
/// non-increasing in n_start and equal to calkin_norm once past the prefix.
double tail_norm(const BlockOp& a, std::size_t n_start);

/// True iff every cycle block has norm at most proj_tol.
bool is_finite_rank(const BlockOp& a, const Tolerance& tol = {});

/// Dense block-diagonal matrix of the first n_blocks blocks.
DenseOp truncate(const BlockOp& a, std::size_t n_blocks);

/// Absorbs trailing prefix blocks that replicate the cycle and reduces the
/// cycle to its primitive period. Useful for equality tests; never required.
BlockOp canonicalized(const BlockOp& a, double eps = 1e-12);

/// Blockwise comparison as operators (after alignment), up to eps in norm.
bool approx_equal(const BlockOp& a, const BlockOp& b, double eps = 1e-12);

/// A BlockOp whose every block passes is_projection.
class BlockProjection {
public:
    explicit BlockProjection(BlockOp op, const Tolerance& tol = {});

    const BlockOp& op() const { return op_; }
    Index block_dim() const { return op_.block_dim(); }

    /// The projection 1 - P.
    BlockProjection complement() const;

private:
    BlockOp op_;
};

enum class PairStatus { fredholm, not_fredholm, marginal };

const char* to_string(PairStatus s);

/// Outcome of the Calkin-distance Fredholm test for a pair of projections.
struct PairDecision {
    PairStatus status = PairStatus::marginal;
    double calkin_gap = 0.0; // 1 - ||P - P'||_C
    std::optional<int> index; // present iff status == fredholm
};

/// Decides whether (p, p') is a Fredholm pair: it is iff ||P - P'||_C < 1,
/// with a tolerance band of width proj_tol around 1 reported as `marginal`.
/// When Fredholm, the index of the ordered pair (p, p') is the blockwise rank
/// sum Σ_i (rank p'_i - rank p_i) over the aligned prefix; cycle blocks of a
/// Fredholm pair must agree in rank (asserted) and contribute nothing.
PairDecision pair_fredholm(const BlockProjection& p, const BlockProjection& p_prime,
                           const Tolerance& tol = {});

/// Independent index computation through dense truncations: evaluates
/// pair_index_finite on truncations at n_blocks and n_blocks + cycle length
/// and requires the two agree (stabilization). Preconditions: the pair is
/// Fredholm and n_blocks >= prefix length + 2 * cycle length.
int pair_index_oracle(const BlockProjection& p, const BlockProjection& p_prime,
                      std::size_t n_blocks, const Tolerance& tol = {});

/// Index of (p, p') through the trace formula, valid when p - p' has finite
/// rank: rounds Σ blockwise trace(p' - p) to the nearest integer.
int index_by_trace(const BlockProjection& p, const BlockProjection& p_prime,
                   const Tolerance& tol = {});

/// Blockwise conjugation u* p u by a block operator with unitary blocks.
BlockProjection conjugate_by(const BlockProjection& p, const BlockOp& u,
                             const Tolerance& tol = {});

/// JSON document with fields block_dim, prefix, cycle; complex entries are
/// stored as [re, im] pairs. Round-trips exactly.
nlohmann::json to_json(const BlockOp& a);
BlockOp block_op_from_json(const nlohmann::json& doc);

std::string serialize(const BlockOp& a);
BlockOp deserialize_block_op(const std::string& text);

} // namespace fredpair
