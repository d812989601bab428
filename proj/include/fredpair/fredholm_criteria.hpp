#pragma once

#include "fredpair/projection_geometry.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fredpair {

struct NamedCheck {
    std::string name;
    bool passed = false;
};

/// Report of a sufficient Fredholmness criterion. The criteria certify
/// Fredholmness when criterion_value < threshold but conclude nothing when it
/// is not: `certified` carries the criterion's own verdict, while `decision`
/// is the ground truth computed independently by pair_fredholm for the target
/// pair. predicted_index is present exactly when the criterion certifies.
struct CriterionReport {
    double criterion_value = 0.0;
    double threshold = 1.0;
    bool certified = false;
    PairDecision decision;
    std::optional<int> predicted_index;
    std::vector<NamedCheck> cross_checks;

    bool all_checks_pass() const;
    /// "fredholm" when certified, "marginal" within proj_tol of the
    /// threshold, "inconclusive" otherwise.
    std::string verdict(const Tolerance& tol = {}) const;
};

nlohmann::json to_json(const CriterionReport& report);

/// Calkin-sum criterion: with R = P - S and R' = P' - S, the pair (P, P') is
/// Fredholm when v = ||R||_C^2 + ||R'||_C^2 < 1, with index
/// index(P, S) + index(S, P'). Cross-checks the prediction against the
/// ground-truth decision for (P, P').
CriterionReport cnorm_criterion(const BlockProjection& p, const BlockProjection& p_prime,
                                const BlockProjection& s, const Tolerance& tol = {});

/// Equivalent-condition probe for the pair (P', P): takes V = the block tail
/// after the aligned prefix and epsilon = 1 - ||P - P'||_C, then verifies the
/// two lower bounds ||P'x|| >= eps ||x|| on Ran(P) ∩ V and ||Px|| >= eps ||x||
/// on Ran(P') ∩ V through blockwise singular values (condition 2) and through
/// the range-restricted Gram matrices (condition 3).
struct Lemma11Report {
    double epsilon = 0.0;
    std::size_t tail_start = 0;
    bool cond2_holds = false;
    bool cond3_holds = false;
    bool agrees_with_fredholm = false;
};
Lemma11Report lemma11_check(const BlockProjection& p, const BlockProjection& p_prime,
                            const Tolerance& tol = {});

/// Graph-product criterion: for graph boundary conditions over bases S0, S1
/// with 1 - S1 - S0 of finite rank, the pair (P1, 1 - P0) of graph
/// projections is Fredholm when v = ||G0||_C ||G1||_C < 1, with the index of
/// (S1, 1 - S0). Cross-checks the ground truth and the constancy of the index
/// along s -> graphs of s G_i for s in {0, 0.1, ..., 1}.
CriterionReport graph_criterion(const GraphBC& bc0, const GraphBC& bc1,
                                const Tolerance& tol = {});

/// Boundary witness for the Calkin-sum criterion: cycle blocks with S the
/// first coordinate line, P the line at angle beta and P' the line at angle
/// beta + pi/2. Then ||P-S||_C^2 + ||P'-S||_C^2 = sin^2 + cos^2 = 1 exactly
/// while (P, P') has blockwise orthogonal ranges and is not Fredholm.
struct SharpnessTriple {
    BlockProjection p;
    BlockProjection p_prime;
    BlockProjection s;
};
SharpnessTriple sharpness_example(double beta);

/// Boundary witness for the graph criterion: scalar cycle graphs with
/// g0 = g and g1 = 1/g, so the criterion value is exactly 1 and the graph
/// lines coincide, making (P1, 1 - P0) degenerate. Shrinking g1 restores
/// Fredholmness.
std::pair<GraphBC, GraphBC> graph_sharpness_example(double g);

} // namespace fredpair
