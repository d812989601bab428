#pragma once

#include "fredpair/fredholm_criteria.hpp"

#include <nlohmann/json_fwd.hpp>

#include <array>
#include <utility>
#include <vector>

namespace fredpair {

/// Mode content of the toy boundary-value model. Each mode pair is a 2x2
/// block in the basis (e+, e-) of the positive/negative spectral lines of the
/// boundary operator. Finitely many prefix modes carry a coupling rotation;
/// the infinite tail is uncoupled. Zero modes are extra prefix blocks where
/// the future spectral projection drops the e+ line (a rank-one spectral
/// cutoff shift), each moving the index by one.
struct ModeSpec {
    int n_coupled = 0;
    std::vector<double> coupling_angles;          // radians, one per coupled mode
    std::vector<std::array<double, 2>> phases;    // (theta+, theta-) per coupled mode
    int n_zero_modes = 0;

    void validate() const;
};

ModeSpec mode_spec_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ModeSpec& spec);

/// The assembled model: S0 models the past APS projection P-(0), S1c models
/// the conjugated future projection Q^{-1} P+(1) Q, and Q holds the blockwise
/// evolution unitaries. By construction 1 - S0 - S1c has finite rank.
class ModelBVP {
public:
    static ModelBVP build(const ModeSpec& spec, const Tolerance& tol = {});

    const BlockProjection& s0() const { return s0_; }
    const BlockProjection& s1c() const { return s1c_; }
    const BlockOp& evolution() const { return q_; }
    /// Unconjugated future spectral projection Q S1c Q*.
    BlockProjection s1(const Tolerance& tol = {}) const;

    /// Index of the APS pair (S1c, 1 - S0) through the trace formula.
    int aps_index(const Tolerance& tol = {}) const;

    const ModeSpec& spec() const { return spec_; }

private:
    ModelBVP(ModeSpec spec, BlockProjection s0, BlockProjection s1c, BlockOp q);

    ModeSpec spec_;
    BlockProjection s0_;
    BlockProjection s1c_;
    BlockOp q_;
};

/// Verifies that 1 - S0 - S1c has finite rank and reports it, together with
/// the ranks of the two off-diagonal compressions of the evolution,
/// Q+- = P+(1) Q P-(0) and Q-+ = (1 - P+(1)) Q (1 - P-(0)); both must be
/// supported on the coupled prefix.
struct ApsCompactness {
    bool finite_rank = false;
    int rank = 0;
    std::pair<int, int> offdiag_ranks{0, 0};
};
ApsCompactness aps_compactness_check(const ModelBVP& m, const Tolerance& tol = {});

/// Fredholm decision for the model operator with boundary projections
/// (P0, P1): by definition, the decision of the pair (Q^{-1} P1 Q, 1 - P0).
/// With `conjugated` set, p1 is taken to already be Q^{-1} P1 Q.
PairDecision bvp_fredholm(const ModelBVP& m, const BlockProjection& p0,
                          const BlockProjection& p1c_or_p1, bool conjugated,
                          const Tolerance& tol = {});

/// Calkin-sum criterion transported to the model: certifies Fredholmness of
/// the boundary-value operator when
/// ||P1 - P+(1)||_C^2 + ||P0 - P-(0)||_C^2 < 1 and predicts
/// index = aps_index + index(P0, P-(0)) + index(P1, P+(1)).
CriterionReport final_cnorm(const ModelBVP& m, const BlockProjection& p0,
                            const BlockProjection& p1, const Tolerance& tol = {});

/// Graph criterion transported to the model: bc0 lives over Ran(S0) and bc1
/// over Ran(P+(1)); bc1 is conjugated blockwise by the evolution and the
/// product criterion applied with bases (S0, S1c). Predicts the APS index.
CriterionReport final_graph(const ModelBVP& m, const GraphBC& bc0, const GraphBC& bc1,
                            const Tolerance& tol = {});

} // namespace fredpair
