#include "fredpair/lorentz_toy.hpp"

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace fredpair {

void ModeSpec::validate() const {
    if (n_coupled < 0 || n_zero_modes < 0)
        throw InputError("ModeSpec: counts must be non-negative");
    if (n_zero_modes > 4)
        throw InputError("ModeSpec: n_zero_modes must be at most 4");
    if (coupling_angles.size() != static_cast<std::size_t>(n_coupled) ||
        phases.size() != static_cast<std::size_t>(n_coupled))
        throw InputError("ModeSpec: coupling_angles and phases must have length n_coupled");
    for (double a : coupling_angles)
        if (!(a > -std::numbers::pi && a < std::numbers::pi))
            throw InputError("ModeSpec: coupling angle outside (-pi, pi)");
    for (const auto& ph : phases)
        for (double t : ph)
            if (!std::isfinite(t)) throw InputError("ModeSpec: non-finite phase");
}

ModeSpec mode_spec_from_json(const nlohmann::json& doc) {
    ModeSpec spec;
    spec.n_coupled = doc.value("n_coupled", 0);
    spec.n_zero_modes = doc.value("n_zero_modes", 0);
    if (doc.contains("coupling_angles"))
        spec.coupling_angles = doc["coupling_angles"].get<std::vector<double>>();
    if (doc.contains("phases"))
        for (const auto& p : doc["phases"]) {
            if (!p.is_array() || p.size() != 2)
                throw InputError("ModeSpec json: phase entry is not a [theta+, theta-] pair");
            spec.phases.push_back({p[0].get<double>(), p[1].get<double>()});
        }
    spec.validate();
    return spec;
}

nlohmann::json to_json(const ModeSpec& spec) {
    nlohmann::json doc;
    doc["n_coupled"] = spec.n_coupled;
    doc["coupling_angles"] = spec.coupling_angles;
    doc["phases"] = nlohmann::json::array();
    for (const auto& p : spec.phases) doc["phases"].push_back({p[0], p[1]});
    doc["n_zero_modes"] = spec.n_zero_modes;
    return doc;
}

namespace {

DenseOp rotation2(double phi) {
    DenseOp r(2, 2);
    r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return r;
}

DenseOp proj_plus() {
    DenseOp p(2, 2);
    p << 1, 0, 0, 0;
    return p;
}

DenseOp proj_minus() {
    DenseOp p(2, 2);
    p << 0, 0, 0, 1;
    return p;
}

} // namespace

ModelBVP::ModelBVP(ModeSpec spec, BlockProjection s0, BlockProjection s1c, BlockOp q)
    : spec_(std::move(spec)), s0_(std::move(s0)), s1c_(std::move(s1c)), q_(std::move(q)) {}

ModelBVP ModelBVP::build(const ModeSpec& spec, const Tolerance& tol) {
    spec.validate();
    std::vector<DenseOp> s0_pre, s1c_pre, q_pre;
    for (int k = 0; k < spec.n_coupled; ++k) {
        const auto& ph = spec.phases[static_cast<std::size_t>(k)];
        DenseOp d(2, 2);
        d << std::polar(1.0, ph[0]), 0.0, 0.0, std::polar(1.0, ph[1]);
        const DenseOp q = rotation2(spec.coupling_angles[static_cast<std::size_t>(k)]) * d;
        s0_pre.push_back(proj_minus());
        s1c_pre.push_back(q.adjoint() * proj_plus() * q);
        q_pre.push_back(q);
    }
    // Zero-mode blocks: the future cutoff is shifted past this mode, so the
    // conjugated future projection vanishes here.
    for (int k = 0; k < spec.n_zero_modes; ++k) {
        s0_pre.push_back(proj_minus());
        s1c_pre.push_back(DenseOp::Zero(2, 2));
        q_pre.push_back(DenseOp::Identity(2, 2));
    }
    BlockOp s0(2, std::move(s0_pre), {proj_minus()});
    BlockOp s1c(2, std::move(s1c_pre), {proj_plus()});
    BlockOp q(2, std::move(q_pre), {DenseOp::Identity(2, 2)});
    ModelBVP m(spec, BlockProjection(std::move(s0), tol), BlockProjection(std::move(s1c), tol),
               std::move(q));
    if (!is_finite_rank(BlockOp::identity(2) - m.s0_.op() - m.s1c_.op(), tol))
        throw NumericalError("ModelBVP: 1 - S0 - S1c is not finite rank");
    return m;
}

BlockProjection ModelBVP::s1(const Tolerance& tol) const {
    // Q S1c Q* == conjugation of S1c by Q*.
    return conjugate_by(s1c_, q_.adjoint(), tol);
}

int ModelBVP::aps_index(const Tolerance& tol) const {
    return index_by_trace(s1c_, s0_.complement(), tol);
}

namespace {

// Rank against an absolute threshold: the inputs here are sums/products of
// projections and unitaries (natural scale 1), where blocks that vanish up to
// roundoff must count as zero.
int absolute_rank(const DenseOp& b, double eps) {
    Eigen::JacobiSVD<DenseOp> svd(b);
    int r = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > eps) ++r;
    return r;
}

} // namespace

ApsCompactness aps_compactness_check(const ModelBVP& m, const Tolerance& tol) {
    tol.validate();
    ApsCompactness out;
    const BlockOp diff = BlockOp::identity(2) - m.s0().op() - m.s1c().op();
    out.finite_rank = is_finite_rank(diff, tol);
    if (!out.finite_rank)
        throw NumericalError("aps_compactness_check: cycle support in 1 - S0 - S1c");
    int r = 0;
    for (const auto& b : diff.prefix()) r += absolute_rank(b, tol.proj_tol);
    out.rank = r;

    const BlockOp s1 = m.s1(tol).op();
    const BlockOp one = BlockOp::identity(2);
    const BlockOp q_pm = s1 * m.evolution() * m.s0().op();
    const BlockOp q_mp = (one - s1) * m.evolution() * (one - m.s0().op());
    auto prefix_rank = [&](const BlockOp& a, const char* name) {
        if (!is_finite_rank(a, tol)) {
            std::ostringstream msg;
            msg << "aps_compactness_check: cycle support detected in " << name;
            throw NumericalError(msg.str());
        }
        int n = 0;
        for (const auto& b : a.prefix()) n += absolute_rank(b, tol.proj_tol);
        return n;
    };
    out.offdiag_ranks = {prefix_rank(q_pm, "Q+-"), prefix_rank(q_mp, "Q-+")};
    return out;
}

PairDecision bvp_fredholm(const ModelBVP& m, const BlockProjection& p0,
                          const BlockProjection& p1c_or_p1, bool conjugated,
                          const Tolerance& tol) {
    const BlockProjection p1c =
        conjugated ? p1c_or_p1 : conjugate_by(p1c_or_p1, m.evolution(), tol);
    return pair_fredholm(p1c, p0.complement(), tol);
}

CriterionReport final_cnorm(const ModelBVP& m, const BlockProjection& p0,
                            const BlockProjection& p1, const Tolerance& tol) {
    tol.validate();
    const BlockProjection p1c = conjugate_by(p1, m.evolution(), tol);
    const double r1 = calkin_norm(p1.op() - m.s1(tol).op());
    const double r0 = calkin_norm(p0.op() - m.s0().op());

    CriterionReport report;
    report.criterion_value = r1 * r1 + r0 * r0;
    report.threshold = 1.0;
    report.certified = report.criterion_value <= 1.0 - tol.proj_tol;
    report.decision = bvp_fredholm(m, p0, p1c, /*conjugated=*/true, tol);

    // Conjugating by the evolution must leave the Calkin distance unchanged.
    const double r1c = calkin_norm(p1c.op() - m.s1c().op());
    report.cross_checks.push_back(
        {"conjugation_preserves_calkin_norm", std::abs(r1 - r1c) <= 1e-12});

    if (report.certified) {
        const PairDecision d0 = pair_fredholm(p0, m.s0(), tol);
        const PairDecision d1 = pair_fredholm(p1c, m.s1c(), tol);
        if (d0.status != PairStatus::fredholm || d1.status != PairStatus::fredholm)
            throw NumericalError("final_cnorm: component pair not Fredholm under the criterion");
        report.predicted_index = m.aps_index(tol) + *d0.index + *d1.index;
        report.cross_checks.push_back(
            {"pair_is_fredholm", report.decision.status == PairStatus::fredholm});
        report.cross_checks.push_back(
            {"index_matches_formula",
             report.decision.index.has_value() && *report.decision.index == *report.predicted_index});
    }
    return report;
}

CriterionReport final_graph(const ModelBVP& m, const GraphBC& bc0, const GraphBC& bc1,
                            const Tolerance& tol) {
    tol.validate();
    if (!approx_equal(bc0.base().op(), m.s0().op(), tol.proj_tol))
        throw PreconditionError("final_graph: bc0 base differs from the model P-(0)");
    if (!approx_equal(bc1.base().op(), m.s1(tol).op(), tol.proj_tol))
        throw PreconditionError("final_graph: bc1 base differs from the model P+(1)");

    // Q^{-1} P1 Q is the projection onto the graph of Q^{-1} G1 Q over S1c.
    auto [g1, q] = align(bc1.map(), m.evolution());
    std::vector<DenseOp> pre, cyc;
    for (std::size_t i = 0; i < g1.prefix_len(); ++i)
        pre.push_back(q.prefix()[i].adjoint() * g1.prefix()[i] * q.prefix()[i]);
    for (std::size_t i = 0; i < g1.cycle_len(); ++i)
        cyc.push_back(q.cycle()[i].adjoint() * g1.cycle()[i] * q.cycle()[i]);
    GraphBC bc1c(m.s1c(), BlockOp(g1.block_dim(), std::move(pre), std::move(cyc)), tol);

    CriterionReport report = graph_criterion(bc0, bc1c, tol);
    const PairDecision direct =
        bvp_fredholm(m, graph_projection(bc0, tol), graph_projection(bc1, tol),
                     /*conjugated=*/false, tol);
    report.cross_checks.push_back(
        {"matches_bvp_fredholm", direct.status == report.decision.status &&
                                     direct.index == report.decision.index});
    return report;
}

} // namespace fredpair
