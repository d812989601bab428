#include "fredpair/fredholm_criteria.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace fredpair {

bool CriterionReport::all_checks_pass() const {
    for (const auto& c : cross_checks)
        if (!c.passed) return false;
    return true;
}

std::string CriterionReport::verdict(const Tolerance& tol) const {
    if (certified) return "fredholm";
    if (criterion_value < threshold + tol.proj_tol) return "marginal";
    return "inconclusive";
}

nlohmann::json to_json(const CriterionReport& report) {
    nlohmann::json doc;
    doc["criterion_value"] = report.criterion_value;
    doc["threshold"] = report.threshold;
    doc["certified"] = report.certified;
    doc["decision"] = {{"status", to_string(report.decision.status)},
                       {"calkin_gap", report.decision.calkin_gap}};
    if (report.decision.index) doc["decision"]["index"] = *report.decision.index;
    if (report.predicted_index) doc["predicted_index"] = *report.predicted_index;
    doc["cross_checks"] = nlohmann::json::object();
    for (const auto& c : report.cross_checks) doc["cross_checks"][c.name] = c.passed;
    return doc;
}

CriterionReport cnorm_criterion(const BlockProjection& p, const BlockProjection& p_prime,
                                const BlockProjection& s, const Tolerance& tol) {
    tol.validate();
    const double r = calkin_norm(p.op() - s.op());
    const double r_prime = calkin_norm(p_prime.op() - s.op());
    CriterionReport report;
    report.criterion_value = r * r + r_prime * r_prime;
    report.threshold = 1.0;
    report.certified = report.criterion_value <= 1.0 - tol.proj_tol;
    report.decision = pair_fredholm(p, p_prime, tol);
    if (report.certified) {
        const PairDecision dps = pair_fredholm(p, s, tol);
        const PairDecision dsp = pair_fredholm(s, p_prime, tol);
        if (dps.status != PairStatus::fredholm || dsp.status != PairStatus::fredholm) {
            std::ostringstream msg;
            msg << "cnorm_criterion: component pair not Fredholm although the criterion "
                   "value is "
                << report.criterion_value;
            throw NumericalError(msg.str());
        }
        report.predicted_index = *dps.index + *dsp.index;
        report.cross_checks.push_back(
            {"pair_is_fredholm", report.decision.status == PairStatus::fredholm});
        report.cross_checks.push_back(
            {"index_matches_additivity",
             report.decision.index.has_value() && *report.decision.index == *report.predicted_index});
    }
    return report;
}

namespace {

// Smallest singular value of the compression Ran(from) -> Ran(to), i.e. the
// best constant eps with ||to . x|| >= eps ||x|| on Ran(from). A genuine rank
// drop (dim Ran(to) < dim Ran(from)) forces 0.
double min_compression_sv(const DenseOp& from, const DenseOp& to, const Tolerance& tol) {
    const DenseOp m = restricted_map(from, to, tol);
    if (m.cols() == 0) return 1.0; // nothing to bound on a zero range
    if (m.rows() < m.cols()) return 0.0;
    Eigen::JacobiSVD<DenseOp> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

// Same bound through the Gram route: sqrt of the smallest eigenvalue of
// U* Q U for U an orthonormal basis of Ran(P), using <x, Qx> = ||Qx||^2.
double min_compression_gram(const DenseOp& from, const DenseOp& to, const Tolerance& tol) {
    const DenseOp u = range_basis(from, tol);
    if (u.cols() == 0) return 1.0;
    const DenseOp gram = u.adjoint() * to * u;
    Eigen::SelfAdjointEigenSolver<DenseOp> es((gram + gram.adjoint()) / 2.0);
    return std::sqrt(std::max(0.0, es.eigenvalues()(0)));
}

} // namespace

Lemma11Report lemma11_check(const BlockProjection& p, const BlockProjection& p_prime,
                            const Tolerance& tol) {
    tol.validate();
    auto [a, b] = align(p.op(), p_prime.op());
    Lemma11Report report;
    report.tail_start = a.prefix_len();
    report.epsilon = 1.0 - calkin_norm(a - b);
    const double slack = tol.proj_tol;
    if (report.epsilon > slack) {
        bool c2 = true, c3 = true;
        for (std::size_t i = 0; i < a.cycle_len(); ++i) {
            const DenseOp& pa = a.cycle()[i];
            const DenseOp& pb = b.cycle()[i];
            c2 = c2 && min_compression_sv(pa, pb, tol) >= report.epsilon - slack &&
                 min_compression_sv(pb, pa, tol) >= report.epsilon - slack;
            c3 = c3 && min_compression_gram(pa, pb, tol) >= report.epsilon - slack &&
                 min_compression_gram(pb, pa, tol) >= report.epsilon - slack;
        }
        report.cond2_holds = c2;
        report.cond3_holds = c3;
    }
    const bool fred = pair_fredholm(p, p_prime, tol).status == PairStatus::fredholm;
    report.agrees_with_fredholm = (report.cond2_holds && report.cond3_holds) == fred;
    return report;
}

CriterionReport graph_criterion(const GraphBC& bc0, const GraphBC& bc1, const Tolerance& tol) {
    tol.validate();
    const BlockOp hyp = BlockOp::identity(bc0.base().block_dim()) - bc1.base().op() -
                        bc0.base().op();
    if (!is_finite_rank(hyp, tol))
        throw PreconditionError("graph_criterion: 1 - S1 - S0 is not finite rank");

    CriterionReport report;
    report.criterion_value = calkin_norm(bc0.map()) * calkin_norm(bc1.map());
    report.threshold = 1.0;
    report.certified = report.criterion_value <= 1.0 - tol.proj_tol;

    const BlockProjection p0 = graph_projection(bc0, tol);
    const BlockProjection p1 = graph_projection(bc1, tol);
    report.decision = pair_fredholm(p1, p0.complement(), tol);

    if (report.certified) {
        const PairDecision base = pair_fredholm(bc1.base(), bc0.base().complement(), tol);
        if (base.status != PairStatus::fredholm)
            throw NumericalError("graph_criterion: base pair (S1, 1-S0) not Fredholm");
        report.predicted_index = *base.index;
        report.cross_checks.push_back(
            {"pair_is_fredholm", report.decision.status == PairStatus::fredholm});
        report.cross_checks.push_back(
            {"index_matches_base",
             report.decision.index.has_value() && *report.decision.index == *report.predicted_index});
        bool constant = true;
        for (int k = 0; k <= 10; ++k) {
            const double s = k / 10.0;
            const BlockProjection q0 = graph_projection(bc0.scaled(s), tol);
            const BlockProjection q1 = graph_projection(bc1.scaled(s), tol);
            const PairDecision ds = pair_fredholm(q1, q0.complement(), tol);
            constant = constant && ds.status == PairStatus::fredholm && ds.index &&
                       *ds.index == *report.predicted_index;
        }
        report.cross_checks.push_back({"index_constant_on_scaling_path", constant});
    }
    return report;
}

SharpnessTriple sharpness_example(double beta) {
    if (!(beta > 0.0 && beta < std::numbers::pi / 2.0))
        throw InputError("sharpness_example: beta must lie strictly in (0, pi/2)");
    const BlockOp s = BlockOp::repeating(proj_line2(1.0, 0.0));
    const BlockOp p = BlockOp::repeating(proj_line2(std::cos(beta), std::sin(beta)));
    const double b2 = beta + std::numbers::pi / 2.0;
    const BlockOp pp = BlockOp::repeating(proj_line2(std::cos(b2), std::sin(b2)));
    return {BlockProjection(p), BlockProjection(pp), BlockProjection(s)};
}

std::pair<GraphBC, GraphBC> graph_sharpness_example(double g) {
    if (!(g > 0.0) || !std::isfinite(g))
        throw InputError("graph_sharpness_example: g must be positive and finite");
    DenseOp s0(2, 2), s1(2, 2), g0(2, 2), g1(2, 2);
    s0 << 1, 0, 0, 0;
    s1 << 0, 0, 0, 1;
    g0 << 0, 0, g, 0;        // e1 -> g e2
    g1 << 0, 1.0 / g, 0, 0;  // e2 -> (1/g) e1
    GraphBC bc0(BlockProjection(BlockOp::repeating(s0)), BlockOp::repeating(g0));
    GraphBC bc1(BlockProjection(BlockOp::repeating(s1)), BlockOp::repeating(g1));
    return {std::move(bc0), std::move(bc1)};
}

} // namespace fredpair
