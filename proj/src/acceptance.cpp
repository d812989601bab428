#include "fredpair/acceptance.hpp"

#include "fredpair/corpus.hpp"
#include "fredpair/fredholm_criteria.hpp"
#include "fredpair/homotopy.hpp"
#include "fredpair/lorentz_toy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace fredpair {

namespace {

/// Collects failures and the worst observed error of a criterion run.
class Check {
public:
    void require(bool ok, const std::string& what) {
        if (!ok) {
            ++failures_;
            if (first_failure_.empty()) first_failure_ = what;
        }
    }
    void observe(double err) { worst_ = std::max(worst_, err); }

    bool passed() const { return failures_ == 0; }
    std::string detail() const {
        std::ostringstream os;
        if (failures_ == 0)
            os << "max error " << worst_;
        else
            os << failures_ << " failure(s); first: " << first_failure_;
        return os.str();
    }

private:
    int failures_ = 0;
    double worst_ = 0.0;
    std::string first_failure_;
};

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// 0: rank and compression-dimension invariants of the dense kit. Deliberately
// sensitive to corrupted tolerances.
void crit_core_sanity(const Tolerance& tol, std::uint64_t, Check& ck) {
    DenseOp m = DenseOp::Zero(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = 0.4;
    m(2, 2) = 1e-12;
    ck.require(rank_of(m, tol) == 2, "rank_of(diag(1, 0.4, 1e-12)) != 2");
    m(1, 1) = 1e-5; // still far above the default cutoff, gone under a corrupted one
    ck.require(rank_of(m, tol) == 2, "rank_of(diag(1, 1e-5, 1e-12)) != 2");
    ck.require(rank_of(DenseOp::Identity(4, 4), tol) == 4, "rank of identity");
    ck.require(rank_of(DenseOp::Zero(3, 3), tol) == 0, "rank of zero");

    DenseVec v1(3), v2(3);
    v1 << 1, 0, 0;
    v2 << 0, 1, 2;
    const DenseOp p = orth_projector({v1, v2}, 3, tol);
    ck.require(is_projection(p, tol), "orth_projector output fails is_projection");
    ck.require(rank_of(p, tol) == 2, "orth_projector rank != span dimension");

    // Compression of two planes meeting at a shallow and a steep angle: the
    // singular values 1 and 1/sqrt(5) must both be counted.
    DenseVec w(3);
    w << 0, 1, 0;
    const DenseOp q = orth_projector({v1, w}, 3, tol);
    const FinitePairIndex fp = pair_index_finite(p, q, tol);
    ck.require(fp.dim_ker == 0 && fp.dim_coker == 0 && fp.index == 0,
               "pair_index_finite dims wrong for transversal planes");

    const DenseOp e = eigenspace_at(m, 1.0, tol);
    ck.require(e.cols() == 1, "eigenspace_at(diag, 1) dimension");
    ck.observe(op_norm(m * e - e));
}

// ---------------------------------------------------------------------------
// 1: the closed-form 2x2 difference norm against the SVD route.
void crit_two_dim_formula(const Tolerance&, std::uint64_t seed, Check& ck) {
    RandomStream rs(seed ^ 0x01);
    const DenseOp q = proj_line2(1.0, 0.0);
    int done = 0;
    while (done < 1000) {
        const double a = rs.uniform(-3.0, 3.0);
        const double b = rs.uniform(-3.0, 3.0);
        if (std::hypot(a, b) < 1e-6) continue;
        const double err = std::abs(diff_norm_2d(a, b) - op_norm(proj_line2(a, b) - q));
        ck.observe(err);
        ck.require(err <= 1e-12, "2d formula error " + fmt(err) + " at (" + fmt(a) + "," + fmt(b) + ")");
        ++done;
    }
}

// ---------------------------------------------------------------------------
// 2: graph projections and the graph estimate.
void crit_graph_estimate(const Tolerance& tol, std::uint64_t seed, Check& ck) {
    RandomStream rs(seed ^ 0x02);
    for (int n = 0; n < 200; ++n) {
        const Index d = rs.uniform_int(2, 8);
        const GraphBC bc = random_graph_bc(rs, d, 10.0, tol);
        const BlockProjection p = graph_projection(bc, tol);
        double defect = 0.0;
        for (const auto& b : p.op().prefix()) defect = std::max(defect, projection_defect(b).max());
        for (const auto& b : p.op().cycle()) defect = std::max(defect, projection_defect(b).max());
        ck.observe(defect);
        ck.require(defect <= 1e-10, "projection defect " + fmt(defect));
        const double lhs = calkin_norm(p.op() - bc.base().op());
        const double bound = graphest_bound(bc);
        ck.observe(std::max(0.0, lhs - bound));
        ck.require(lhs <= bound + 1e-10,
                   "graph estimate violated: " + fmt(lhs) + " > " + fmt(bound));
    }
    // Scalar blocks attain the bound exactly.
    for (int n = 0; n < 25; ++n) {
        const double g = std::pow(10.0, rs.uniform(-2.0, 1.0));
        DenseOp s(2, 2), gm(2, 2);
        s << 1, 0, 0, 0;
        gm << 0, 0, g, 0;
        const GraphBC bc(BlockProjection(BlockOp::repeating(s)), BlockOp::repeating(gm), tol);
        const double lhs = calkin_norm(graph_projection(bc, tol).op() - bc.base().op());
        const double err = std::abs(lhs - g / std::sqrt(1.0 + g * g));
        ck.observe(err);
        ck.require(err <= 1e-12, "scalar equality error " + fmt(err) + " at g = " + fmt(g));
    }
}

// ---------------------------------------------------------------------------
// 3: the homotopy of projections, dense and block.
void crit_homotopy(const Tolerance& tol, std::uint64_t seed, Check& ck) {
    RandomStream rs(seed ^ 0x03);
    for (int n = 0; n < 100; ++n) {
        const Index dim = rs.uniform_int(4, 12);
        const auto [p0, p1] = random_dense_pair(rs, dim, 0.95, tol);
        const double dist = op_norm(p1 - p0);
        for (int k = 0; k <= 100; ++k) {
            const double t = k / 100.0;
            const DenseOp w = w_path(p0, p1, t, tol);
            const double defect = projection_defect(w).max();
            ck.observe(defect);
            ck.require(defect <= 1e-8, "w_path projection defect " + fmt(defect));
            const double excess = op_norm(w - p0) - dist;
            ck.observe(std::max(0.0, excess));
            ck.require(excess <= 1e-8, "w_path norm bound exceeded by " + fmt(excess));
            if (k == 0) ck.require(op_norm(w - p0) <= 1e-10, "w_path endpoint t=0");
            if (k == 100) ck.require(op_norm(w - p1) <= 1e-10, "w_path endpoint t=1");
        }
    }
    for (int n = 0; n < 50; ++n) {
        PairCorpusParams params;
        const auto [p0, p1] = random_fredholm_pair(rs, params, tol);
        const double limit = calkin_norm(p1.op() - p0.op());
        const PairDecision base = pair_fredholm(p0, p1, tol);
        std::optional<int> index0;
        for (int k = 0; k <= 100; ++k) {
            const double t = k / 100.0;
            const BlockPathSample sample = p_path(p0, p1, t, tol);
            ck.observe(std::max(0.0, sample.calkin_to_start - limit));
            ck.require(sample.calkin_to_start <= limit + 1e-8,
                       "p_path Calkin bound exceeded: " + fmt(sample.calkin_to_start) +
                           " > " + fmt(limit));
            const PairDecision along = pair_fredholm(sample.projection, p0, tol);
            ck.require(along.status == PairStatus::fredholm, "p_path left the Fredholm set");
            if (!index0) index0 = along.index;
            ck.require(along.index == index0, "p_path index not constant");
            if (k == 100)
                ck.require(bop_norm(sample.projection.op() - p1.op()) <= 1e-10,
                           "p_path endpoint t=1");
        }
        ck.require(base.status == PairStatus::fredholm, "corpus pair not Fredholm");
    }
}

// ---------------------------------------------------------------------------
// 4: checker index against the truncation oracle.
void crit_oracle(const Tolerance& tol, std::uint64_t seed, Check& ck) {
    RandomStream rs(seed ^ 0x04);
    for (int n = 0; n < 200; ++n) {
        PairCorpusParams params;
        params.block_dim = (n % 4 == 0) ? 3 : 2; // keep the block dimension generic
        const auto [p, q] = random_fredholm_pair(rs, params, tol);
        const PairDecision d = pair_fredholm(p, q, tol);
        ck.require(d.status == PairStatus::fredholm, "corpus pair not Fredholm");
        if (d.status != PairStatus::fredholm) continue;
        auto [a, b] = align(p.op(), q.op());
        const std::size_t blocks = a.prefix_len() + 2 * a.cycle_len();
        const int oracle = pair_index_oracle(p, q, blocks, tol);
        ck.require(*d.index == oracle,
                   "index mismatch: checker " + std::to_string(*d.index) + " vs oracle " +
                       std::to_string(oracle));
    }
}

// ---------------------------------------------------------------------------
// 5: sharpness of the Calkin-sum criterion.
void crit_cnorm_sharpness(const Tolerance& tol, std::uint64_t, Check& ck) {
    const double pi = std::numbers::pi;
    for (int k = 1; k <= 5; ++k) {
        const double beta = k * pi / 12.0;
        const SharpnessTriple t = sharpness_example(beta);
        const CriterionReport on_boundary = cnorm_criterion(t.p, t.p_prime, t.s, tol);
        const double err = std::abs(on_boundary.criterion_value - 1.0);
        ck.observe(err);
        ck.require(err <= 1e-12, "criterion value off 1 by " + fmt(err));
        ck.require(!on_boundary.certified, "criterion certified on the boundary");
        ck.require(on_boundary.decision.status != PairStatus::fredholm,
                   "boundary pair decided Fredholm");

        // Pull the second line strictly inside the criterion region (it sits
        // at -pi/2 from P; shrinking that offset moves it closer to S on the
        // far side) and decorate with a prefix rank flip so index additivity
        // is exercised non-trivially.
        const double b2 = beta - (1.0 - 1e-3) * pi / 2.0;
        DenseOp full = DenseOp::Identity(2, 2);
        DenseOp e1(2, 2), zero = DenseOp::Zero(2, 2);
        e1 << 1, 0, 0, 0;
        const BlockProjection p(BlockOp(2, {full}, t.p.op().cycle()), tol);
        const BlockProjection s(BlockOp(2, {e1}, t.s.op().cycle()), tol);
        const BlockProjection pp(
            BlockOp(2, {zero}, {proj_line2(std::cos(b2), std::sin(b2))}), tol);
        const CriterionReport inside = cnorm_criterion(p, pp, s, tol);
        ck.require(inside.certified, "perturbed example not certified");
        ck.require(inside.criterion_value < 1.0, "perturbed criterion value not < 1");
        ck.require(inside.all_checks_pass(), "perturbed example cross-checks failed");
        if (inside.predicted_index) {
            ck.require(*inside.predicted_index == -2, "additivity prediction != -2");
            const int oracle = pair_index_oracle(p, pp, 1 + 2, tol);
            ck.require(oracle == *inside.predicted_index, "oracle disagrees with additivity");
        }
    }
}

// ---------------------------------------------------------------------------
// 6: the graph-product boundary on a 41 x 41 grid.
void crit_graph_boundary(const Tolerance& tol, std::uint64_t, Check& ck) {
    const int n = 41;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double g0 = 2.0 * i / (n - 1);
            const double g1 = 2.0 * j / (n - 1);
            DenseOp s0(2, 2), s1(2, 2), m0(2, 2), m1(2, 2);
            s0 << 1, 0, 0, 0;
            s1 << 0, 0, 0, 1;
            m0 << 0, 0, g0, 0;
            m1 << 0, g1, 0, 0;
            const GraphBC bc0(BlockProjection(BlockOp::repeating(s0)), BlockOp::repeating(m0),
                              tol);
            const GraphBC bc1(BlockProjection(BlockOp::repeating(s1)), BlockOp::repeating(m1),
                              tol);
            const CriterionReport rep = graph_criterion(bc0, bc1, tol);
            const bool inside = i * j * 4 < (n - 1) * (n - 1); // g0 g1 < 1, exactly
            ck.require(rep.certified == inside,
                       "certification boundary missed at (" + fmt(g0) + "," + fmt(g1) + ")");
            if (rep.certified) {
                ck.require(rep.predicted_index && *rep.predicted_index == 0,
                           "base index != 0 on the Fredholm side");
                ck.require(rep.all_checks_pass(),
                           "cross-checks failed at (" + fmt(g0) + "," + fmt(g1) + ")");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// 7: the toy boundary-value model.
void crit_toy_bvp(const Tolerance& tol, std::uint64_t, Check& ck) {
    const double pi = std::numbers::pi;
    int prev_index = 0;
    for (int z = 0; z <= 3; ++z) {
        ModeSpec spec;
        spec.n_zero_modes = z;
        const ModelBVP m = ModelBVP::build(spec, tol);
        const ApsCompactness ac = aps_compactness_check(m, tol);
        ck.require(ac.finite_rank, "1 - S0 - S1c not finite rank");
        ck.require(ac.rank == z, "rank(1 - S0 - S1c) != n_zero_modes");
        const int idx = m.aps_index(tol);
        const PairDecision via_pair = bvp_fredholm(m, m.s0(), m.s1c(), true, tol);
        ck.require(via_pair.status == PairStatus::fredholm && via_pair.index &&
                       *via_pair.index == idx,
                   "trace index disagrees with the pair decision");
        if (z > 0)
            ck.require(std::abs(idx - prev_index) == 1, "zero mode moved the index by != 1");
        prev_index = idx;
    }
    {
        ModeSpec spec;
        spec.n_coupled = 1;
        spec.coupling_angles = {pi / 4.0};
        spec.phases = {{0.3, -0.7}};
        const ModelBVP m = ModelBVP::build(spec, tol);
        const ApsCompactness ac = aps_compactness_check(m, tol);
        ck.require(ac.offdiag_ranks.first == 1 && ac.offdiag_ranks.second == 1,
                   "coupled-mode off-diagonal ranks != (1, 1)");
    }

    ModeSpec spec;
    spec.n_coupled = 1;
    spec.coupling_angles = {pi / 4.0};
    spec.phases = {{0.3, -0.7}};
    spec.n_zero_modes = 1;
    const ModelBVP m = ModelBVP::build(spec, tol);
    const int aps = m.aps_index(tol);

    // Tilted spectral lines against the Calkin-sum criterion.
    const int n = 21;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double beta = i * pi / (2.0 * (n - 1));
            const double beta_p = j * pi / (2.0 * (n - 1));
            const DenseOp c0 = proj_line2(std::cos(pi / 2.0 + beta), std::sin(pi / 2.0 + beta));
            const DenseOp c1 = proj_line2(std::cos(-beta_p), std::sin(-beta_p));
            const BlockProjection p0(BlockOp(2, m.s0().op().prefix(), {c0}), tol);
            const BlockProjection p1(BlockOp(2, m.s1(tol).op().prefix(), {c1}), tol);
            const CriterionReport rep = final_cnorm(m, p0, p1, tol);
            ck.require(rep.certified == (i + j < n - 1),
                       "cnorm certification boundary missed at (" + fmt(beta) + "," +
                           fmt(beta_p) + ")");
            ck.require(rep.all_checks_pass(), "final_cnorm cross-checks failed");
            const PairDecision direct = bvp_fredholm(m, p0, p1, false, tol);
            ck.require(direct.status == rep.decision.status && direct.index == rep.decision.index,
                       "final_cnorm disagrees with bvp_fredholm");
            if (rep.certified)
                ck.require(rep.predicted_index && *rep.predicted_index == aps &&
                               rep.decision.index == rep.predicted_index,
                           "certified index != APS index");
        }
    }

    // Scalar graph perturbations against the graph criterion.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double g0 = 2.0 * i / (n - 1);
            const double g1 = 2.0 * j / (n - 1);
            DenseOp m0(2, 2), m1(2, 2);
            m0 << 0, g0, 0, 0; // Ran(S0) = e2 -> e1
            m1 << 0, 0, g1, 0; // Ran(S1) = e1 -> e2
            std::vector<DenseOp> zp(m.s0().op().prefix_len(), DenseOp::Zero(2, 2));
            const GraphBC bc0(m.s0(), BlockOp(2, zp, {m0}), tol);
            const GraphBC bc1(m.s1(tol), BlockOp(2, zp, {m1}), tol);
            const CriterionReport rep = final_graph(m, bc0, bc1, tol);
            ck.require(rep.certified == (i * j * 4 < (n - 1) * (n - 1)),
                       "graph certification boundary missed at (" + fmt(g0) + "," + fmt(g1) +
                           ")");
            ck.require(rep.all_checks_pass(), "final_graph cross-checks failed");
            if (rep.certified)
                ck.require(rep.predicted_index && *rep.predicted_index == aps,
                           "certified graph index != APS index");
        }
    }
}

// ---------------------------------------------------------------------------
// 8: Calkin-norm characterizations and the complement mirror.
void crit_calkin_characterizations(const Tolerance& tol, std::uint64_t seed, Check& ck) {
    RandomStream rs(seed ^ 0x08);
    auto random_block = [&](Index d) {
        DenseOp b(d, d);
        for (Index r = 0; r < d; ++r)
            for (Index c = 0; c < d; ++c) b(r, c) = rs.uniform(0.3, 3.0) * rs.cnormal();
        return b;
    };
    for (int n = 0; n < 50; ++n) {
        const Index d = rs.uniform_int(2, 4);
        std::vector<DenseOp> pre, cyc;
        const int np = rs.uniform_int(0, 4);
        const int nc = rs.uniform_int(1, 3);
        for (int i = 0; i < np; ++i) pre.push_back(random_block(d));
        for (int i = 0; i < nc; ++i) cyc.push_back(random_block(d));
        const BlockOp a(d, pre, cyc);

        const double calkin = calkin_norm(a);
        double prev = bop_norm(a) + 1.0;
        for (std::size_t k = 0; k <= a.prefix_len() + 2 * a.cycle_len(); ++k) {
            const double tn = tail_norm(a, k);
            ck.require(tn <= prev + 1e-15, "tail norm increased");
            if (k >= a.prefix_len())
                ck.require(tn == calkin, "tail norm != calkin norm past the prefix");
            prev = tn;
        }
        for (int k = 0; k < 20; ++k) {
            std::vector<DenseOp> rewritten;
            const int len = rs.uniform_int(0, 5);
            for (int i = 0; i < len; ++i) rewritten.push_back(random_block(d));
            const BlockOp b(d, rewritten, cyc);
            ck.require(calkin_norm(b) == calkin, "calkin norm changed under prefix rewrite");
        }
    }
    for (int n = 0; n < 50; ++n) {
        PairCorpusParams params;
        const auto [p, q] = random_fredholm_pair(rs, params, tol);
        const PairDecision d = pair_fredholm(p, q, tol);
        const PairDecision dc = pair_fredholm(p.complement(), q.complement(), tol);
        ck.require(d.status == dc.status, "complement pair status differs");
        if (d.index && dc.index)
            ck.require(*d.index == -*dc.index, "complement pair index not negated");
        const PairDecision swapped = pair_fredholm(q, p, tol);
        if (d.index && swapped.index)
            ck.require(*d.index == -*swapped.index, "swapped pair index not negated");
    }
    for (int n = 0; n < 10; ++n) {
        const auto [p, q] = random_orthogonal_tail_pair(rs, tol);
        const PairDecision d = pair_fredholm(p, q, tol);
        const PairDecision dc = pair_fredholm(p.complement(), q.complement(), tol);
        ck.require(d.status != PairStatus::fredholm, "orthogonal tail decided Fredholm");
        ck.require(d.status == dc.status, "complement status differs on orthogonal tails");
    }
}

// ---------------------------------------------------------------------------
// 9: the three equivalent conditions agree with the Fredholm decision.
void crit_lemma11(const Tolerance& tol, std::uint64_t seed, Check& ck) {
    RandomStream rs(seed ^ 0x09);
    for (int n = 0; n < 200; ++n) {
        PairCorpusParams params;
        const auto [p, q] = random_fredholm_pair(rs, params, tol);
        const Lemma11Report rep = lemma11_check(p, q, tol);
        ck.require(rep.agrees_with_fredholm,
                   "lemma11 disagreement on a Fredholm pair (eps = " + fmt(rep.epsilon) + ")");
    }
    for (int n = 0; n < 20; ++n) {
        const auto [p, q] = random_orthogonal_tail_pair(rs, tol);
        const Lemma11Report rep = lemma11_check(p, q, tol);
        ck.require(rep.agrees_with_fredholm, "lemma11 disagreement on a non-Fredholm pair");
        ck.require(!rep.cond2_holds && !rep.cond3_holds,
                   "lower bounds held for an orthogonal tail");
    }
}

} // namespace

std::vector<CriterionResult> run_acceptance(const Tolerance& tol, std::uint64_t seed) {
    using Fn = std::function<void(const Tolerance&, std::uint64_t, Check&)>;
    struct Entry {
        std::string name;
        Fn fn;
        double budget_seconds; // 0 = unbounded
    };
    const std::vector<Entry> criteria = {
        {"core-linalg rank invariants", crit_core_sanity, 0.0},
        {"two-dimensional difference-norm formula", crit_two_dim_formula, 1.0},
        {"graph projections and graph estimate", crit_graph_estimate, 10.0},
        {"homotopy of projections", crit_homotopy, 60.0},
        {"truncation oracle equivalence", crit_oracle, 60.0},
        {"Calkin-sum criterion sharpness", crit_cnorm_sharpness, 0.0},
        {"graph-product criterion boundary", crit_graph_boundary, 0.0},
        {"toy boundary-value model", crit_toy_bvp, 60.0},
        {"Calkin-norm characterizations", crit_calkin_characterizations, 0.0},
        {"equivalent-condition agreement", crit_lemma11, 0.0},
    };
    std::vector<CriterionResult> results;
    int id = 0;
    for (const auto& entry : criteria) {
        CriterionResult r;
        r.id = id++;
        r.name = entry.name;
        Check ck;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            entry.fn(tol, seed, ck);
            r.passed = ck.passed();
            r.detail = ck.detail();
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (entry.budget_seconds > 0.0 && elapsed > entry.budget_seconds) {
            r.passed = false;
            r.detail += "; runtime " + std::to_string(elapsed) + " s over the " +
                        std::to_string(entry.budget_seconds) + " s budget";
        }
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace fredpair
