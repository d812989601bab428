#include "fredpair/homotopy.hpp"
#include "fredpair/corpus.hpp"
#include "fredpair/projection_geometry.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fredpair;
using namespace fredpair::testing;

TEST_SUITE_BEGIN("homotopy");

TEST_CASE("involution") {
    CHECK(dist(involution(DenseOp::Zero(2, 2)), DenseOp::Identity(2, 2)) == 0.0);
    CHECK(dist(involution(DenseOp::Identity(2, 2)), -DenseOp::Identity(2, 2)) == 0.0);
    CHECK(dist(involution(mat2(1, 0, 0, 0)), mat2(-1, 0, 0, 1)) == 0.0);
    CHECK_THROWS_AS(involution(mat2(0, 1, 0, 0)), InputError);
    const DenseOp p = orth_projector({vec({1, 2, 2})}, 3);
    CHECK(dist(involution_inverse(involution(p)), p) < 1e-15);
}

TEST_CASE("w_path endpoints and degenerate pair") {
    RandomStream rs(401);
    Tolerance tol;
    for (int n = 0; n < 10; ++n) {
        const auto [p0, p1] = random_dense_pair(rs, rs.uniform_int(3, 8), 0.9, tol);
        CHECK(dist(w_path(p0, p1, 0.0, tol), p0) <= 1e-10);
        CHECK(dist(w_path(p0, p1, 1.0, tol), p1) <= 1e-10);
    }
    const DenseOp p = orth_projector({vec({1, 2, 0})}, 3);
    for (double t : {0.0, 0.3, 0.7, 1.0})
        CHECK(dist(w_path(p, p, t), p) < 1e-12);
}

TEST_CASE("w_path rejects distance one and bad t") {
    const DenseOp e1 = proj_line2(1, 0);
    const DenseOp e2 = proj_line2(0, 1);
    CHECK_THROWS_AS(w_path(e1, e2, 0.5), PreconditionError);
    CHECK_THROWS_AS(w_path(e1, e1, 1.5), InputError);
    CHECK_THROWS_AS(w_path(e1, mat2(0, 1, 0, 0), 0.5), InputError);
}

TEST_CASE("w_path norm bound and projection axioms") {
    RandomStream rs(402);
    Tolerance tol;
    for (int n = 0; n < 15; ++n) {
        const auto [p0, p1] = random_dense_pair(rs, rs.uniform_int(4, 10), 0.95, tol);
        const double limit = op_norm(p1 - p0);
        for (int k = 0; k <= 20; ++k) {
            const DenseOp w = w_path(p0, p1, k / 20.0, tol);
            CHECK(projection_defect(w).max() <= 1e-8);
            CHECK(op_norm(w - p0) <= limit + 1e-8);
        }
    }
}

TEST_CASE("w_path is continuous in t") {
    RandomStream rs(403);
    Tolerance tol;
    const double h = 0.01;
    for (int n = 0; n < 5; ++n) {
        const auto [p0, p1] = random_dense_pair(rs, 6, 0.9, tol);
        DenseOp prev = w_path(p0, p1, 0.0, tol);
        for (int k = 1; k <= 100; ++k) {
            const DenseOp cur = w_path(p0, p1, k * h, tol);
            CHECK(op_norm(cur - prev) <= 5.0 * h * std::numbers::pi);
            prev = cur;
        }
    }
}

TEST_CASE("split_extreme") {
    const DenseOp e1 = proj_line2(1, 0);
    const DenseOp e2 = proj_line2(0, 1);

    const ExtremeSplit none = split_extreme(e1, e1);
    CHECK(none.v0.cols() == 0);
    CHECK(none.v1.cols() == 0);
    CHECK(none.vp.cols() == 2);

    const ExtremeSplit half = split_extreme(e1, DenseOp::Zero(2, 2));
    REQUIRE(half.v0.cols() == 1);
    CHECK(std::abs(half.v0(0, 0)) == doctest::Approx(1.0));
    CHECK(half.v1.cols() == 0);

    const ExtremeSplit both = split_extreme(e1, e2);
    CHECK(both.v0.cols() == 1);
    CHECK(both.v1.cols() == 1);
    CHECK(both.vp.cols() == 0);

    // Both projections restrict to the complement of the extreme spaces.
    RandomStream rs(404);
    Tolerance tol;
    const DenseOp p0 = random_projection(rs, 6, 3);
    DenseOp p1 = rotate_range(rs, p0, {0.5}, tol);
    // Flip a direction lying in both kernels, so it lands exactly in V1.
    const DenseOp joint_kernel = eigenspace_at(p0 + p1, 0.0, tol);
    REQUIRE(joint_kernel.cols() > 0);
    const DenseVec flip = joint_kernel.col(0);
    p1 += flip * flip.adjoint();
    p1 = ((p1 + p1.adjoint()) / 2.0).eval();
    const ExtremeSplit sp = split_extreme(p0, p1, tol);
    CHECK(sp.v1.cols() == 1);
    const DenseOp pvp = sp.vp * sp.vp.adjoint();
    CHECK(op_norm((DenseOp::Identity(6, 6) - pvp) * p0 * pvp) < 1e-10);
    CHECK(op_norm((DenseOp::Identity(6, 6) - pvp) * p1 * pvp) < 1e-10);
}

TEST_CASE("p_path endpoints and finite-rank start") {
    const DenseOp e1 = proj_line2(1, 0);
    const DenseOp e2 = proj_line2(0, 1);
    const PathSample end = p_path(e1, e2, 1.0);
    CHECK(dist(end.projection, e2) <= 1e-10);

    const PathSample start = p_path(e1, e2, 0.0);
    const ExtremeSplit sp = split_extreme(e1, e2);
    CHECK(rank_of(start.projection - e1) == sp.v0.cols() + sp.v1.cols());
}

TEST_CASE("p_path reduces to w_path when no extremes exist") {
    RandomStream rs(406);
    Tolerance tol;
    for (int n = 0; n < 8; ++n) {
        const auto [p0, p1] = random_dense_pair(rs, rs.uniform_int(3, 8), 0.9, tol);
        for (double t : {0.0, 0.25, 0.6, 1.0})
            CHECK(dist(p_path(p0, p1, t, tol).projection, w_path(p0, p1, t, tol)) <= 1e-9);
    }
}

TEST_CASE("block p_path: Calkin bound and index constancy") {
    RandomStream rs(405);
    Tolerance tol;
    for (int n = 0; n < 10; ++n) {
        const auto [p0, p1] = random_fredholm_pair(rs, PairCorpusParams{}, tol);
        const double limit = calkin_norm(p1.op() - p0.op());
        std::optional<int> index0;
        for (int k = 0; k <= 10; ++k) {
            const BlockPathSample s = p_path(p0, p1, k / 10.0, tol);
            CHECK(s.calkin_to_start <= limit + 1e-8);
            const PairDecision d = pair_fredholm(s.projection, p0, tol);
            REQUIRE(d.status == PairStatus::fredholm);
            if (!index0) index0 = d.index;
            CHECK(d.index == index0);
        }
        const BlockPathSample end = p_path(p0, p1, 1.0, tol);
        CHECK(bop_norm(end.projection.op() - p1.op()) <= 1e-10);
        // At t = 0 the path differs from P0 by a finite-rank operator.
        const BlockPathSample start = p_path(p0, p1, 0.0, tol);
        CHECK(is_finite_rank(start.projection.op() - p0.op(), tol));
    }
}

TEST_CASE("block p_path rejects non-Fredholm pairs") {
    const BlockProjection a(BlockOp::repeating(proj_line2(1, 0)));
    const BlockProjection b(BlockOp::repeating(proj_line2(0, 1)));
    CHECK_THROWS_AS(p_path(a, b, 0.5), PreconditionError);
    CHECK_THROWS_AS(split_extreme(a, b), PreconditionError);
}

TEST_CASE("block split_extreme confines extremes to the prefix") {
    const BlockProjection p0(BlockOp(2, {proj_line2(1, 0)}, {proj_line2(1, 0)}));
    const BlockProjection p1(BlockOp(2, {DenseOp::Zero(2, 2)}, {proj_line2(1, 1)}));
    const BlockExtremeSplit sp = split_extreme(p0, p1);
    CHECK(sp.tail_start == 1);
    CHECK(sp.dim_v0 == 1);
    CHECK(sp.dim_v1 == 0);
    REQUIRE(sp.prefix.size() == 1);
    CHECK(sp.prefix[0].v0.cols() == 1);
}

TEST_CASE("block w_path stays within the norm bound") {
    const BlockProjection p0(BlockOp(2, {proj_line2(1, 0)}, {proj_line2(1, 0)}));
    const BlockProjection p1(BlockOp(2, {proj_line2(1, 1)}, {proj_line2(2, 1)}));
    const double limit = bop_norm(p1.op() - p0.op());
    REQUIRE(limit < 1.0);
    for (int k = 0; k <= 10; ++k) {
        const BlockProjection w = w_path(p0, p1, k / 10.0);
        CHECK(bop_norm(w.op() - p0.op()) <= limit + 1e-8);
    }
    CHECK(bop_norm(w_path(p0, p1, 0.0).op() - p0.op()) <= 1e-10);
    CHECK(bop_norm(w_path(p0, p1, 1.0).op() - p1.op()) <= 1e-10);
}

TEST_SUITE_END();
