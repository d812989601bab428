#include "fredpair/projection_geometry.hpp"
#include "fredpair/corpus.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fredpair;
using namespace fredpair::testing;

TEST_SUITE_BEGIN("projection_geometry");

TEST_CASE("proj_line2") {
    CHECK(dist(proj_line2(1, 0), mat2(1, 0, 0, 0)) == 0.0);
    CHECK(dist(proj_line2(1, 1), mat2(0.5, 0.5, 0.5, 0.5)) < 1e-15);
    CHECK(dist(proj_line2(2, 0), proj_line2(1, 0)) == 0.0);
    CHECK(dist(proj_line2(-3, -3), proj_line2(1, 1)) < 1e-15);
    CHECK_THROWS_AS(proj_line2(0, 0), InputError);
}

TEST_CASE("diff_norm_2d closed form") {
    CHECK(diff_norm_2d(1, 0) == 0.0);
    CHECK(diff_norm_2d(0, 1) == 1.0);
    CHECK(diff_norm_2d(1, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(diff_norm_2d(0, 0), InputError);

    RandomStream rs(301);
    const DenseOp q = proj_line2(1, 0);
    for (int n = 0; n < 1000; ++n) {
        const double a = rs.uniform(-5.0, 5.0);
        const double b = rs.uniform(-5.0, 5.0);
        if (std::hypot(a, b) < 1e-6) continue;
        CHECK(std::abs(diff_norm_2d(a, b) - op_norm(proj_line2(a, b) - q)) <= 1e-12);
    }
}

TEST_CASE("principal_angle_sines") {
    const DenseOp p = orth_projector({vec({1, 0, 0}), vec({0, 1, 0})}, 3);
    const auto zeros = principal_angle_sines(p, p);
    REQUIRE(zeros.size() == 2);
    CHECK(zeros[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(zeros[1] == doctest::Approx(0.0).epsilon(1e-12));

    const auto one = principal_angle_sines(proj_line2(1, 0), proj_line2(0, 1));
    REQUIRE(one.size() == 1);
    CHECK(one[0] == doctest::Approx(1.0));

    const auto diag = principal_angle_sines(proj_line2(1, 0), proj_line2(1, 1));
    REQUIRE(diag.size() == 1);
    CHECK(diag[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

    CHECK_THROWS_AS(principal_angle_sines(mat2(0, 1, 0, 0), proj_line2(1, 0)), InputError);
}

TEST_CASE("max principal sine equals difference norm on the rotation corpus") {
    // Restricted corpus: equal ranks and P + Q of full rank (every kernel
    // direction is rotated, with sines bounded away from 1).
    RandomStream rs(302);
    Tolerance tol;
    for (int n = 0; n < 30; ++n) {
        const Index r = rs.uniform_int(1, 3);
        const Index dim = 2 * r;
        const DenseOp p = random_projection(rs, dim, r);
        std::vector<double> sines(static_cast<std::size_t>(r));
        double max_sine = 0.0;
        for (double& s : sines) {
            s = rs.uniform(0.1, 0.95);
            max_sine = std::max(max_sine, s);
        }
        const DenseOp q = rotate_range(rs, p, sines, tol);
        const auto angles = principal_angle_sines(p, q, tol);
        REQUIRE(!angles.empty());
        CHECK(angles.back() == doctest::Approx(op_norm(p - q)).epsilon(1e-10));
        CHECK(angles.back() == doctest::Approx(max_sine).epsilon(1e-10));
    }
}

TEST_CASE("GraphBC invariants") {
    const BlockProjection base(BlockOp::repeating(mat2(1, 0, 0, 0)));
    DenseOp good(2, 2), bad(2, 2);
    good << 0, 0, 2, 0; // e1 -> 2 e2
    bad << 0, 2, 0, 0;  // e2 -> 2 e1: not supported on Ran(S)
    CHECK_NOTHROW(GraphBC(base, BlockOp::repeating(good)));
    CHECK_THROWS_AS(GraphBC(base, BlockOp::repeating(bad)), InputError);
}

TEST_CASE("graph_projection closed form") {
    const BlockProjection base(BlockOp::repeating(mat2(1, 0, 0, 0)));
    const GraphBC zero(base, BlockOp::zero(2));
    CHECK(bop_norm(graph_projection(zero).op() - base.op()) < 1e-14);

    const double g = 0.8;
    DenseOp gm(2, 2);
    gm << 0, 0, g, 0;
    const GraphBC bc(base, BlockOp::repeating(gm));
    const BlockProjection p = graph_projection(bc);
    CHECK(dist(p.op().cycle()[0], proj_line2(1, g)) < 1e-14);
    CHECK(rank_of(p.op().cycle()[0]) == rank_of(base.op().cycle()[0]));
}

TEST_CASE("graph projections of random maps") {
    RandomStream rs(303);
    Tolerance tol;
    for (int n = 0; n < 40; ++n) {
        const Index d = rs.uniform_int(2, 8);
        const GraphBC bc = random_graph_bc(rs, d, 10.0, tol);
        const BlockProjection p = graph_projection(bc, tol);
        for (const auto& b : p.op().prefix()) CHECK(projection_defect(b).max() <= 1e-10);
        for (const auto& b : p.op().cycle()) {
            CHECK(projection_defect(b).max() <= 1e-10);
        }
        for (std::size_t i = 0; i < p.op().cycle_len(); ++i)
            CHECK(rank_of(p.op().cycle()[i], tol) ==
                  rank_of(bc.base().op().cycle()[i], tol));
        CHECK(calkin_norm(p.op() - bc.base().op()) <= graphest_bound(bc) + 1e-10);
    }
}

TEST_CASE("graph projector agrees with the orthonormalization route") {
    RandomStream rs(304);
    Tolerance tol;
    for (int n = 0; n < 20; ++n) {
        const Index d = rs.uniform_int(2, 6);
        const GraphBC bc = random_graph_bc(rs, d, 5.0, tol);
        const BlockProjection p = graph_projection(bc, tol);
        auto check_block = [&](const DenseOp& s, const DenseOp& g, const DenseOp& pb) {
            const DenseOp u = range_basis(s, tol);
            const DenseOp span = (DenseOp::Identity(d, d) + g) * u;
            CHECK(dist(pb, orth_projector(span, tol)) <= 1e-10);
        };
        for (std::size_t i = 0; i < p.op().prefix_len(); ++i)
            check_block(bc.base().op().prefix()[i], bc.map().prefix()[i], p.op().prefix()[i]);
        for (std::size_t i = 0; i < p.op().cycle_len(); ++i)
            check_block(bc.base().op().cycle()[i], bc.map().cycle()[i], p.op().cycle()[i]);
    }
}

TEST_CASE("graphest_bound") {
    const BlockProjection base(BlockOp::repeating(mat2(1, 0, 0, 0)));
    CHECK(graphest_bound(GraphBC(base, BlockOp::zero(2))) == 0.0);

    DenseOp gm(2, 2);
    gm << 0, 0, 1, 0;
    const GraphBC unit(base, BlockOp::repeating(gm));
    CHECK(graphest_bound(unit) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

    // Scalar blocks attain the bound exactly.
    for (double g : {0.1, 0.5, 1.0, 2.0, 7.5}) {
        DenseOp m(2, 2);
        m << 0, 0, g, 0;
        const GraphBC bc(base, BlockOp::repeating(m));
        const double lhs = calkin_norm(graph_projection(bc).op() - base.op());
        CHECK(std::abs(lhs - g / std::sqrt(1.0 + g * g)) <= 1e-12);
    }
}

TEST_CASE("finite-rank change of the map leaves Calkin data alone") {
    const BlockProjection base(BlockOp::repeating(mat2(1, 0, 0, 0)));
    DenseOp gm(2, 2), other(2, 2);
    gm << 0, 0, 0.7, 0;
    other << 0, 0, -42.0, 0;
    const GraphBC bc(base, BlockOp::repeating(gm));
    const GraphBC modified(BlockProjection(BlockOp(2, {mat2(1, 0, 0, 0)}, {mat2(1, 0, 0, 0)})),
                           BlockOp(2, {other}, {gm}));
    CHECK(calkin_norm(modified.map()) == calkin_norm(bc.map()));
    CHECK(graphest_bound(modified) == graphest_bound(bc));
    CHECK(calkin_norm(graph_projection(modified).op() - modified.base().op()) ==
          doctest::Approx(calkin_norm(graph_projection(bc).op() - bc.base().op()))
              .epsilon(1e-14));
}

TEST_SUITE_END();
