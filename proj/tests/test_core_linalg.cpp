#include "fredpair/core_linalg.hpp"
#include "fredpair/corpus.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace fredpair;
using namespace fredpair::testing;

TEST_SUITE_BEGIN("core_linalg");

TEST_CASE("op_norm on basic matrices") {
    CHECK(op_norm(DenseOp::Identity(2, 2)) == doctest::Approx(1.0));
    CHECK(op_norm(DenseOp::Zero(3, 3)) == 0.0);

    DenseOp d = DenseOp::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = Complex(0.0, -4.0);
    CHECK(op_norm(d) == doctest::Approx(4.0).epsilon(1e-14));

    CHECK(op_norm(DenseOp(0, 0)) == 0.0);
    CHECK(op_norm(DenseOp::Zero(0, 3)) == 0.0);

    DenseOp bad = DenseOp::Zero(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(op_norm(bad), InputError);
}

TEST_CASE("rank_of with relative cutoff") {
    CHECK(rank_of(DenseOp::Identity(5, 5)) == 5);

    const DenseVec u = vec({1.0, 2.0, Complex(0.0, 1.0)});
    const DenseVec w = vec({-1.0, 0.5, 3.0});
    CHECK(rank_of(DenseOp(u * w.adjoint())) == 1);

    DenseOp d = DenseOp::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 1e-14;
    Tolerance tol;
    tol.rank_tol = 1e-9;
    CHECK(rank_of(d, tol) == 1);

    CHECK(rank_of(DenseOp::Zero(4, 4)) == 0);
}

TEST_CASE("orth_projector basics") {
    CHECK(dist(orth_projector({vec({1, 0})}, 2), mat2(1, 0, 0, 0)) < 1e-15);
    CHECK(dist(orth_projector({vec({1, 1})}, 2), mat2(0.5, 0.5, 0.5, 0.5)) < 1e-15);
    CHECK(dist(orth_projector({}, 3), DenseOp::Zero(3, 3)) == 0.0);
    CHECK_THROWS_AS(orth_projector({vec({1, 0}), vec({1, 0, 0})}, 2), InputError);
}

TEST_CASE("is_projection") {
    CHECK(is_projection(mat2(1, 0, 0, 0)));
    CHECK_FALSE(is_projection(mat2(0, 1, 0, 0)));
    CHECK(is_projection(orth_projector({vec({1, 2, 2})}, 3)));
    CHECK_THROWS_AS(is_projection(DenseOp::Zero(2, 3)), InputError);
}

TEST_CASE("restricted_map values") {
    const DenseOp p1 = orth_projector({vec({1, 0})}, 2);
    const DenseOp p2 = orth_projector({vec({0, 1})}, 2);
    const DenseOp pd = orth_projector({vec({1, 1})}, 2);

    DenseOp same = restricted_map(p1, p1);
    REQUIRE(same.rows() == 1);
    CHECK(std::abs(same(0, 0)) == doctest::Approx(1.0));

    DenseOp orth = restricted_map(p1, p2);
    CHECK(std::abs(orth(0, 0)) < 1e-15);

    DenseOp half = restricted_map(pd, p1);
    CHECK(std::abs(half(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

    CHECK_THROWS_AS(restricted_map(mat2(0, 1, 0, 0), p1), InputError);
}

TEST_CASE("pair_index_finite examples") {
    const DenseOp p = orth_projector({vec({1, 2, 0}), vec({0, 0, 1})}, 3);
    const FinitePairIndex same = pair_index_finite(p, p);
    CHECK(same.index == 0);
    CHECK(same.dim_ker == 0);
    CHECK(same.dim_coker == 0);

    const FinitePairIndex onto_zero =
        pair_index_finite(DenseOp::Identity(2, 2), DenseOp::Zero(2, 2));
    CHECK(onto_zero.index == 2);
    CHECK(onto_zero.dim_ker == 2);
    CHECK(onto_zero.dim_coker == 0);

    const DenseOp e1 = orth_projector({vec({1, 0})}, 2);
    const DenseOp e2 = orth_projector({vec({0, 1})}, 2);
    const FinitePairIndex crossed = pair_index_finite(e1, e2);
    CHECK(crossed.index == 0);
    CHECK(crossed.dim_ker == 1);
    CHECK(crossed.dim_coker == 1);
}

TEST_CASE("eigenspace_at examples") {
    DenseOp d = DenseOp::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    const DenseOp at_one = eigenspace_at(d, 1.0);
    REQUIRE(at_one.cols() == 1);
    CHECK(std::abs(at_one(0, 0)) == doctest::Approx(1.0));

    CHECK(eigenspace_at(d, 0.5).cols() == 0);

    const DenseOp p0 = orth_projector({vec({1, 0})}, 2);
    const DenseOp diff = p0 - DenseOp::Zero(2, 2);
    const DenseOp v = eigenspace_at(diff, 1.0);
    REQUIRE(v.cols() == 1);
    CHECK(std::abs(v(0, 0)) == doctest::Approx(1.0));

    CHECK_THROWS_AS(eigenspace_at(mat2(0, 1, 0, 0), 1.0), InputError);
}

TEST_CASE("random-pair properties") {
    RandomStream rs(42);
    Tolerance tol;
    for (int n = 0; n < 60; ++n) {
        const Index dim = rs.uniform_int(2, 16);
        const DenseOp p = random_projection(rs, dim, rs.uniform_int(0, static_cast<int>(dim)));
        const DenseOp q = random_projection(rs, dim, rs.uniform_int(0, static_cast<int>(dim)));
        const FinitePairIndex fw = pair_index_finite(p, q, tol);
        CHECK(fw.index == rank_of(p, tol) - rank_of(q, tol));
        // The compression the other way is the adjoint: kernel and cokernel swap.
        const FinitePairIndex bw = pair_index_finite(q, p, tol);
        CHECK(fw.dim_ker == bw.dim_coker);
        CHECK(fw.dim_coker == bw.dim_ker);
        CHECK(is_projection(p, tol));
    }
}

TEST_CASE("eigenspace residual bound") {
    RandomStream rs(7);
    Tolerance tol;
    for (int n = 0; n < 20; ++n) {
        const Index dim = rs.uniform_int(2, 10);
        DenseOp h(dim, dim);
        for (Index r = 0; r < dim; ++r)
            for (Index c = 0; c < dim; ++c) h(r, c) = rs.cnormal();
        h = ((h + h.adjoint()) / 2.0).eval();
        const double lambda = rs.uniform(-2.0, 2.0);
        const DenseOp v = eigenspace_at(h, lambda, tol);
        for (Index j = 0; j < v.cols(); ++j)
            CHECK(op_norm(h * v.col(j) - lambda * v.col(j)) <= 10.0 * tol.eig_tol);
    }
}

TEST_CASE("tolerance validation") {
    Tolerance bad;
    bad.rank_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad.rank_tol = 0.5;
    CHECK_THROWS_AS(bad.validate(), InputError);
    bad.rank_tol = 1e-9;
    CHECK_NOTHROW(bad.validate());
}

TEST_SUITE_END();
