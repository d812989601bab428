#include "fredpair/block_space.hpp"
#include "fredpair/corpus.hpp"
#include "fredpair/projection_geometry.hpp"
#include "test_helpers.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>

using namespace fredpair;
using namespace fredpair::testing;

namespace {

BlockOp two_blocks(std::vector<DenseOp> prefix, std::vector<DenseOp> cycle) {
    return BlockOp(2, std::move(prefix), std::move(cycle));
}

const DenseOp kE1 = mat2(1, 0, 0, 0);
const DenseOp kE2 = mat2(0, 0, 0, 1);
const DenseOp kZero2 = DenseOp::Zero(2, 2);
const DenseOp kId2 = DenseOp::Identity(2, 2);

} // namespace

TEST_SUITE_BEGIN("block_space");

TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(BlockOp(2, {}, {}), InputError);
    CHECK_THROWS_AS(BlockOp(2, {DenseOp::Zero(3, 3)}, {kZero2}), InputError);
    CHECK_THROWS_AS(BlockOp(0, {}, {DenseOp::Zero(0, 0)}), InputError);
    CHECK_THROWS_AS(BlockProjection(two_blocks({}, {mat2(0, 1, 0, 0)})), InputError);
}

TEST_CASE("align shapes") {
    const BlockOp a = two_blocks({kE1, kE2}, {kId2});
    const BlockOp b = two_blocks({kE1, kE1, kE2}, {kE1, kE2});
    auto [x, y] = align(a, b);
    CHECK(x.prefix_len() == 3);
    CHECK(x.cycle_len() == 2);
    CHECK(y.prefix_len() == 3);
    CHECK(y.cycle_len() == 2);
    // Content is unchanged as an operator.
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(dist(x.block(i), a.block(i)) == 0.0);
        CHECK(dist(y.block(i), b.block(i)) == 0.0);
    }

    auto [s, t] = align(a, a);
    CHECK(s.prefix_len() == t.prefix_len());
    CHECK(s.cycle_len() == t.cycle_len());

    const BlockOp single = two_blocks({}, {kE1});
    const BlockOp pair = two_blocks({}, {kE2, kId2});
    auto [u, v] = align(single, pair);
    CHECK(u.cycle_len() == 2);
    CHECK(dist(u.cycle()[0], kE1) == 0.0);
    CHECK(dist(u.cycle()[1], kE1) == 0.0);
    CHECK(dist(v.cycle()[0], kE2) == 0.0);
    CHECK(dist(v.cycle()[1], kId2) == 0.0);

    CHECK_THROWS_AS(align(a, BlockOp::identity(3)), InputError);
}

TEST_CASE("blockwise algebra") {
    const BlockOp a = two_blocks({kE1}, {kE2});
    CHECK(bop_norm(a - a) == 0.0);

    const BlockProjection p(two_blocks({}, {proj_line2(1, 1)}));
    CHECK(bop_norm(p.op().adjoint() - p.op()) < 1e-15);
    CHECK(bop_norm(p.op() * p.op() - p.op()) < 1e-15);

    const BlockOp scaled = Complex(0.0, 2.0) * a;
    CHECK(bop_norm(scaled) == doctest::Approx(2.0));
}

TEST_CASE("norms") {
    CHECK(bop_norm(BlockOp::identity(2)) == doctest::Approx(1.0));
    CHECK(bop_norm(BlockOp::zero(2)) == 0.0);

    const BlockOp a = two_blocks({mat2(2, 0, 0, 0)}, {kE1});
    CHECK(bop_norm(a) == doctest::Approx(2.0));
    CHECK(calkin_norm(a) == doctest::Approx(1.0));

    const BlockOp b = two_blocks({mat2(2, 0, 0, 0)}, {kZero2});
    CHECK(calkin_norm(b) == 0.0);

    const double phi = std::numbers::pi / 2.0;
    DenseOp rot(2, 2);
    rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    const BlockOp c = two_blocks({}, {DenseOp(rot - kId2)});
    CHECK(calkin_norm(c) == doctest::Approx(op_norm(rot - kId2)));

    CHECK(calkin_norm(a) <= bop_norm(a));
}

TEST_CASE("is_finite_rank") {
    CHECK(is_finite_rank(two_blocks({mat2(5, 1, 1, 5)}, {kZero2})));
    CHECK_FALSE(is_finite_rank(BlockOp::identity(2)));
    Tolerance tol;
    tol.proj_tol = 1e-10;
    CHECK(is_finite_rank(two_blocks({}, {DenseOp(1e-15 * kId2)}), tol));
}

TEST_CASE("truncate") {
    CHECK(dist(truncate(BlockOp::identity(2), 3), DenseOp::Identity(6, 6)) == 0.0);

    const DenseOp b = proj_line2(1, 2);
    const BlockOp a = two_blocks({mat2(0.25, 0.25, 0.25, 0.75)}, {b});
    const DenseOp t = truncate(a, 3);
    CHECK(t.rows() == 6);
    CHECK(dist(t.block(2, 2, 2, 2), b) == 0.0);
    CHECK(dist(t.block(4, 4, 2, 2), b) == 0.0);

    const BlockProjection p(two_blocks({kE1}, {proj_line2(3, 4)}));
    CHECK(is_projection(truncate(p.op(), 4)));

    CHECK_THROWS_AS(truncate(a, 0), InputError);
}

TEST_CASE("pair_fredholm basics") {
    const BlockProjection p(two_blocks({kE1, kE2}, {proj_line2(1, 1)}));
    const PairDecision same = pair_fredholm(p, p);
    CHECK(same.status == PairStatus::fredholm);
    CHECK(same.index == 0);
    CHECK(same.calkin_gap == doctest::Approx(1.0));

    const BlockProjection a(two_blocks({kId2}, {kE1}));
    const BlockProjection b(two_blocks({kZero2}, {kE1}));
    const PairDecision d = pair_fredholm(a, b);
    CHECK(d.status == PairStatus::fredholm);
    // Ordered-pair convention: index(a, b) = rank(b) - rank(a) blockwise.
    CHECK(d.index == -2);
    CHECK(pair_index_oracle(a, b, 3) == -2);

    const BlockProjection ortho1(two_blocks({}, {kE1}));
    const BlockProjection ortho2(two_blocks({}, {kE2}));
    const PairDecision o = pair_fredholm(ortho1, ortho2);
    CHECK(o.status != PairStatus::fredholm);
    CHECK_FALSE(o.index.has_value());
}

TEST_CASE("pair_index_oracle") {
    const BlockProjection p(two_blocks({kE1}, {proj_line2(2, 1)}));
    CHECK(pair_index_oracle(p, p, 5) == 0);
    CHECK_THROWS_AS(pair_index_oracle(p, p, 2), InputError);

    const BlockProjection ortho1(two_blocks({}, {kE1}));
    const BlockProjection ortho2(two_blocks({}, {kE2}));
    CHECK_THROWS_AS(pair_index_oracle(ortho1, ortho2, 5), PreconditionError);
}

TEST_CASE("index_by_trace") {
    const BlockProjection p(two_blocks({kE1}, {kE2}));
    CHECK(index_by_trace(p, p) == 0);

    const BlockProjection a(two_blocks({kId2}, {kE1}));
    const BlockProjection b(two_blocks({kZero2}, {kE1}));
    CHECK(index_by_trace(a, b) == -2);
    CHECK(index_by_trace(a, b) == pair_fredholm(a, b).index);

    const BlockProjection c(two_blocks({kE1}, {kE1}));
    const BlockProjection d(two_blocks({kId2}, {kE1}));
    CHECK(index_by_trace(c, d) == 1);

    const BlockProjection e(two_blocks({}, {kE1}));
    const BlockProjection f(two_blocks({}, {kE2}));
    CHECK_THROWS_AS(index_by_trace(e, f), PreconditionError);
}

TEST_CASE("complement mirror and swap") {
    RandomStream rs(11);
    Tolerance tol;
    for (int n = 0; n < 25; ++n) {
        const auto [p, q] = random_fredholm_pair(rs, PairCorpusParams{}, tol);
        const PairDecision d = pair_fredholm(p, q, tol);
        REQUIRE(d.status == PairStatus::fredholm);
        const PairDecision dc = pair_fredholm(p.complement(), q.complement(), tol);
        CHECK(dc.status == PairStatus::fredholm);
        CHECK(*dc.index == -*d.index);
        const PairDecision ds = pair_fredholm(q, p, tol);
        CHECK(*ds.index == -*d.index);
        const int oracle = pair_index_oracle(p, q, p.op().prefix_len() + 2 * p.op().cycle_len()
                                                      + q.op().prefix_len(), tol);
        CHECK(oracle == *d.index);
    }
}

TEST_CASE("tail norms realize the Calkin norm") {
    const BlockOp a = two_blocks({mat2(3, 0, 0, 0), mat2(0, 2, 2, 0)}, {proj_line2(1, 1)});
    double prev = bop_norm(a) + 1.0;
    for (std::size_t k = 0; k <= 6; ++k) {
        const double tn = tail_norm(a, k);
        CHECK(tn <= prev);
        prev = tn;
    }
    CHECK(tail_norm(a, 2) == calkin_norm(a));
    CHECK(tail_norm(a, 5) == calkin_norm(a));
    CHECK(tail_norm(a, 0) == bop_norm(a));
}

TEST_CASE("canonicalized") {
    const DenseOp c = proj_line2(1, 3);
    const BlockOp padded = two_blocks({kE1, c, c}, {c});
    const BlockOp canon = canonicalized(padded);
    CHECK(canon.prefix_len() == 1);
    CHECK(canon.cycle_len() == 1);
    CHECK(approx_equal(canon, padded));

    const BlockOp doubled = two_blocks({}, {c, c});
    CHECK(canonicalized(doubled).cycle_len() == 1);

    const BlockOp rotated = two_blocks({kE1, c}, {kE2, c});
    const BlockOp rcanon = canonicalized(rotated);
    CHECK(rcanon.prefix_len() == 1);
    CHECK(approx_equal(rcanon, rotated));
}

TEST_CASE("serialization round-trips exactly") {
    RandomStream rs(5);
    for (int n = 0; n < 20; ++n) {
        const Index d = rs.uniform_int(1, 4);
        std::vector<DenseOp> pre, cyc;
        for (int i = 0, np = rs.uniform_int(0, 3); i < np; ++i) {
            DenseOp b(d, d);
            for (Index r = 0; r < d; ++r)
                for (Index c = 0; c < d; ++c) b(r, c) = rs.cnormal();
            pre.push_back(b);
        }
        for (int i = 0, nc = rs.uniform_int(1, 3); i < nc; ++i) {
            DenseOp b(d, d);
            for (Index r = 0; r < d; ++r)
                for (Index c = 0; c < d; ++c) b(r, c) = rs.cnormal();
            cyc.push_back(b);
        }
        const BlockOp a(d, pre, cyc);
        const BlockOp back = deserialize_block_op(serialize(a));
        REQUIRE(back.block_dim() == d);
        REQUIRE(back.prefix_len() == a.prefix_len());
        REQUIRE(back.cycle_len() == a.cycle_len());
        for (std::size_t i = 0; i < a.prefix_len(); ++i)
            CHECK((back.prefix()[i].array() == a.prefix()[i].array()).all()); // bitwise
        for (std::size_t i = 0; i < a.cycle_len(); ++i)
            CHECK((back.cycle()[i].array() == a.cycle()[i].array()).all());
        CHECK(serialize(back) == serialize(a));
    }
    CHECK_THROWS_AS(deserialize_block_op("{\"block_dim\": 2}"), InputError);
}

TEST_SUITE_END();
