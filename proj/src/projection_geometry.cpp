#include "fredpair/projection_geometry.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace fredpair {

DenseOp proj_line2(double a, double b) {
    const double h = std::hypot(a, b);
    if (h == 0.0 || !std::isfinite(h))
        throw InputError("proj_line2: direction must be nonzero and finite");
    const double c = a / h, s = b / h;
    DenseOp p(2, 2);
    p << c * c, c * s, c * s, s * s;
    return p;
}

double diff_norm_2d(double a, double b) {
    const double h = std::hypot(a, b);
    if (h == 0.0 || !std::isfinite(h))
        throw InputError("diff_norm_2d: direction must be nonzero and finite");
    return std::abs(b) / h;
}

std::vector<double> principal_angle_sines(const DenseOp& p, const DenseOp& q,
                                          const Tolerance& tol) {
    const DenseOp up = range_basis(p, tol);
    const DenseOp uq = range_basis(q, tol);
    if (up.rows() != uq.rows())
        throw InputError("principal_angle_sines: projections act on different spaces");
    const Index k = std::min(up.cols(), uq.cols());
    if (k == 0) return {};
    Eigen::JacobiSVD<DenseOp> svd(uq.adjoint() * up);
    std::vector<double> sines;
    sines.reserve(static_cast<std::size_t>(k));
    for (Index i = 0; i < svd.singularValues().size(); ++i) {
        const double c = std::clamp(svd.singularValues()(i), 0.0, 1.0);
        sines.push_back(std::sqrt(std::max(0.0, 1.0 - c * c)));
    }
    std::sort(sines.begin(), sines.end());
    return sines;
}

GraphBC::GraphBC(BlockProjection base, BlockOp map, const Tolerance& tol)
    : base_(std::move(base)), map_(std::move(map)) {
    auto [s, g] = align(base_.op(), map_);
    auto check = [&](const DenseOp& sb, const DenseOp& gb) {
        const DenseOp supported = (DenseOp::Identity(sb.rows(), sb.cols()) - sb) * gb * sb;
        if (op_norm(gb - supported) > tol.proj_tol)
            throw InputError("GraphBC: map block does not send Ran(S) into Ker(S)");
    };
    for (std::size_t i = 0; i < s.prefix_len(); ++i) check(s.prefix()[i], g.prefix()[i]);
    for (std::size_t i = 0; i < s.cycle_len(); ++i) check(s.cycle()[i], g.cycle()[i]);
    base_ = BlockProjection(std::move(s), tol);
    map_ = std::move(g);
}

GraphBC GraphBC::scaled(double s) const {
    return GraphBC(base_, Complex(s, 0.0) * map_);
}

namespace {

DenseOp graph_block(const DenseOp& s, const DenseOp& g, const Tolerance& tol) {
    const DenseOp u = range_basis(s, tol); // d x r, columns span Y
    if (u.cols() == 0) return DenseOp::Zero(s.rows(), s.cols());
    const DenseOp gu = g * u;
    const DenseOp a = DenseOp::Identity(u.cols(), u.cols()) + gu.adjoint() * gu; // 1 + G*G on Y
    Eigen::LLT<DenseOp> llt(a);
    if (llt.info() != Eigen::Success)
        throw NumericalError("graph_projection: 1 + G*G failed to factor");
    const DenseOp t = u + gu; // (1 + G) restricted to Y
    DenseOp p = t * llt.solve(t.adjoint());
    p = (p + p.adjoint()) / 2.0;
    if (!is_projection(p, tol))
        throw NumericalError("graph_projection: assembled block fails the projection axioms");
    return p;
}

} // namespace

BlockProjection graph_projection(const GraphBC& bc, const Tolerance& tol) {
    const BlockOp& s = bc.base().op();
    const BlockOp& g = bc.map();
    std::vector<DenseOp> pre, cyc;
    pre.reserve(s.prefix_len());
    cyc.reserve(s.cycle_len());
    for (std::size_t i = 0; i < s.prefix_len(); ++i)
        pre.push_back(graph_block(s.prefix()[i], g.prefix()[i], tol));
    for (std::size_t i = 0; i < s.cycle_len(); ++i)
        cyc.push_back(graph_block(s.cycle()[i], g.cycle()[i], tol));
    return BlockProjection(BlockOp(s.block_dim(), std::move(pre), std::move(cyc)), tol);
}

double graphest_bound(const GraphBC& bc) {
    const double g = calkin_norm(bc.map());
    return g / std::sqrt(1.0 + g * g);
}

} // namespace fredpair
