#include "fredpair/homotopy.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace fredpair {

DenseOp involution(const DenseOp& p, const Tolerance& tol) {
    if (!is_projection(p, tol))
        throw InputError("involution: input is not a projection");
    return DenseOp::Identity(p.rows(), p.cols()) - 2.0 * p;
}

DenseOp involution_inverse(const DenseOp& f) {
    return (DenseOp::Identity(f.rows(), f.cols()) - f) / 2.0;
}

namespace {

constexpr double kPathSlack = 1e-8;

DenseOp w_path_unchecked(const DenseOp& p0, const DenseOp& p1, double t,
                         const Tolerance& tol) {
    const DenseOp f0 = DenseOp::Identity(p0.rows(), p0.cols()) - 2.0 * p0;
    const DenseOp f1 = DenseOp::Identity(p1.rows(), p1.cols()) - 2.0 * p1;
    const double c = std::cos(std::numbers::pi * t / 2.0);
    const double s = std::sin(std::numbers::pi * t / 2.0);
    const DenseOp x = DenseOp::Identity(p0.rows(), p0.cols()) +
                      (s * c) * (f0 * f1 + f1 * f0);
    Eigen::SelfAdjointEigenSolver<DenseOp> es((x + x.adjoint()) / 2.0);
    DenseOp inv_sqrt = DenseOp::Zero(x.rows(), x.cols());
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam <= 0.0) {
            std::ostringstream msg;
            msg << "w_path: X(t) has non-positive eigenvalue " << lam << " at t = " << t;
            throw NumericalError(msg.str());
        }
        inv_sqrt += (1.0 / std::sqrt(lam)) * es.eigenvectors().col(i) *
                    es.eigenvectors().col(i).adjoint();
    }
    const DenseOp y = inv_sqrt * (c * f0 + s * f1);
    DenseOp w = involution_inverse(y);
    const double herm = op_norm(w - w.adjoint());
    w = (w + w.adjoint()) / 2.0;
    const double idem = op_norm(w * w - w);
    if (herm > kPathSlack || idem > kPathSlack) {
        std::ostringstream msg;
        msg << "w_path: result fails the projection axioms at t = " << t
            << " (hermiticity " << herm << ", idempotency " << idem << ")";
        throw NumericalError(msg.str());
    }
    (void)tol;
    return w;
}

} // namespace

DenseOp w_path(const DenseOp& p0, const DenseOp& p1, double t, const Tolerance& tol) {
    tol.validate();
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("w_path: t must lie in [0, 1]");
    if (!is_projection(p0, tol) || !is_projection(p1, tol))
        throw InputError("w_path: inputs are not projections");
    const double dist = op_norm(p1 - p0);
    if (!(dist < 1.0))
        throw PreconditionError("w_path: ||P1 - P0|| must be < 1");
    return w_path_unchecked(p0, p1, t, tol);
}

BlockProjection w_path(const BlockProjection& p0, const BlockProjection& p1, double t,
                       const Tolerance& tol) {
    tol.validate();
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("w_path: t must lie in [0, 1]");
    auto [a, b] = align(p0.op(), p1.op());
    if (!(bop_norm(a - b) < 1.0))
        throw PreconditionError("w_path: ||P1 - P0|| must be < 1");
    std::vector<DenseOp> pre, cyc;
    for (std::size_t i = 0; i < a.prefix_len(); ++i)
        pre.push_back(w_path_unchecked(a.prefix()[i], b.prefix()[i], t, tol));
    for (std::size_t i = 0; i < a.cycle_len(); ++i)
        cyc.push_back(w_path_unchecked(a.cycle()[i], b.cycle()[i], t, tol));
    return BlockProjection(BlockOp(a.block_dim(), std::move(pre), std::move(cyc)), tol);
}

ExtremeSplit split_extreme(const DenseOp& p0, const DenseOp& p1, const Tolerance& tol) {
    if (!is_projection(p0, tol) || !is_projection(p1, tol))
        throw InputError("split_extreme: inputs are not projections");
    if (p0.rows() != p1.rows())
        throw InputError("split_extreme: projections act on different spaces");
    const DenseOp d = ((p0 - p1) + (p0 - p1).adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<DenseOp> es(d);
    std::vector<Index> i0, i1, ip;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (std::abs(lam - 1.0) <= tol.eig_tol)
            i0.push_back(i);
        else if (std::abs(lam + 1.0) <= tol.eig_tol)
            i1.push_back(i);
        else
            ip.push_back(i);
    }
    auto collect = [&](const std::vector<Index>& idx) {
        DenseOp m(p0.rows(), static_cast<Index>(idx.size()));
        for (Index j = 0; j < m.cols(); ++j)
            m.col(j) = es.eigenvectors().col(idx[static_cast<std::size_t>(j)]);
        return m;
    };
    return {collect(i0), collect(i1), collect(ip)};
}

BlockExtremeSplit split_extreme(const BlockProjection& p0, const BlockProjection& p1,
                                const Tolerance& tol) {
    auto [a, b] = align(p0.op(), p1.op());
    BlockExtremeSplit out;
    out.tail_start = a.prefix_len();
    for (std::size_t i = 0; i < a.prefix_len(); ++i) {
        ExtremeSplit sp = split_extreme(a.prefix()[i], b.prefix()[i], tol);
        out.dim_v0 += sp.v0.cols();
        out.dim_v1 += sp.v1.cols();
        out.prefix.push_back(std::move(sp));
    }
    for (std::size_t i = 0; i < a.cycle_len(); ++i) {
        const ExtremeSplit sp = split_extreme(a.cycle()[i], b.cycle()[i], tol);
        if (sp.v0.cols() > 0 || sp.v1.cols() > 0)
            throw PreconditionError(
                "split_extreme: extreme eigenvalue inside a cycle block; pair is not Fredholm");
    }
    return out;
}

namespace {

DenseOp p_path_block(const DenseOp& p0, const DenseOp& p1, double t, const Tolerance& tol,
                     const ExtremeSplit& sp) {
    DenseOp out = sp.v1 * sp.v1.adjoint(); // 1 on V1, 0 on V0
    if (sp.vp.cols() > 0) {
        const DenseOp b0 = sp.vp.adjoint() * p0 * sp.vp;
        const DenseOp b1 = sp.vp.adjoint() * p1 * sp.vp;
        const DenseOp w = w_path_unchecked((b0 + b0.adjoint()) / 2.0,
                                           (b1 + b1.adjoint()) / 2.0, t, tol);
        out += sp.vp * w * sp.vp.adjoint();
    }
    out = (out + out.adjoint()) / 2.0;
    return out;
}

} // namespace

PathSample p_path(const DenseOp& p0, const DenseOp& p1, double t, const Tolerance& tol) {
    tol.validate();
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("p_path: t must lie in [0, 1]");
    const ExtremeSplit sp = split_extreme(p0, p1, tol);
    PathSample sample;
    sample.t = t;
    sample.projection = p_path_block(p0, p1, t, tol, sp);
    sample.norm_to_start = op_norm(sample.projection - p0);
    return sample;
}

BlockPathSample p_path(const BlockProjection& p0, const BlockProjection& p1, double t,
                       const Tolerance& tol) {
    tol.validate();
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("p_path: t must lie in [0, 1]");
    const PairDecision dec = pair_fredholm(p0, p1, tol);
    if (dec.status != PairStatus::fredholm)
        throw PreconditionError("p_path: (P0, P1) is not a Fredholm pair");
    auto [a, b] = align(p0.op(), p1.op());
    const BlockExtremeSplit split = split_extreme(p0, p1, tol);
    std::vector<DenseOp> pre, cyc;
    for (std::size_t i = 0; i < a.prefix_len(); ++i)
        pre.push_back(p_path_block(a.prefix()[i], b.prefix()[i], t, tol, split.prefix[i]));
    for (std::size_t i = 0; i < a.cycle_len(); ++i) {
        const ExtremeSplit sp = split_extreme(a.cycle()[i], b.cycle()[i], tol);
        cyc.push_back(p_path_block(a.cycle()[i], b.cycle()[i], t, tol, sp));
    }
    BlockPathSample sample{t,
                           BlockProjection(BlockOp(a.block_dim(), std::move(pre), std::move(cyc)), tol),
                           0.0, 0.0};
    const BlockOp diff = sample.projection.op() - a;
    sample.norm_to_start = bop_norm(diff);
    sample.calkin_to_start = calkin_norm(diff);
    return sample;
}

} // namespace fredpair
