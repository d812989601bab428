#include "fredpair/core_linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <sstream>

namespace fredpair {

namespace {

void require_finite(const DenseOp& m, const char* who) {
    if (!m.allFinite())
        throw InputError(std::string(who) + ": matrix has non-finite entries");
}

Eigen::VectorXd singular_values(const DenseOp& m) {
    if (m.rows() == 0 || m.cols() == 0) return Eigen::VectorXd();
    Eigen::JacobiSVD<DenseOp> svd(m);
    return svd.singularValues();
}

} // namespace

double op_norm(const DenseOp& m) {
    require_finite(m, "op_norm");
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    const Eigen::VectorXd sv = singular_values(m);
    return sv.size() > 0 ? sv(0) : 0.0;
}

Index rank_of(const DenseOp& m, const Tolerance& tol) {
    tol.validate();
    require_finite(m, "rank_of");
    const Eigen::VectorXd sv = singular_values(m);
    if (sv.size() == 0 || sv(0) <= 0.0) return 0;
    const double cutoff = tol.rank_tol * sv(0);
    Index r = 0;
    while (r < sv.size() && sv(r) > cutoff) ++r;
    return r;
}

DenseOp orth_projector(const DenseOp& vectors, const Tolerance& tol) {
    tol.validate();
    require_finite(vectors, "orth_projector");
    const Index n = vectors.rows();
    if (vectors.cols() == 0) return DenseOp::Zero(n, n);
    Eigen::JacobiSVD<DenseOp> svd(vectors, Eigen::ComputeThinU);
    const Eigen::VectorXd sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return DenseOp::Zero(n, n);
    const double cutoff = tol.rank_tol * sv(0);
    Index r = 0;
    while (r < sv.size() && sv(r) > cutoff) ++r;
    const DenseOp u = svd.matrixU().leftCols(r);
    DenseOp p = u * u.adjoint();
    p = (p + p.adjoint()) / 2.0;
    return p;
}

DenseOp orth_projector(const std::vector<DenseVec>& vectors, Index ambient_dim,
                       const Tolerance& tol) {
    if (ambient_dim < 0) throw InputError("orth_projector: negative ambient dimension");
    DenseOp cols(ambient_dim, static_cast<Index>(vectors.size()));
    for (Index j = 0; j < cols.cols(); ++j) {
        if (vectors[static_cast<std::size_t>(j)].size() != ambient_dim)
            throw InputError("orth_projector: vector dimension mismatch");
        cols.col(j) = vectors[static_cast<std::size_t>(j)];
    }
    return orth_projector(cols, tol);
}

ProjectionDefect projection_defect(const DenseOp& m) {
    if (m.rows() != m.cols())
        throw InputError("projection_defect: matrix must be square");
    require_finite(m, "projection_defect");
    ProjectionDefect d;
    d.idempotency = op_norm(m * m - m);
    d.hermiticity = op_norm(m - m.adjoint());
    return d;
}

bool is_projection(const DenseOp& m, const Tolerance& tol) {
    tol.validate();
    const ProjectionDefect d = projection_defect(m);
    return d.idempotency <= tol.proj_tol && d.hermiticity <= tol.proj_tol;
}

DenseOp range_basis(const DenseOp& p, const Tolerance& tol) {
    if (!is_projection(p, tol))
        throw InputError("range_basis: input is not a projection");
    if (p.rows() == 0) return DenseOp(0, 0);
    Eigen::JacobiSVD<DenseOp> svd(p, Eigen::ComputeThinU);
    const Eigen::VectorXd sv = svd.singularValues();
    // Singular values of a projection sit near 0 or 1; split at 1/2.
    Index r = 0;
    while (r < sv.size() && sv(r) > 0.5) ++r;
    return svd.matrixU().leftCols(r);
}

Index projection_rank(const DenseOp& p) {
    const Eigen::VectorXd sv = singular_values(p);
    Index r = 0;
    while (r < sv.size() && sv(r) > 0.5) ++r;
    return r;
}

DenseOp restricted_map(const DenseOp& p, const DenseOp& q, const Tolerance& tol) {
    if (p.rows() != q.rows() || p.cols() != q.cols())
        throw InputError("restricted_map: projections act on different spaces");
    const DenseOp up = range_basis(p, tol);
    const DenseOp uq = range_basis(q, tol);
    return uq.adjoint() * up;
}

FinitePairIndex pair_index_finite(const DenseOp& p, const DenseOp& q,
                                  const Tolerance& tol) {
    const DenseOp t = restricted_map(p, q, tol);
    const Index rp = t.cols();
    const Index rq = t.rows();
    const Index rt = rank_of(t, tol);
    FinitePairIndex out;
    out.dim_ker = rp - rt;
    out.dim_coker = rq - rt;
    out.index = static_cast<int>(out.dim_ker - out.dim_coker);
    if (out.index != static_cast<int>(rp - rq)) {
        std::ostringstream msg;
        msg << "pair_index_finite: index " << out.index
            << " disagrees with rank difference " << (rp - rq)
            << " (rank P = " << rp << ", rank Q = " << rq
            << ", rank of compression = " << rt << ")";
        throw NumericalError(msg.str());
    }
    return out;
}

DenseOp eigenspace_at(const DenseOp& m, double lambda, const Tolerance& tol) {
    tol.validate();
    if (m.rows() != m.cols())
        throw InputError("eigenspace_at: matrix must be square");
    require_finite(m, "eigenspace_at");
    if (op_norm(m - m.adjoint()) > tol.proj_tol)
        throw InputError("eigenspace_at: matrix is not Hermitian within proj_tol");
    if (m.rows() == 0) return DenseOp(0, 0);
    const DenseOp h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<DenseOp> es(h);
    std::vector<Index> keep;
    for (Index i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i) - lambda) <= tol.eig_tol) keep.push_back(i);
    DenseOp basis(m.rows(), static_cast<Index>(keep.size()));
    for (Index j = 0; j < basis.cols(); ++j)
        basis.col(j) = es.eigenvectors().col(keep[static_cast<std::size_t>(j)]);
    return basis;
}

} // namespace fredpair
