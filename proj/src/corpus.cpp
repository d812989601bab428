#include "fredpair/corpus.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>

namespace fredpair {

std::uint64_t RandomStream::next_u64() {
    // splitmix64; tiny, portable, and good enough for test corpora.
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int RandomStream::uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
}

double RandomStream::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex RandomStream::cnormal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
}

DenseOp random_unitary(RandomStream& rs, Index n) {
    DenseOp g(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c) g(r, c) = rs.cnormal();
    Eigen::HouseholderQR<DenseOp> qr(g);
    return qr.householderQ() * DenseOp::Identity(n, n);
}

DenseOp random_projection(RandomStream& rs, Index n, Index rank) {
    if (rank < 0 || rank > n) throw InputError("random_projection: rank out of range");
    if (rank == 0) return DenseOp::Zero(n, n);
    const DenseOp u = random_unitary(rs, n).leftCols(rank);
    DenseOp p = u * u.adjoint();
    return (p + p.adjoint()) / 2.0;
}

DenseOp rotate_range(RandomStream& rs, const DenseOp& p, const std::vector<double>& sines,
                     const Tolerance& tol) {
    const Index n = p.rows();
    const DenseOp u_ran = range_basis(p, tol);
    const DenseOp u_ker = range_basis(DenseOp::Identity(n, n) - p, tol);
    if (static_cast<Index>(sines.size()) > std::min(u_ran.cols(), u_ker.cols()))
        throw InputError("rotate_range: more rotation planes than available directions");
    // Random orthonormal frames inside range and kernel pick the planes.
    const DenseOp fr = u_ran * random_unitary(rs, u_ran.cols());
    const DenseOp fk = u_ker * random_unitary(rs, u_ker.cols());
    DenseOp q = p;
    for (std::size_t j = 0; j < sines.size(); ++j) {
        const double s = sines[j];
        if (!(s >= 0.0 && s <= 1.0)) throw InputError("rotate_range: sine outside [0, 1]");
        const double c = std::sqrt(1.0 - s * s);
        const DenseVec u = fr.col(static_cast<Index>(j));
        const DenseVec v = fk.col(static_cast<Index>(j));
        const DenseVec w = c * u + s * v;
        q += w * w.adjoint() - u * u.adjoint();
    }
    return (q + q.adjoint()) / 2.0;
}

std::pair<BlockProjection, BlockProjection> random_fredholm_pair(RandomStream& rs,
                                                                 const PairCorpusParams& params,
                                                                 const Tolerance& tol) {
    const Index d = params.block_dim;
    const int n_prefix = rs.uniform_int(0, params.max_prefix);
    const int n_cycle = rs.uniform_int(1, params.max_cycle);

    std::vector<DenseOp> pa, pb, ca, cb;
    for (int i = 0; i < n_prefix; ++i) {
        const Index rank = rs.uniform_int(0, static_cast<int>(d));
        DenseOp a = random_projection(rs, d, rank);
        DenseOp b = a;
        const Index room = std::min(rank, d - rank);
        if (room > 0 && rs.uniform() < 0.75) {
            std::vector<double> sines(static_cast<std::size_t>(rs.uniform_int(1, static_cast<int>(room))));
            for (double& s : sines) s = rs.uniform(0.0, params.max_cycle_sine);
            b = rotate_range(rs, a, sines, tol);
        }
        // Rank flips carry the index: adjoin a kernel direction to the range
        // or drop a range direction.
        for (int f = 0; f < params.prefix_rank_flips; ++f) {
            if (rs.uniform() < 0.5) continue;
            const Index rb = rank_of(b, tol);
            if (rs.uniform() < 0.5 && rb < d) {
                const DenseVec e = range_basis(DenseOp::Identity(d, d) - b, tol).col(0);
                b += e * e.adjoint();
            } else if (rb > 0) {
                const DenseVec e = range_basis(b, tol).col(0);
                b -= e * e.adjoint();
            }
            b = ((b + b.adjoint()) / 2.0).eval();
        }
        pa.push_back(std::move(a));
        pb.push_back(std::move(b));
    }
    for (int i = 0; i < n_cycle; ++i) {
        const Index rank = rs.uniform_int(0, static_cast<int>(d));
        DenseOp a = random_projection(rs, d, rank);
        DenseOp b = a;
        const Index room = std::min(rank, d - rank);
        if (room > 0) {
            std::vector<double> sines(static_cast<std::size_t>(rs.uniform_int(1, static_cast<int>(room))));
            for (double& s : sines) s = rs.uniform(0.0, params.max_cycle_sine);
            b = rotate_range(rs, a, sines, tol);
        }
        ca.push_back(std::move(a));
        cb.push_back(std::move(b));
    }
    return {BlockProjection(BlockOp(d, std::move(pa), std::move(ca)), tol),
            BlockProjection(BlockOp(d, std::move(pb), std::move(cb)), tol)};
}

std::pair<BlockProjection, BlockProjection> random_orthogonal_tail_pair(RandomStream& rs,
                                                                        const Tolerance& tol) {
    const double theta = rs.uniform(0.0, std::numbers::pi);
    const DenseOp a = proj_line2(std::cos(theta), std::sin(theta));
    const DenseOp b = proj_line2(-std::sin(theta), std::cos(theta));
    const int n_prefix = rs.uniform_int(0, 2);
    std::vector<DenseOp> pa, pb;
    for (int i = 0; i < n_prefix; ++i) {
        pa.push_back(random_projection(rs, 2, rs.uniform_int(0, 2)));
        pb.push_back(random_projection(rs, 2, rs.uniform_int(0, 2)));
    }
    return {BlockProjection(BlockOp(2, std::move(pa), {a}), tol),
            BlockProjection(BlockOp(2, std::move(pb), {b}), tol)};
}

std::pair<DenseOp, DenseOp> random_dense_pair(RandomStream& rs, Index dim, double max_dist,
                                              const Tolerance& tol) {
    if (dim < 2) throw InputError("random_dense_pair: dimension must be >= 2");
    const Index rank = rs.uniform_int(1, static_cast<int>(dim - 1));
    const DenseOp p0 = random_projection(rs, dim, rank);
    const Index room = std::min(rank, dim - rank);
    std::vector<double> sines(static_cast<std::size_t>(rs.uniform_int(1, static_cast<int>(room))));
    bool first = true;
    for (double& s : sines) {
        s = first ? max_dist : rs.uniform(0.0, max_dist);
        first = false;
    }
    return {p0, rotate_range(rs, p0, sines, tol)};
}

GraphBC random_graph_bc(RandomStream& rs, Index block_dim, double max_norm,
                        const Tolerance& tol) {
    if (block_dim < 2) throw InputError("random_graph_bc: block_dim must be >= 2");
    const int n_prefix = rs.uniform_int(0, 2);
    const int n_cycle = rs.uniform_int(1, 2);
    std::vector<DenseOp> sp, sc, gp, gc;
    auto make_block = [&](std::vector<DenseOp>& ss, std::vector<DenseOp>& gs) {
        const Index rank = rs.uniform_int(1, static_cast<int>(block_dim - 1));
        DenseOp s = random_projection(rs, block_dim, rank);
        DenseOp z(block_dim, block_dim);
        for (Index r = 0; r < block_dim; ++r)
            for (Index c = 0; c < block_dim; ++c) z(r, c) = rs.cnormal();
        DenseOp g = (DenseOp::Identity(block_dim, block_dim) - s) * z * s;
        const double n = op_norm(g);
        if (n > 0.0) g *= rs.uniform(0.0, max_norm) / n;
        ss.push_back(std::move(s));
        gs.push_back(std::move(g));
    };
    for (int i = 0; i < n_prefix; ++i) make_block(sp, gp);
    for (int i = 0; i < n_cycle; ++i) make_block(sc, gc);
    return GraphBC(BlockProjection(BlockOp(block_dim, std::move(sp), std::move(sc)), tol),
                   BlockOp(block_dim, std::move(gp), std::move(gc)), tol);
}

} // namespace fredpair
