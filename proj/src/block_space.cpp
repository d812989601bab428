#include "fredpair/block_space.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fredpair {

BlockOp::BlockOp(Index block_dim, std::vector<DenseOp> prefix, std::vector<DenseOp> cycle)
    : block_dim_(block_dim), prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
    if (block_dim_ < 1) throw InputError("BlockOp: block_dim must be >= 1");
    if (cycle_.empty()) throw InputError("BlockOp: cycle must be nonempty");
    auto check = [&](const DenseOp& b) {
        if (b.rows() != block_dim_ || b.cols() != block_dim_)
            throw InputError("BlockOp: block shape differs from block_dim");
        if (!b.allFinite()) throw InputError("BlockOp: block has non-finite entries");
    };
    for (const auto& b : prefix_) check(b);
    for (const auto& b : cycle_) check(b);
}

BlockOp BlockOp::identity(Index d) {
    return BlockOp(d, {}, {DenseOp::Identity(d, d)});
}

BlockOp BlockOp::zero(Index d) {
    return BlockOp(d, {}, {DenseOp::Zero(d, d)});
}

BlockOp BlockOp::repeating(DenseOp cycle_block) {
    const Index d = cycle_block.rows();
    return BlockOp(d, {}, {std::move(cycle_block)});
}

const DenseOp& BlockOp::block(std::size_t i) const {
    if (i < prefix_.size()) return prefix_[i];
    return cycle_[(i - prefix_.size()) % cycle_.size()];
}

BlockOp BlockOp::adjoint() const {
    std::vector<DenseOp> p, c;
    p.reserve(prefix_.size());
    c.reserve(cycle_.size());
    for (const auto& b : prefix_) p.push_back(b.adjoint());
    for (const auto& b : cycle_) c.push_back(b.adjoint());
    return BlockOp(block_dim_, std::move(p), std::move(c));
}

BlockOp BlockOp::scaled(Complex s) const {
    std::vector<DenseOp> p, c;
    p.reserve(prefix_.size());
    c.reserve(cycle_.size());
    for (const auto& b : prefix_) p.push_back(s * b);
    for (const auto& b : cycle_) c.push_back(s * b);
    return BlockOp(block_dim_, std::move(p), std::move(c));
}

std::pair<BlockOp, BlockOp> align(const BlockOp& a, const BlockOp& b) {
    if (a.block_dim() != b.block_dim())
        throw InputError("align: block_dim mismatch");
    const std::size_t n_prefix = std::max(a.prefix_len(), b.prefix_len());
    const std::size_t n_cycle = std::lcm(a.cycle_len(), b.cycle_len());
    auto reshape = [&](const BlockOp& x) {
        std::vector<DenseOp> p, c;
        p.reserve(n_prefix);
        c.reserve(n_cycle);
        for (std::size_t i = 0; i < n_prefix; ++i) p.push_back(x.block(i));
        for (std::size_t i = 0; i < n_cycle; ++i) c.push_back(x.block(n_prefix + i));
        return BlockOp(x.block_dim(), std::move(p), std::move(c));
    };
    return {reshape(a), reshape(b)};
}

namespace {

template <typename F>
BlockOp zip_blocks(const BlockOp& a, const BlockOp& b, F&& f) {
    auto [x, y] = align(a, b);
    std::vector<DenseOp> p, c;
    p.reserve(x.prefix_len());
    c.reserve(x.cycle_len());
    for (std::size_t i = 0; i < x.prefix_len(); ++i) p.push_back(f(x.prefix()[i], y.prefix()[i]));
    for (std::size_t i = 0; i < x.cycle_len(); ++i) c.push_back(f(x.cycle()[i], y.cycle()[i]));
    return BlockOp(x.block_dim(), std::move(p), std::move(c));
}

} // namespace

BlockOp operator+(const BlockOp& a, const BlockOp& b) {
    return zip_blocks(a, b, [](const DenseOp& x, const DenseOp& y) { return DenseOp(x + y); });
}

BlockOp operator-(const BlockOp& a, const BlockOp& b) {
    return zip_blocks(a, b, [](const DenseOp& x, const DenseOp& y) { return DenseOp(x - y); });
}

BlockOp operator*(const BlockOp& a, const BlockOp& b) {
    return zip_blocks(a, b, [](const DenseOp& x, const DenseOp& y) { return DenseOp(x * y); });
}

BlockOp operator*(Complex s, const BlockOp& a) { return a.scaled(s); }

double bop_norm(const BlockOp& a) {
    double n = 0.0;
    for (const auto& b : a.prefix()) n = std::max(n, op_norm(b));
    for (const auto& b : a.cycle()) n = std::max(n, op_norm(b));
    return n;
}

double calkin_norm(const BlockOp& a) {
    double n = 0.0;
    for (const auto& b : a.cycle()) n = std::max(n, op_norm(b));
    return n;
}

double tail_norm(const BlockOp& a, std::size_t n_start) {
    double n = calkin_norm(a);
    for (std::size_t i = n_start; i < a.prefix_len(); ++i)
        n = std::max(n, op_norm(a.prefix()[i]));
    return n;
}

bool is_finite_rank(const BlockOp& a, const Tolerance& tol) {
    tol.validate();
    for (const auto& b : a.cycle())
        if (op_norm(b) > tol.proj_tol) return false;
    return true;
}

DenseOp truncate(const BlockOp& a, std::size_t n_blocks) {
    if (n_blocks < 1) throw InputError("truncate: n_blocks must be >= 1");
    const Index d = a.block_dim();
    const Index n = d * static_cast<Index>(n_blocks);
    DenseOp out = DenseOp::Zero(n, n);
    for (std::size_t i = 0; i < n_blocks; ++i)
        out.block(static_cast<Index>(i) * d, static_cast<Index>(i) * d, d, d) = a.block(i);
    return out;
}

BlockOp canonicalized(const BlockOp& a, double eps) {
    std::vector<DenseOp> prefix = a.prefix();
    std::vector<DenseOp> cycle = a.cycle();
    auto same = [&](const DenseOp& x, const DenseOp& y) { return op_norm(x - y) <= eps; };

    // Primitive period of the cycle.
    for (std::size_t p = 1; p <= cycle.size() / 2; ++p) {
        if (cycle.size() % p != 0) continue;
        bool periodic = true;
        for (std::size_t i = p; i < cycle.size() && periodic; ++i)
            periodic = same(cycle[i], cycle[i % p]);
        if (periodic) {
            cycle.resize(p);
            break;
        }
    }
    // Absorb a trailing prefix block equal to the last cycle block by rotating
    // the cycle one step to the right; the block sequence is unchanged.
    while (!prefix.empty() && same(prefix.back(), cycle.back())) {
        std::rotate(cycle.rbegin(), cycle.rbegin() + 1, cycle.rend());
        prefix.pop_back();
    }
    return BlockOp(a.block_dim(), std::move(prefix), std::move(cycle));
}

bool approx_equal(const BlockOp& a, const BlockOp& b, double eps) {
    if (a.block_dim() != b.block_dim()) return false;
    auto [x, y] = align(a, b);
    for (std::size_t i = 0; i < x.prefix_len(); ++i)
        if (op_norm(x.prefix()[i] - y.prefix()[i]) > eps) return false;
    for (std::size_t i = 0; i < x.cycle_len(); ++i)
        if (op_norm(x.cycle()[i] - y.cycle()[i]) > eps) return false;
    return true;
}

BlockProjection::BlockProjection(BlockOp op, const Tolerance& tol) : op_(std::move(op)) {
    for (const auto& b : op_.prefix())
        if (!is_projection(b, tol))
            throw InputError("BlockProjection: prefix block fails the projection axioms");
    for (const auto& b : op_.cycle())
        if (!is_projection(b, tol))
            throw InputError("BlockProjection: cycle block fails the projection axioms");
}

BlockProjection BlockProjection::complement() const {
    return BlockProjection(BlockOp::identity(op_.block_dim()) - op_);
}

const char* to_string(PairStatus s) {
    switch (s) {
        case PairStatus::fredholm: return "fredholm";
        case PairStatus::not_fredholm: return "not_fredholm";
        case PairStatus::marginal: return "marginal";
    }
    return "?";
}

PairDecision pair_fredholm(const BlockProjection& p, const BlockProjection& p_prime,
                           const Tolerance& tol) {
    tol.validate();
    auto [a, b] = align(p.op(), p_prime.op());
    const double c = calkin_norm(a - b);
    PairDecision out;
    out.calkin_gap = 1.0 - c;
    if (c >= 1.0 + tol.proj_tol) {
        out.status = PairStatus::not_fredholm;
        return out;
    }
    if (c > 1.0 - tol.proj_tol) {
        out.status = PairStatus::marginal;
        return out;
    }
    out.status = PairStatus::fredholm;
    // Projections at Calkin distance < 1 are blockwise rank-equal along the
    // cycle, so only the prefix can carry index.
    for (std::size_t i = 0; i < a.cycle_len(); ++i) {
        if (projection_rank(a.cycle()[i]) != projection_rank(b.cycle()[i])) {
            std::ostringstream msg;
            msg << "pair_fredholm: cycle block " << i
                << " has unequal ranks although the Calkin distance is " << c;
            throw NumericalError(msg.str());
        }
    }
    long idx = 0;
    for (std::size_t i = 0; i < a.prefix_len(); ++i)
        idx += projection_rank(b.prefix()[i]) - projection_rank(a.prefix()[i]);
    out.index = static_cast<int>(idx);
    return out;
}

int pair_index_oracle(const BlockProjection& p, const BlockProjection& p_prime,
                      std::size_t n_blocks, const Tolerance& tol) {
    const PairDecision d = pair_fredholm(p, p_prime, tol);
    if (d.status != PairStatus::fredholm)
        throw PreconditionError("pair_index_oracle: pair is not Fredholm");
    auto [a, b] = align(p.op(), p_prime.op());
    if (n_blocks < a.prefix_len() + 2 * a.cycle_len())
        throw InputError("pair_index_oracle: n_blocks below prefix + 2*cycle");
    auto at = [&](std::size_t n) {
        // Pair index of (p, p') == index of the compression Ran(p') -> Ran(p).
        return pair_index_finite(truncate(b, n), truncate(a, n), tol).index;
    };
    const int i0 = at(n_blocks);
    const int i1 = at(n_blocks + a.cycle_len());
    if (i0 != i1) {
        std::ostringstream msg;
        msg << "pair_index_oracle: truncation index did not stabilize (" << i0
            << " at " << n_blocks << " blocks vs " << i1 << " one cycle later)";
        throw NumericalError(msg.str());
    }
    return i0;
}

int index_by_trace(const BlockProjection& p, const BlockProjection& p_prime,
                   const Tolerance& tol) {
    auto [a, b] = align(p.op(), p_prime.op());
    if (!is_finite_rank(a - b, tol))
        throw PreconditionError("index_by_trace: difference is not finite rank");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.prefix_len(); ++i)
        s += (b.prefix()[i] - a.prefix()[i]).trace();
    const double rounded = std::round(s.real());
    if (std::abs(s.real() - rounded) > tol.eig_tol || std::abs(s.imag()) > tol.eig_tol) {
        std::ostringstream msg;
        msg << "index_by_trace: blockwise trace " << s.real() << (s.imag() < 0 ? "" : "+")
            << s.imag() << "i is not within eig_tol of an integer";
        throw NumericalError(msg.str());
    }
    return static_cast<int>(rounded);
}

BlockProjection conjugate_by(const BlockProjection& p, const BlockOp& u, const Tolerance& tol) {
    auto [x, q] = align(p.op(), u);
    auto conj = [&](const DenseOp& b, const DenseOp& w) -> DenseOp {
        if (op_norm(w.adjoint() * w - DenseOp::Identity(w.rows(), w.cols())) > tol.proj_tol)
            throw InputError("conjugate_by: block is not unitary");
        return w.adjoint() * b * w;
    };
    std::vector<DenseOp> pre, cyc;
    for (std::size_t i = 0; i < x.prefix_len(); ++i) pre.push_back(conj(x.prefix()[i], q.prefix()[i]));
    for (std::size_t i = 0; i < x.cycle_len(); ++i) cyc.push_back(conj(x.cycle()[i], q.cycle()[i]));
    return BlockProjection(BlockOp(x.block_dim(), std::move(pre), std::move(cyc)), tol);
}

namespace {

nlohmann::json block_to_json(const DenseOp& b) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index r = 0; r < b.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Index c = 0; c < b.cols(); ++c)
            row.push_back({b(r, c).real(), b(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

DenseOp block_from_json(const nlohmann::json& rows, Index d) {
    if (!rows.is_array() || static_cast<Index>(rows.size()) != d)
        throw InputError("BlockOp json: block row count differs from block_dim");
    DenseOp b(d, d);
    for (Index r = 0; r < d; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != d)
            throw InputError("BlockOp json: block column count differs from block_dim");
        for (Index c = 0; c < d; ++c) {
            const auto& e = row[static_cast<std::size_t>(c)];
            if (!e.is_array() || e.size() != 2)
                throw InputError("BlockOp json: entry is not an [re, im] pair");
            b(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return b;
}

} // namespace

nlohmann::json to_json(const BlockOp& a) {
    nlohmann::json doc;
    doc["block_dim"] = a.block_dim();
    doc["prefix"] = nlohmann::json::array();
    doc["cycle"] = nlohmann::json::array();
    for (const auto& b : a.prefix()) doc["prefix"].push_back(block_to_json(b));
    for (const auto& b : a.cycle()) doc["cycle"].push_back(block_to_json(b));
    return doc;
}

BlockOp block_op_from_json(const nlohmann::json& doc) {
    if (!doc.contains("block_dim") || !doc.contains("prefix") || !doc.contains("cycle"))
        throw InputError("BlockOp json: missing block_dim/prefix/cycle");
    const Index d = doc["block_dim"].get<Index>();
    std::vector<DenseOp> pre, cyc;
    for (const auto& b : doc["prefix"]) pre.push_back(block_from_json(b, d));
    for (const auto& b : doc["cycle"]) cyc.push_back(block_from_json(b, d));
    return BlockOp(d, std::move(pre), std::move(cyc));
}

std::string serialize(const BlockOp& a) { return to_json(a).dump(); }

BlockOp deserialize_block_op(const std::string& text) {
    return block_op_from_json(nlohmann::json::parse(text));
}

} // namespace fredpair
