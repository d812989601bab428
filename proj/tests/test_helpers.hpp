#pragma once

#include "fredpair/core_linalg.hpp"

#include <initializer_list>

namespace fredpair::testing {

/// Row-major 2x2 constructor for terse test matrices.
inline DenseOp mat2(Complex a, Complex b, Complex c, Complex d) {
    DenseOp m(2, 2);
    m << a, b, c, d;
    return m;
}

inline DenseVec vec(std::initializer_list<Complex> entries) {
    DenseVec v(static_cast<Index>(entries.size()));
    Index i = 0;
    for (const Complex& e : entries) v(i++) = e;
    return v;
}

inline double dist(const DenseOp& a, const DenseOp& b) { return op_norm(a - b); }

} // namespace fredpair::testing
