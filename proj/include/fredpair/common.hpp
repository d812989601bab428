#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace fredpair {

using Complex = std::complex<double>;
using DenseOp = Eigen::MatrixXcd;
using DenseVec = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument: dimension mismatch, non-finite entries, failed input invariant.
class InputError : public Error {
public:
    using Error::Error;
};

/// A documented operation precondition does not hold for these inputs.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Internal consistency check failed or the computation is numerically unstable.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Bad experiment configuration (CLI / config file).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical slack knobs shared by every module.
///
/// rank_tol is relative to the largest singular value: absolute cutoffs break
/// under rescaling. proj_tol doubles as the width of the undecidable band
/// around Calkin norm 1 in Fredholm decisions. eig_tol clusters eigenvalues.
struct Tolerance {
    double rank_tol = 1e-9;
    double proj_tol = 1e-8;
    double eig_tol = 1e-8;

    void validate() const {
        auto ok = [](double t) { return t > 0.0 && t < 1e-3; };
        if (!ok(rank_tol) || !ok(proj_tol) || !ok(eig_tol))
            throw InputError("Tolerance: all members must lie strictly in (0, 1e-3)");
    }
};

} // namespace fredpair
