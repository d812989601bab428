#pragma once

#include "fredpair/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fredpair {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

inline constexpr std::uint64_t kDefaultSeed = 20260810;

/// Runs the full verification suite (criteria 1-9 plus the rank-invariant
/// sanity block as criterion 0) and reports one result per criterion.
/// Exceptions raised inside a criterion are caught and reported as failures.
std::vector<CriterionResult> run_acceptance(const Tolerance& tol = {},
                                            std::uint64_t seed = kDefaultSeed);

} // namespace fredpair
