#pragma once

#include <cstdint>

#include "d2d/assoc.hpp"

namespace d2d {

// Upper bound on the number of candidate assignments the oracle enumerates.
inline constexpr std::uint64_t kOracleSearchLimit = 10'000'000;

// Brute-force optimum for JD (|B|^|L| link placements) or DD/HD
// (|B|^(2|L|) device placements) under the scheme's objective. Among equal
// optima the first in lexicographic enumeration order wins. Throws
// OracleGuardError when the search space exceeds kOracleSearchLimit and
// std::invalid_argument for JC, which is a rule rather than an optimum.
Assignment oracle_exhaustive(const AssociationProblem& problem, Scheme scheme);

}  // namespace d2d
