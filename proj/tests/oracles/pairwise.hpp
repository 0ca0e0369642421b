#pragma once

// Brute-force intersection oracle: compares every pair of RD columns directly,
// without looking at fiducial sections.

#include "fiducial/surface.hpp"

#include <cstddef>

namespace fiducial::testing {

struct PairwiseVerdict {
    bool non_intersecting = true;
    std::size_t crossing_pairs = 0;    ///< difference takes both strict signs over x
    std::size_t coincident_pairs = 0;  ///< difference vanishes at every x
    std::size_t first_j = 0, first_k = 0;
};

/// O(n^2 m). Differences within rel_tol * max(range_j, range_k) count as zero;
/// columns whose range is at most flat_tol are ignored for coincidence.
PairwiseVerdict pairwise_oracle(const FiducialSurface& surface, double rel_tol = 1e-9, double flat_tol = 1e-7);

}  // namespace fiducial::testing
