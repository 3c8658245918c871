#pragma once

#include <span>

#include "gridsample/core.hpp"

namespace gridsample {

// Built-up-based split of the candidate set. The boundary is inclusive
// to dense: builtup >= threshold.
struct Stratification {
    double threshold = 0.0;
    CandidateSet dense;
    CandidateSet sparse;
};

// Lower quartile by linear interpolation between order statistics at
// rank 0.25*(n-1) (the common "type 7" convention). The 0.16 used for
// Shanghai in the source workflow is a data-derived value of exactly
// this statistic, not a constant of the method.
double quartile_threshold(std::span<const double> builtups);

Stratification stratify(const CandidateSet& candidates, double threshold);

struct Allocation {
    int n_dense = 0;
    int n_sparse = 0;

    int total() const { return n_dense + n_sparse; }
};

// n_dense = round(n_total * dense_fraction), half away from zero; the
// remainder goes to sparse. The 80/20 split is dense_fraction = 0.8.
Allocation allocate(int n_total, double dense_fraction);

// Throws Errc::insufficient_candidates when either stratum holds fewer
// units than its allocation.
void check_allocation(const Allocation& allocation, const Stratification& strata);

}  // namespace gridsample
