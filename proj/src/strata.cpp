#include "gridsample/strata.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gridsample/errors.hpp"
#include "gridsample/io_util.hpp"

namespace gridsample {

double quartile_threshold(std::span<const double> builtups) {
    if (builtups.empty()) {
        raise(Errc::empty_input, "no builtup values");
    }
    std::vector<double> sorted(builtups.begin(), builtups.end());
    std::sort(sorted.begin(), sorted.end());
    const double position = 0.25 * static_cast<double>(sorted.size() - 1);
    const auto lower = static_cast<std::size_t>(position);
    const double fraction = position - static_cast<double>(lower);
    if (fraction == 0.0 || lower + 1 == sorted.size()) {
        return sorted[lower];
    }
    return sorted[lower] + fraction * (sorted[lower + 1] - sorted[lower]);
}

Stratification stratify(const CandidateSet& candidates, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        raise(Errc::field_out_of_range, "threshold: " + format_double(threshold));
    }
    std::vector<SamplingUnit> dense;
    std::vector<SamplingUnit> sparse;
    for (const SamplingUnit& u : candidates.units()) {
        (u.builtup >= threshold ? dense : sparse).push_back(u);
    }
    Stratification strata;
    strata.threshold = threshold;
    // An empty stratum is legal; callers report it rather than erroring.
    if (!dense.empty()) {
        strata.dense = validate_candidates(std::move(dense));
    }
    if (!sparse.empty()) {
        strata.sparse = validate_candidates(std::move(sparse));
    }
    return strata;
}

Allocation allocate(int n_total, double dense_fraction) {
    if (n_total < 0) {
        raise(Errc::field_out_of_range, "n_total: " + std::to_string(n_total));
    }
    if (!(dense_fraction >= 0.0 && dense_fraction <= 1.0)) {
        raise(Errc::field_out_of_range, "dense_fraction: " + format_double(dense_fraction));
    }
    Allocation allocation;
    allocation.n_dense = static_cast<int>(std::round(n_total * dense_fraction));
    allocation.n_sparse = n_total - allocation.n_dense;
    return allocation;
}

void check_allocation(const Allocation& allocation, const Stratification& strata) {
    if (static_cast<std::size_t>(allocation.n_dense) > strata.dense.size()) {
        raise(Errc::insufficient_candidates,
              "dense stratum has " + std::to_string(strata.dense.size()) + " units, allocation asks " +
                  std::to_string(allocation.n_dense));
    }
    if (static_cast<std::size_t>(allocation.n_sparse) > strata.sparse.size()) {
        raise(Errc::insufficient_candidates,
              "sparse stratum has " + std::to_string(strata.sparse.size()) +
                  " units, allocation asks " + std::to_string(allocation.n_sparse));
    }
}

}  // namespace gridsample
