#include "gridsample/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gridsample/errors.hpp"
#include "gridsample/io_util.hpp"

namespace gridsample {

CategoryDistribution::CategoryDistribution(std::vector<double> proportions)
    : proportions_(std::move(proportions)) {
    double sum = 0.0;
    for (const double p : proportions_) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            raise(Errc::field_out_of_range, "proportion: " + format_double(p));
        }
        sum += p;
        if (p > 0.0) {
            ++support_;
        }
    }
    if (support_ > 0 && std::abs(sum - 1.0) > 1e-12) {
        raise(Errc::field_out_of_range, "proportions sum to " + format_double(sum));
    }
}

CategoryDistribution CategoryDistribution::from_counts(
    const std::map<std::string, std::int64_t>& counts) {
    std::int64_t total = 0;
    for (const auto& [category, count] : counts) {
        if (count < 0) {
            raise(Errc::field_out_of_range,
                  "count for '" + category + "': " + std::to_string(count));
        }
        total += count;
    }
    std::vector<double> proportions;
    proportions.reserve(counts.size());
    for (const auto& [category, count] : counts) {
        proportions.push_back(total == 0 ? 0.0
                                         : static_cast<double>(count) / static_cast<double>(total));
    }
    return CategoryDistribution(std::move(proportions));
}

double hill_number(const CategoryDistribution& dist, int q) {
    if (q < 0 || q > 2) {
        raise(Errc::unsupported_order, "q = " + std::to_string(q));
    }
    if (dist.support() == 0) {
        return 0.0;
    }
    switch (q) {
    case 0:
        return static_cast<double>(dist.support());
    case 1: {
        double entropy = 0.0;
        for (const double p : dist.proportions()) {
            if (p > 0.0) {
                entropy -= p * std::log(p);
            }
        }
        return std::exp(entropy);
    }
    default: {
        double sum_sq = 0.0;
        for (const double p : dist.proportions()) {
            sum_sq += p * p;
        }
        return 1.0 / sum_sq;
    }
    }
}

DiversityProfile diversity_profile(const std::map<std::string, std::int64_t>& counts) {
    const CategoryDistribution dist = CategoryDistribution::from_counts(counts);
    return DiversityProfile{hill_number(dist, 0), hill_number(dist, 1), hill_number(dist, 2)};
}

std::vector<double> mixed_use_levels(std::span<const DiversityProfile> profiles) {
    if (profiles.empty()) {
        raise(Errc::empty_input, "no profiles to normalize");
    }
    struct Range {
        double min = std::numeric_limits<double>::infinity();
        double max = -std::numeric_limits<double>::infinity();
    };
    Range range[3];
    for (const DiversityProfile& p : profiles) {
        const double d[3] = {p.d0, p.d1, p.d2};
        for (int q = 0; q < 3; ++q) {
            range[q].min = std::min(range[q].min, d[q]);
            range[q].max = std::max(range[q].max, d[q]);
        }
    }
    std::vector<double> muls(profiles.size(), 0.0);
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const double d[3] = {profiles[i].d0, profiles[i].d1, profiles[i].d2};
        double sum = 0.0;
        for (int q = 0; q < 3; ++q) {
            const double span = range[q].max - range[q].min;
            // Constant order across the population contributes 0, so a
            // uniform landscape scores 0 rather than 1.
            sum += span > 0.0 ? (d[q] - range[q].min) / span : 0.0;
        }
        muls[i] = sum / 3.0;
    }
    return muls;
}

namespace {

void assign_muls(std::vector<SamplingUnit>& units, const std::vector<DiversityProfile>& profiles) {
    const std::vector<double> muls = mixed_use_levels(profiles);
    for (std::size_t i = 0; i < units.size(); ++i) {
        units[i].profile = profiles[i];
        units[i].mul = muls[i];
    }
}

}  // namespace

void enrich_units_serial(std::vector<SamplingUnit>& units) {
    if (units.empty()) {
        raise(Errc::empty_input, "no units to enrich");
    }
    std::vector<DiversityProfile> profiles(units.size());
    for (std::size_t i = 0; i < units.size(); ++i) {
        profiles[i] = diversity_profile(units[i].poi_counts);
    }
    assign_muls(units, profiles);
}

void enrich_units(std::vector<SamplingUnit>& units) {
    if (units.empty()) {
        raise(Errc::empty_input, "no units to enrich");
    }
    std::vector<DiversityProfile> profiles(units.size());
    const auto n = static_cast<std::int64_t>(units.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n >= 256)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        profiles[static_cast<std::size_t>(i)] =
            diversity_profile(units[static_cast<std::size_t>(i)].poi_counts);
    }
    assign_muls(units, profiles);
}

}  // namespace gridsample
