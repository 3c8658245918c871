#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gridsample/core.hpp"

namespace gridsample {

// Normalized category proportions for one unit. Either all-zero (no
// POIs) or summing to 1 within 1e-12.
class CategoryDistribution {
public:
    explicit CategoryDistribution(std::vector<double> proportions);

    static CategoryDistribution from_counts(const std::map<std::string, std::int64_t>& counts);

    const std::vector<double>& proportions() const { return proportions_; }
    int support() const { return support_; }  // number of strictly positive entries

private:
    std::vector<double> proportions_;
    int support_ = 0;
};

// Hill number of order q in {0, 1, 2}. q=0 counts categories, q=1 is
// exp of the Shannon entropy (the analytic limit of the general form,
// which is singular at q=1), q=2 the inverse Simpson index. An empty
// distribution yields 0 for every order.
double hill_number(const CategoryDistribution& dist, int q);

// (d0, d1, d2) from raw counts; all-zero counts give (0, 0, 0).
DiversityProfile diversity_profile(const std::map<std::string, std::int64_t>& counts);

// Per order, min-max normalizes qD across all given profiles, then
// averages the three normalized values. When an order is constant across
// the population its normalized value is 0 for every unit, so uniform
// landscapes score 0 rather than 1.
std::vector<double> mixed_use_levels(std::span<const DiversityProfile> profiles);

// Computes each unit's profile from its poi_counts and assigns MULs
// normalized over the whole unit list. The normalization population is
// the entire study area, so enrich before stratifying.
void enrich_units(std::vector<SamplingUnit>& units);
void enrich_units_serial(std::vector<SamplingUnit>& units);

}  // namespace gridsample
