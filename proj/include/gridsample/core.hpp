#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace gridsample {

// Planar coordinates in meters (x east, y north). Geographic input is
// projected at ingestion; nothing downstream of ingest sees degrees.
struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
};

bool is_finite(const PlanarPoint& p);

// Hill numbers of order 0, 1, 2 for one unit's POI mix.
struct DiversityProfile {
    double d0 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

// One grid cell treated as an atomic sampling candidate.
struct SamplingUnit {
    std::int64_t id = -1;
    PlanarPoint centroid;
    double cell_side = 0.0;  // meters, > 0
    double builtup = 0.0;    // fraction of built land cover, [0, 1]
    std::map<std::string, std::int64_t> poi_counts;
    std::optional<DiversityProfile> profile;  // set by the enrich step
    std::optional<double> mul;                // mixed-use level, [0, 1]
};

// Validated collection of units. total_area is candidate count times
// cell_side squared; partial edge cells keep their nominal area.
class CandidateSet {
public:
    CandidateSet() = default;

    const std::vector<SamplingUnit>& units() const { return units_; }
    std::size_t size() const { return units_.size(); }
    bool empty() const { return units_.empty(); }
    double total_area() const { return total_area_; }

    const SamplingUnit& unit_by_id(std::int64_t id) const;
    bool contains(std::int64_t id) const { return index_.count(id) != 0; }

private:
    friend CandidateSet validate_candidates(std::vector<SamplingUnit> units);

    std::vector<SamplingUnit> units_;
    std::unordered_map<std::int64_t, std::size_t> index_;
    double total_area_ = 0.0;
};

// Checks ids, ranges and finiteness, and computes total_area. Throws
// Errc::duplicate_id / Errc::field_out_of_range / Errc::empty_input.
CandidateSet validate_candidates(std::vector<SamplingUnit> units);

struct CostPair {
    double ann = 0.0;   // inverse of the average nearest neighbor index
    double amul = 0.0;  // inverse of the average mixed-use level
};

// New pair replaces the incumbent only when it is no worse in both
// objectives and strictly better in at least one.
bool pareto_improves(const CostPair& candidate, const CostPair& incumbent);

// A selected subset of candidate units with cached objective values.
// member_ids is kept sorted; the cached costs always match a fresh
// recomputation over the members.
struct Solution {
    std::vector<std::int64_t> member_ids;
    CostPair costs;
};

}  // namespace gridsample
