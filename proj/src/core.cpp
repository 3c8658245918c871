#include "gridsample/core.hpp"

#include <cmath>
#include <string>

#include "gridsample/errors.hpp"

namespace gridsample {

bool is_finite(const PlanarPoint& p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

const SamplingUnit& CandidateSet::unit_by_id(std::int64_t id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        raise(Errc::bad_argument, "unit id " + std::to_string(id) + " not in candidate set");
    }
    return units_[it->second];
}

CandidateSet validate_candidates(std::vector<SamplingUnit> units) {
    if (units.empty()) {
        raise(Errc::empty_input, "candidate list is empty");
    }
    CandidateSet set;
    set.index_.reserve(units.size());
    double total_area = 0.0;
    for (std::size_t i = 0; i < units.size(); ++i) {
        const SamplingUnit& u = units[i];
        if (u.id < 0) {
            raise(Errc::field_out_of_range, "id: " + std::to_string(u.id));
        }
        if (!is_finite(u.centroid)) {
            raise(Errc::field_out_of_range, "centroid of unit " + std::to_string(u.id));
        }
        if (!(u.cell_side > 0.0) || !std::isfinite(u.cell_side)) {
            raise(Errc::field_out_of_range, "cell_side: " + std::to_string(u.cell_side));
        }
        if (!(u.builtup >= 0.0 && u.builtup <= 1.0)) {
            raise(Errc::field_out_of_range, "builtup: " + std::to_string(u.builtup));
        }
        if (u.mul && !(*u.mul >= 0.0 && *u.mul <= 1.0)) {
            raise(Errc::field_out_of_range, "mul: " + std::to_string(*u.mul));
        }
        for (const auto& [category, count] : u.poi_counts) {
            if (count < 0) {
                raise(Errc::field_out_of_range,
                      "poi count for '" + category + "': " + std::to_string(count));
            }
        }
        if (!set.index_.emplace(u.id, i).second) {
            raise(Errc::duplicate_id, std::to_string(u.id));
        }
        total_area += u.cell_side * u.cell_side;
    }
    set.units_ = std::move(units);
    set.total_area_ = total_area;
    return set;
}

bool pareto_improves(const CostPair& candidate, const CostPair& incumbent) {
    const bool no_worse = candidate.ann <= incumbent.ann && candidate.amul <= incumbent.amul;
    const bool better = candidate.ann < incumbent.ann || candidate.amul < incumbent.amul;
    return no_worse && better;
}

}  // namespace gridsample
