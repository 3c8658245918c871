#include "gridsample/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <unordered_set>
#include <utility>

#include "gridsample/errors.hpp"
#include "gridsample/io_util.hpp"
#include "gridsample/spatial.hpp"

namespace gridsample {

void AnnealConfig::validate() const {
    if (!(t0 > 0.0) || !std::isfinite(t0)) {
        raise(Errc::field_out_of_range, "t0: " + format_double(t0));
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        raise(Errc::field_out_of_range, "alpha: " + format_double(alpha));
    }
    if (!(t_tol > 0.0) || !std::isfinite(t_tol)) {
        raise(Errc::field_out_of_range, "t_tol: " + format_double(t_tol));
    }
    if (max_iters < 0) {
        raise(Errc::field_out_of_range, "max_iters: " + std::to_string(max_iters));
    }
    if (n < 2) {
        raise(Errc::too_few_samples, "n must be >= 2, got " + std::to_string(n));
    }
}

double acceptance_probability(double delta_cost, double temperature) {
    if (!(temperature > 0.0)) {
        raise(Errc::non_positive_temperature, format_double(temperature));
    }
    if (delta_cost < 0.0) {
        return 1.0;
    }
    return std::exp(-delta_cost / temperature);
}

double cool(double temperature, double alpha) {
    return alpha * temperature;
}

Solution init_solution(const CandidateSet& candidates, int n, Rng& rng) {
    if (n < 2) {
        raise(Errc::too_few_samples, "n must be >= 2, got " + std::to_string(n));
    }
    if (candidates.size() < static_cast<std::size_t>(n)) {
        raise(Errc::insufficient_candidates, std::to_string(candidates.size()) +
                                                 " candidates for n = " + std::to_string(n));
    }
    // Partial Fisher-Yates: first n slots become the uniform draw.
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    Solution solution;
    solution.member_ids.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto pick =
            static_cast<std::size_t>(i) +
            static_cast<std::size_t>(rng.uniform_index(order.size() - static_cast<std::size_t>(i)));
        std::swap(order[static_cast<std::size_t>(i)], order[pick]);
        solution.member_ids.push_back(candidates.units()[order[static_cast<std::size_t>(i)]].id);
    }
    std::sort(solution.member_ids.begin(), solution.member_ids.end());
    solution.costs = compute_costs(candidates, solution.member_ids);
    return solution;
}

namespace {

std::vector<std::int64_t> difference_ids(const Solution& solution, const CandidateSet& candidates) {
    const std::unordered_set<std::int64_t> members(solution.member_ids.begin(),
                                                   solution.member_ids.end());
    std::vector<std::int64_t> difference;
    difference.reserve(candidates.size() - members.size());
    for (const SamplingUnit& u : candidates.units()) {
        if (members.count(u.id) == 0) {
            difference.push_back(u.id);
        }
    }
    return difference;
}

Solution replace_member(const Solution& solution, std::int64_t victim, std::int64_t replacement,
                        const CandidateSet& candidates) {
    Solution proposal;
    proposal.member_ids.reserve(solution.member_ids.size());
    for (const std::int64_t id : solution.member_ids) {
        proposal.member_ids.push_back(id == victim ? replacement : id);
    }
    std::sort(proposal.member_ids.begin(), proposal.member_ids.end());
    proposal.costs = compute_costs(candidates, proposal.member_ids);
    return proposal;
}

std::int64_t pick_replacement(const Solution& solution, const CandidateSet& candidates, Rng& rng) {
    const std::vector<std::int64_t> difference = difference_ids(solution, candidates);
    if (difference.empty()) {
        raise(Errc::exhausted_candidates, "solution already holds every candidate");
    }
    return difference[rng.uniform_index(difference.size())];
}

}  // namespace

Solution perturb_spatial(const Solution& solution, const CandidateSet& candidates, Rng& rng) {
    std::vector<PlanarPoint> points;
    points.reserve(solution.member_ids.size());
    for (const std::int64_t id : solution.member_ids) {
        points.push_back(candidates.unit_by_id(id).centroid);
    }
    const std::vector<double> distances = nearest_neighbor_distances(points);
    // member_ids is sorted, so keeping the first strict minimum breaks
    // ties toward the smallest unit id.
    std::size_t victim = 0;
    for (std::size_t i = 1; i < distances.size(); ++i) {
        if (distances[i] < distances[victim]) {
            victim = i;
        }
    }
    const std::int64_t replacement = pick_replacement(solution, candidates, rng);
    return replace_member(solution, solution.member_ids[victim], replacement, candidates);
}

Solution perturb_diversity(const Solution& solution, const CandidateSet& candidates, Rng& rng) {
    std::size_t victim = 0;
    double victim_mul = *candidates.unit_by_id(solution.member_ids[0]).mul;
    for (std::size_t i = 1; i < solution.member_ids.size(); ++i) {
        const double mul = *candidates.unit_by_id(solution.member_ids[i]).mul;
        if (mul < victim_mul) {
            victim = i;
            victim_mul = mul;
        }
    }
    const std::int64_t replacement = pick_replacement(solution, candidates, rng);
    return replace_member(solution, solution.member_ids[victim], replacement, candidates);
}

RunResult run(const CandidateSet& candidates, const AnnealConfig& config, MoveSet moves,
              const IterationObserver& observer) {
    config.validate();
    if (candidates.size() <= static_cast<std::size_t>(config.n)) {
        raise(Errc::insufficient_candidates,
              "need more candidates than n = " + std::to_string(config.n) + ", got " +
                  std::to_string(candidates.size()));
    }

    Rng rng(config.seed);
    Solution current = init_solution(candidates, config.n, rng);
    RunResult result;
    result.best = current;
    result.trace.reserve(static_cast<std::size_t>(config.max_iters));

    double temperature = config.t0;
    int iter = 0;
    while (temperature > config.t_tol && iter < config.max_iters) {
        ++iter;
        temperature = cool(temperature, config.alpha);

        TraceRow row;
        row.iter = iter;
        row.temperature = temperature;

        {
            const Solution proposal = perturb_spatial(current, candidates, rng);
            const double delta = proposal.costs.ann - current.costs.ann;
            row.p_spatial = acceptance_probability(delta, temperature);
            row.accepted_spatial = row.p_spatial > rng.uniform01();
            if (row.accepted_spatial) {
                current = proposal;
            }
        }
        if (moves == MoveSet::dual) {
            const Solution proposal = perturb_diversity(current, candidates, rng);
            const double delta = proposal.costs.amul - current.costs.amul;
            row.p_diversity = acceptance_probability(delta, temperature);
            row.accepted_diversity = row.p_diversity > rng.uniform01();
            if (row.accepted_diversity) {
                current = proposal;
            }
        }

        if (pareto_improves(current.costs, result.best.costs)) {
            result.best = current;
        }
        row.cost_ann_current = current.costs.ann;
        row.cost_amul_current = current.costs.amul;
        row.cost_ann_best = result.best.costs.ann;
        row.cost_amul_best = result.best.costs.amul;
        result.trace.push_back(row);
        if (observer) {
            observer(current);
        }
    }

    result.last = std::move(current);
    return result;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace) {
    out << "iter,temperature,cost_ann_current,cost_amul_current,cost_ann_best,cost_amul_best,"
           "accepted_spatial,accepted_diversity,p_spatial,p_diversity\n";
    for (const TraceRow& row : trace) {
        out << row.iter << ',' << format_double(row.temperature) << ','
            << format_double(row.cost_ann_current) << ',' << format_double(row.cost_amul_current)
            << ',' << format_double(row.cost_ann_best) << ',' << format_double(row.cost_amul_best)
            << ',' << (row.accepted_spatial ? 1 : 0) << ',' << (row.accepted_diversity ? 1 : 0)
            << ',' << format_double(row.p_spatial) << ',' << format_double(row.p_diversity)
            << "\n";
    }
}

}  // namespace gridsample
