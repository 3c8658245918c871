#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "gridsample/core.hpp"
#include "gridsample/rng.hpp"

namespace gridsample {

// Control parameters of the dual-objective annealer. One run is a
// single chain; parallelism happens across runs, never inside one.
struct AnnealConfig {
    double t0 = 1.0;       // initial temperature
    double alpha = 0.999;  // geometric decay per iteration
    double t_tol = 1e-8;   // loop stops once temperature falls to this
    int max_iters = 5000;  // E; with the defaults this bound terminates first
    std::uint64_t seed = 0;
    int n = 0;  // desired sample count

    // Throws Errc::field_out_of_range / Errc::too_few_samples. t0 <=
    // t_tol is allowed and simply yields a zero-iteration run.
    void validate() const;
};

// One line of the optimization trace, written every iteration.
struct TraceRow {
    int iter = 0;
    double temperature = 0.0;
    double cost_ann_current = 0.0;
    double cost_amul_current = 0.0;
    double cost_ann_best = 0.0;
    double cost_amul_best = 0.0;
    bool accepted_spatial = false;
    bool accepted_diversity = false;
    double p_spatial = 0.0;
    double p_diversity = 0.0;
};

// 1 for improving moves, exp(-delta/T) otherwise. Throws
// Errc::non_positive_temperature.
double acceptance_probability(double delta_cost, double temperature);

// Geometric cooling step.
double cool(double temperature, double alpha);

// Uniform draw of n distinct members; costs computed from the set.
Solution init_solution(const CandidateSet& candidates, int n, Rng& rng);

// Replaces the member with the smallest nearest-neighbor distance
// within the solution (ties to the smallest unit id) by a uniformly
// random unit from candidates \ solution.
Solution perturb_spatial(const Solution& solution, const CandidateSet& candidates, Rng& rng);

// Same replacement scheme targeting the member with the lowest
// mixed-use level.
Solution perturb_diversity(const Solution& solution, const CandidateSet& candidates, Rng& rng);

enum class MoveSet {
    dual,          // spatial then diversity move each iteration
    spatial_only,  // diversity move disabled (spread-only baseline)
};

struct RunResult {
    Solution best;  // Pareto best-so-far (no worse in both costs, strictly better in one)
    Solution last;  // last accepted solution at termination
    std::vector<TraceRow> trace;
};

// Inspection hook for the current solution after each iteration.
using IterationObserver = std::function<void(const Solution&)>;

// One annealing chain. Each iteration proposes the spatial move, judges
// it by its Cost_ANN delta alone, then proposes the diversity move on
// the outcome and judges it by its Cost_AMUL delta, then cools. The
// trace row i has temperature t0*alpha^i. Identical inputs give a
// bit-identical trace.
RunResult run(const CandidateSet& candidates, const AnnealConfig& config,
              MoveSet moves = MoveSet::dual, const IterationObserver& observer = {});

// trace CSV:
// iter,temperature,cost_ann_current,cost_amul_current,cost_ann_best,
// cost_amul_best,accepted_spatial,accepted_diversity,p_spatial,p_diversity
void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace);

}  // namespace gridsample
