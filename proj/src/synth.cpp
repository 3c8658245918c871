#include "gridsample/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gridsample/diversity.hpp"
#include "gridsample/errors.hpp"
#include "gridsample/io_util.hpp"
#include "gridsample/spatial.hpp"

namespace gridsample {

void ScenarioSpec::validate() const {
    if (nx < 1 || ny < 1) {
        raise(Errc::field_out_of_range, "grid dimensions must be positive");
    }
    if (!(cell_side > 0.0)) {
        raise(Errc::field_out_of_range, "cell_side must be > 0");
    }
    if (n_clusters < 1) {
        raise(Errc::field_out_of_range, "n_clusters must be >= 1");
    }
    if (pois_per_cluster < 0) {
        raise(Errc::field_out_of_range, "pois_per_cluster must be >= 0");
    }
    if (n_categories < 1) {
        raise(Errc::field_out_of_range, "n_categories must be >= 1");
    }
    if (!(cluster_spread > 0.0)) {
        raise(Errc::field_out_of_range, "cluster_spread must be > 0");
    }
    if (!(builtup_peak > 0.0 && builtup_peak <= 1.0)) {
        raise(Errc::field_out_of_range, "builtup_peak must be in (0, 1]");
    }
}

Scenario generate_scenario(const ScenarioSpec& spec) {
    spec.validate();
    const double width = spec.nx * spec.cell_side;
    const double height = spec.ny * spec.cell_side;
    std::vector<SamplingUnit> grid =
        generate_grid(BoundingBox{0.0, 0.0, width, height}, spec.cell_side);

    Rng rng(spec.seed);

    std::vector<PlanarPoint> centers(static_cast<std::size_t>(spec.n_clusters));
    for (PlanarPoint& c : centers) {
        c.x = rng.uniform01() * width;
        c.y = rng.uniform01() * height;
    }

    // Per-cluster category mix, uniform on the simplex (normalized
    // exponentials).
    std::vector<std::vector<double>> mixes(centers.size());
    for (auto& mix : mixes) {
        mix.resize(static_cast<std::size_t>(spec.n_categories));
        double sum = 0.0;
        for (double& w : mix) {
            w = -std::log(1.0 - rng.uniform01());
            sum += w;
        }
        for (double& w : mix) {
            w /= sum;
        }
    }

    std::vector<Poi> pois;
    pois.reserve(centers.size() * static_cast<std::size_t>(spec.pois_per_cluster));
    std::int64_t next_id = 0;
    for (std::size_t k = 0; k < centers.size(); ++k) {
        for (int j = 0; j < spec.pois_per_cluster; ++j) {
            Poi poi;
            poi.id = next_id++;
            poi.location.x = centers[k].x + spec.cluster_spread * rng.normal();
            poi.location.y = centers[k].y + spec.cluster_spread * rng.normal();
            const double u = rng.uniform01();
            double cumulative = 0.0;
            std::size_t category = mixes[k].size() - 1;
            for (std::size_t c = 0; c < mixes[k].size(); ++c) {
                cumulative += mixes[k][c];
                if (u < cumulative) {
                    category = c;
                    break;
                }
            }
            poi.category = "cat" + std::to_string(category);
            pois.push_back(std::move(poi));
        }
    }

    assign_pois_to_cells(pois, grid);

    // Built-up fraction follows the smoothed cluster density.
    const double two_sigma_sq = 2.0 * spec.cluster_spread * spec.cluster_spread;
    std::vector<double> density(grid.size(), 0.0);
    double max_density = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double d = 0.0;
        for (const PlanarPoint& c : centers) {
            const double dx = grid[i].centroid.x - c.x;
            const double dy = grid[i].centroid.y - c.y;
            d += std::exp(-(dx * dx + dy * dy) / two_sigma_sq);
        }
        density[i] = d;
        max_density = std::max(max_density, d);
    }
    if (max_density > 0.0) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid[i].builtup = spec.builtup_peak * density[i] / max_density;
        }
    }

    enrich_units(grid);

    Scenario scenario;
    scenario.candidates = validate_candidates(std::move(grid));
    scenario.pois = std::move(pois);
    return scenario;
}

Solution sample_random(const CandidateSet& candidates, int n, Rng& rng) {
    return init_solution(candidates, n, rng);
}

std::pair<Solution, Solution> sample_stratified_random(const Stratification& strata,
                                                       const Allocation& allocation, Rng& rng) {
    check_allocation(allocation, strata);
    Solution dense = init_solution(strata.dense, allocation.n_dense, rng);
    Solution sparse = init_solution(strata.sparse, allocation.n_sparse, rng);
    return {std::move(dense), std::move(sparse)};
}

RunResult sample_spatial_only(const CandidateSet& candidates, const AnnealConfig& config) {
    return run(candidates, config, MoveSet::spatial_only);
}

const char* method_name(Method m) {
    switch (m) {
    case Method::random: return "random";
    case Method::stratified: return "stratified";
    case Method::spatial: return "spatial";
    case Method::dual: return "dual";
    }
    return "unknown";
}

Method method_from_name(const std::string& name) {
    if (name == "random") {
        return Method::random;
    }
    if (name == "stratified") {
        return Method::stratified;
    }
    if (name == "spatial") {
        return Method::spatial;
    }
    if (name == "dual") {
        return Method::dual;
    }
    raise(Errc::bad_argument, "unknown method '" + name + "'");
}

namespace {

struct StratumCosts {
    int n = 0;
    CostPair costs;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

// Costs of the members of `solution` falling inside one stratum,
// normalized by that stratum's area. Used to attribute the unstratified
// random draw to strata.
StratumCosts stratum_subset_costs(const Solution& solution, const CandidateSet& stratum) {
    std::vector<std::int64_t> members;
    for (const std::int64_t id : solution.member_ids) {
        if (stratum.contains(id)) {
            members.push_back(id);
        }
    }
    StratumCosts out;
    out.n = static_cast<int>(members.size());
    out.costs = compute_costs(stratum, members);
    return out;
}

}  // namespace

ComparisonReport compare(const Scenario& scenario, std::span<const Method> methods, int n_seeds,
                         const AnnealConfig& base_config, const CompareOptions& options) {
    if (methods.empty()) {
        raise(Errc::empty_input, "no methods selected");
    }
    if (n_seeds < 1) {
        raise(Errc::field_out_of_range, "n_seeds must be >= 1");
    }

    std::vector<double> builtups;
    builtups.reserve(scenario.candidates.size());
    for (const SamplingUnit& u : scenario.candidates.units()) {
        builtups.push_back(u.builtup);
    }
    const double threshold = quartile_threshold(builtups);
    const Stratification strata = stratify(scenario.candidates, threshold);
    const Allocation allocation = allocate(options.n_total, options.dense_fraction);
    check_allocation(allocation, strata);

    struct Pair {
        Method method;
        std::uint64_t seed;
    };
    std::vector<Pair> pairs;
    pairs.reserve(methods.size() * static_cast<std::size_t>(n_seeds));
    for (const Method method : methods) {
        for (int s = 0; s < n_seeds; ++s) {
            pairs.push_back(Pair{method, static_cast<std::uint64_t>(s)});
        }
    }

    ComparisonReport report;
    report.rows.resize(pairs.size() * 2);

    const auto run_pair = [&](std::size_t pair_index) {
        const Pair& pair = pairs[pair_index];
        const CandidateSet* stratum_sets[2] = {&strata.dense, &strata.sparse};
        const char* stratum_names[2] = {"dense", "sparse"};
        const int stratum_n[2] = {allocation.n_dense, allocation.n_sparse};
        ComparisonRow* rows = &report.rows[pair_index * 2];

        switch (pair.method) {
        case Method::dual:
        case Method::spatial: {
            const MoveSet moves =
                pair.method == Method::dual ? MoveSet::dual : MoveSet::spatial_only;
            for (int t = 0; t < 2; ++t) {
                AnnealConfig config = base_config;
                config.n = stratum_n[t];
                config.seed = Rng::stream_seed(pair.seed, static_cast<std::uint64_t>(t));
                const auto start = std::chrono::steady_clock::now();
                const RunResult result = run(*stratum_sets[t], config, moves);
                rows[t] = ComparisonRow{pair.method,
                                        pair.seed,
                                        stratum_names[t],
                                        config.n,
                                        result.best.costs.ann,
                                        result.best.costs.amul,
                                        elapsed_ms(start)};
            }
            break;
        }
        case Method::stratified: {
            for (int t = 0; t < 2; ++t) {
                Rng rng = Rng::stream(pair.seed, static_cast<std::uint64_t>(t));
                const auto start = std::chrono::steady_clock::now();
                const Solution solution = init_solution(*stratum_sets[t], stratum_n[t], rng);
                rows[t] = ComparisonRow{pair.method,
                                        pair.seed,
                                        stratum_names[t],
                                        stratum_n[t],
                                        solution.costs.ann,
                                        solution.costs.amul,
                                        elapsed_ms(start)};
            }
            break;
        }
        case Method::random: {
            // Stream 2: the unstratified draw over the full set.
            Rng rng = Rng::stream(pair.seed, 2);
            const auto start = std::chrono::steady_clock::now();
            const Solution solution =
                init_solution(scenario.candidates, options.n_total, rng);
            for (int t = 0; t < 2; ++t) {
                const StratumCosts sc = stratum_subset_costs(solution, *stratum_sets[t]);
                rows[t] = ComparisonRow{pair.method,
                                        pair.seed,
                                        stratum_names[t],
                                        sc.n,
                                        sc.costs.ann,
                                        sc.costs.amul,
                                        elapsed_ms(start)};
            }
            break;
        }
        }
    };

    const auto total = static_cast<std::int64_t>(pairs.size());
    // Exceptions may not cross the parallel region; hold the first one
    // and rethrow once every worker has stopped.
    std::exception_ptr failure;
#ifdef _OPENMP
    const int thread_count = options.jobs > 0 ? options.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(thread_count)
    for (std::int64_t i = 0; i < total; ++i) {
        try {
            run_pair(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
#else
    (void)options.jobs;
    for (std::int64_t i = 0; i < total; ++i) {
        try {
            run_pair(static_cast<std::size_t>(i));
        } catch (...) {
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
#endif
    if (failure) {
        std::rethrow_exception(failure);
    }

    return report;
}

void write_report_csv(std::ostream& out, const ComparisonReport& report) {
    out << "method,seed,stratum,n,final_cost_ann,final_cost_amul,wall_time_ms\n";
    for (const ComparisonRow& row : report.rows) {
        out << method_name(row.method) << ',' << row.seed << ',' << row.stratum << ',' << row.n
            << ',' << format_double(row.final_cost_ann) << ',' << format_double(row.final_cost_amul)
            << ',' << format_double(row.wall_time_ms) << "\n";
    }
}

}  // namespace gridsample
