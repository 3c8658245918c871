#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridsample/anneal.hpp"
#include "gridsample/core.hpp"
#include "gridsample/ingest.hpp"
#include "gridsample/rng.hpp"
#include "gridsample/strata.hpp"

namespace gridsample {

// Deterministic synthetic study area: POIs drawn from isotropic
// Gaussian clusters with per-cluster category mixes; built-up fraction
// per cell follows the smoothed cluster density, scaled to
// [0, builtup_peak]. Defaults give the 50x50 desk-scale scenario the
// acceptance experiments run on.
struct ScenarioSpec {
    int nx = 50;
    int ny = 50;
    double cell_side = 1000.0;
    int n_clusters = 36;
    int pois_per_cluster = 320;
    int n_categories = 8;
    double cluster_spread = 4500.0;  // meters, Gaussian sigma
    double builtup_peak = 0.95;
    std::uint64_t seed = 2024;

    void validate() const;
};

struct Scenario {
    CandidateSet candidates;  // enriched: profiles + MULs assigned
    std::vector<Poi> pois;
};

Scenario generate_scenario(const ScenarioSpec& spec);

// Uniform draw of n distinct units; costs cached from the set.
Solution sample_random(const CandidateSet& candidates, int n, Rng& rng);

// Independent uniform draws inside each stratum per the allocation.
std::pair<Solution, Solution> sample_stratified_random(const Stratification& strata,
                                                       const Allocation& allocation, Rng& rng);

// The annealer with the diversity move disabled: spread-only baseline.
RunResult sample_spatial_only(const CandidateSet& candidates, const AnnealConfig& config);

enum class Method { random, stratified, spatial, dual };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct ComparisonRow {
    Method method = Method::random;
    std::uint64_t seed = 0;
    std::string stratum;  // "dense" or "sparse"
    int n = 0;
    double final_cost_ann = 0.0;
    double final_cost_amul = 0.0;
    double wall_time_ms = 0.0;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;  // one per (method, seed, stratum)
};

struct CompareOptions {
    int n_total = 100;
    double dense_fraction = 0.8;
    int jobs = 0;  // 0 = library default
};

// Runs every method over seeds 0..n_seeds-1 on one shared
// stratification (threshold = lower quartile of builtup). The annealing
// methods run per stratum with RNG streams split per stratum; random
// draws n_total from the full set and is attributed to strata post hoc.
// Deterministic apart from wall_time_ms.
ComparisonReport compare(const Scenario& scenario, std::span<const Method> methods, int n_seeds,
                         const AnnealConfig& base_config, const CompareOptions& options = {});

// report CSV: method,seed,stratum,n,final_cost_ann,final_cost_amul,wall_time_ms
void write_report_csv(std::ostream& out, const ComparisonReport& report);

}  // namespace gridsample
