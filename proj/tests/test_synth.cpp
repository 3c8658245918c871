#include <doctest.h>

#include <map>
#include <set>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "gridsample/errors.hpp"
#include "gridsample/ingest.hpp"
#include "gridsample/synth.hpp"

using namespace gridsample;

namespace {

ScenarioSpec small_spec() {
    ScenarioSpec spec;
    spec.nx = 12;
    spec.ny = 12;
    spec.n_clusters = 6;
    spec.pois_per_cluster = 150;
    spec.cluster_spread = 2500.0;
    spec.seed = 99;
    return spec;
}

}  // namespace

TEST_CASE("generate_scenario: cell count and determinism") {
    ScenarioSpec spec = small_spec();
    spec.nx = 10;
    spec.ny = 5;
    const Scenario a = generate_scenario(spec);
    CHECK(a.candidates.size() == 50);

    const Scenario b = generate_scenario(spec);
    std::ostringstream csv_a;
    std::ostringstream csv_b;
    write_units_csv(csv_a, a.candidates.units(), true);
    write_units_csv(csv_b, b.candidates.units(), true);
    CHECK(csv_a.str() == csv_b.str());

    std::ostringstream pois_a;
    std::ostringstream pois_b;
    write_pois_csv(pois_a, a.pois);
    write_pois_csv(pois_b, b.pois);
    CHECK(pois_a.str() == pois_b.str());

    spec.seed = 100;
    const Scenario c = generate_scenario(spec);
    std::ostringstream csv_c;
    write_units_csv(csv_c, c.candidates.units(), true);
    CHECK(csv_a.str() != csv_c.str());
}

TEST_CASE("generate_scenario: no POIs means MUL zero everywhere") {
    ScenarioSpec spec = small_spec();
    spec.pois_per_cluster = 0;
    const Scenario scenario = generate_scenario(spec);
    for (const SamplingUnit& u : scenario.candidates.units()) {
        CHECK(*u.mul == 0.0);
    }
}

TEST_CASE("sample_random: structural contract") {
    const Scenario scenario = generate_scenario(small_spec());
    Rng rng(4);
    const Solution all = sample_random(scenario.candidates, 144, rng);
    CHECK(all.member_ids.size() == 144);

    Rng rng_a(9);
    Rng rng_b(9);
    const Solution a = sample_random(scenario.candidates, 10, rng_a);
    const Solution b = sample_random(scenario.candidates, 10, rng_b);
    CHECK(a.member_ids == b.member_ids);

    Rng rng_c(1);
    try {
        sample_random(scenario.candidates, 145, rng_c);
        FAIL("expected InsufficientCandidates");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::insufficient_candidates);
    }
}

TEST_CASE("samplers return structurally valid solutions across seeds") {
    const Scenario scenario = generate_scenario(small_spec());
    std::vector<double> builtups;
    for (const SamplingUnit& u : scenario.candidates.units()) {
        builtups.push_back(u.builtup);
    }
    const Stratification strata = stratify(scenario.candidates, quartile_threshold(builtups));
    const Allocation allocation = allocate(20, 0.8);
    check_allocation(allocation, strata);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const auto [dense, sparse] = sample_stratified_random(strata, allocation, rng);
        CHECK(dense.member_ids.size() == static_cast<std::size_t>(allocation.n_dense));
        CHECK(sparse.member_ids.size() == static_cast<std::size_t>(allocation.n_sparse));
        std::unordered_set<std::int64_t> seen;
        for (const std::int64_t id : dense.member_ids) {
            CHECK(strata.dense.contains(id));
            CHECK(seen.insert(id).second);
        }
        for (const std::int64_t id : sparse.member_ids) {
            CHECK(strata.sparse.contains(id));
            CHECK(seen.insert(id).second);
        }
    }
}

TEST_CASE("sample_spatial_only: no diversity move ever fires") {
    const Scenario scenario = generate_scenario(small_spec());
    AnnealConfig config;
    config.n = 12;
    config.max_iters = 400;
    config.seed = 21;
    const RunResult result = sample_spatial_only(scenario.candidates, config);
    REQUIRE(!result.trace.empty());
    for (const TraceRow& row : result.trace) {
        CHECK(row.p_diversity == 0.0);
        CHECK_FALSE(row.accepted_diversity);
    }
    CHECK(result.best.costs.ann <= result.trace.front().cost_ann_best);

    AnnealConfig frozen = config;
    frozen.t0 = 1e-9;
    frozen.t_tol = 1e-8;
    const RunResult zero = sample_spatial_only(scenario.candidates, frozen);
    CHECK(zero.trace.empty());
}

TEST_CASE("compare: row structure and determinism") {
    const Scenario scenario = generate_scenario(small_spec());
    AnnealConfig base;
    base.max_iters = 150;
    CompareOptions options;
    options.n_total = 30;

    const std::vector<Method> only_random = {Method::random};
    const ComparisonReport single = compare(scenario, only_random, 1, base, options);
    CHECK(single.rows.size() == 2);  // one per stratum
    CHECK(single.rows[0].stratum == "dense");
    CHECK(single.rows[1].stratum == "sparse");

    const std::vector<Method> methods = {Method::random, Method::stratified, Method::spatial,
                                         Method::dual};
    const ComparisonReport a = compare(scenario, methods, 3, base, options);
    const ComparisonReport b = compare(scenario, methods, 3, base, options);
    REQUIRE(a.rows.size() == b.rows.size());
    CHECK(a.rows.size() == methods.size() * 3 * 2);
    std::set<std::tuple<std::string, std::uint64_t, std::string>> keys;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].final_cost_ann == b.rows[i].final_cost_ann);
        CHECK(a.rows[i].final_cost_amul == b.rows[i].final_cost_amul);
        CHECK(a.rows[i].n == b.rows[i].n);
        keys.insert({method_name(a.rows[i].method), a.rows[i].seed, a.rows[i].stratum});
    }
    CHECK(keys.size() == a.rows.size());  // one row per (method, seed, stratum)
}

TEST_CASE("compare: per-method statistics are order invariant") {
    const Scenario scenario = generate_scenario(small_spec());
    AnnealConfig base;
    base.max_iters = 120;
    CompareOptions options;
    options.n_total = 30;

    const std::vector<Method> forward = {Method::random, Method::dual};
    const std::vector<Method> reversed = {Method::dual, Method::random};
    const ComparisonReport a = compare(scenario, forward, 2, base, options);
    const ComparisonReport b = compare(scenario, reversed, 2, base, options);

    auto stats = [](const ComparisonReport& report) {
        std::map<std::string, double> sums;
        for (const ComparisonRow& row : report.rows) {
            sums[method_name(row.method)] += row.final_cost_ann + row.final_cost_amul;
        }
        return sums;
    };
    CHECK(stats(a) == stats(b));
}

TEST_CASE("method names round-trip") {
    for (const Method m : {Method::random, Method::stratified, Method::spatial, Method::dual}) {
        CHECK(method_from_name(method_name(m)) == m);
    }
    CHECK_THROWS_AS(method_from_name("bogus"), Error);
}

TEST_CASE("report CSV layout") {
    ComparisonReport report;
    report.rows.push_back(ComparisonRow{Method::dual, 3, "dense", 80, 0.5, 2.25, 12.5});
    std::ostringstream out;
    write_report_csv(out, report);
    CHECK(out.str() ==
          "method,seed,stratum,n,final_cost_ann,final_cost_amul,wall_time_ms\n"
          "dual,3,dense,80,0.5,2.25,12.5\n");
}
