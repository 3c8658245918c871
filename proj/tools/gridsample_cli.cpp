// gridsample: representative spatial sampling over gridded study areas.
//
// Subcommands realize the full pipeline file-to-file: grid, enrich,
// stratify, sample, compare, eval, resolve. Every run writes a manifest
// next to its primary output; identical flags and inputs reproduce the
// data outputs byte for byte (manifests differ in timestamp, compare
// reports in wall_time_ms).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridsample/anneal.hpp"
#include "gridsample/core.hpp"
#include "gridsample/diversity.hpp"
#include "gridsample/errors.hpp"
#include "gridsample/ingest.hpp"
#include "gridsample/io_util.hpp"
#include "gridsample/manifest.hpp"
#include "gridsample/metrics.hpp"
#include "gridsample/rng.hpp"
#include "gridsample/spatial.hpp"
#include "gridsample/strata.hpp"
#include "gridsample/synth.hpp"

namespace gs = gridsample;

namespace {

constexpr const char* kToolVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tracks inputs/outputs so every subcommand emits a complete manifest.
class ManifestBuilder {
public:
    ManifestBuilder(std::string subcommand) {
        manifest_.tool_version = kToolVersion;
        manifest_.subcommand = std::move(subcommand);
    }

    std::string read_input(const std::filesystem::path& path) {
        std::string text = gs::read_text_file(path);
        manifest_.inputs.emplace_back(path.string(), gs::fnv1a64_hex(text));
        return text;
    }

    void write_output(const std::filesystem::path& path, std::string_view content) {
        gs::atomic_write_file(path, content);
        manifest_.outputs.emplace_back(path.string(), gs::fnv1a64_hex(content));
        if (primary_.empty()) {
            primary_ = path;
        }
    }

    void set_config(const std::string& key, const std::string& value) {
        manifest_.config[key] = value;
    }
    void set_config(const std::string& key, double value) {
        manifest_.config[key] = gs::format_double(value);
    }
    void set_config(const std::string& key, std::int64_t value) {
        manifest_.config[key] = std::to_string(value);
    }
    void set_seed(std::uint64_t seed) { manifest_.seed = seed; }

    void finish() {
        if (primary_.empty()) {
            return;
        }
        manifest_.timestamp = gs::current_utc_timestamp();
        gs::write_manifest(manifest_, primary_);
    }

private:
    gs::RunManifest manifest_;
    std::filesystem::path primary_;
};

std::vector<double> parse_double_list(const std::string& text, std::size_t expected,
                                      const std::string& flag) {
    const auto fields = gs::split_csv_line(text);
    if (fields.size() != expected) {
        throw UsageError(flag + " expects " + std::to_string(expected) + " comma-separated values");
    }
    std::vector<double> values;
    for (const auto field : fields) {
        values.push_back(gs::parse_double_field(field, 1));
    }
    return values;
}

std::optional<gs::GeoOrigin> parse_origin_flag(const std::string& origin_flag) {
    if (origin_flag.empty()) {
        return std::nullopt;
    }
    const auto v = parse_double_list(origin_flag, 2, "--origin");
    return gs::GeoOrigin{v[0], v[1]};
}

bool units_enriched(const std::vector<gs::SamplingUnit>& units) {
    for (const gs::SamplingUnit& u : units) {
        if (!u.profile || !u.mul) {
            return false;
        }
    }
    return !units.empty();
}

std::string units_to_csv(std::span<const gs::SamplingUnit> units, bool enriched,
                         const std::string& stratum = std::string()) {
    std::ostringstream out;
    gs::write_units_csv(out, units, enriched, stratum);
    return out.str();
}

// Class map CSV: class_id,class_name; row order defines tie-break
// precedence for the majority-vote resolver.
std::vector<int> parse_class_map(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        gs::raise(gs::Errc::missing_column, "empty class map");
    }
    const auto header = gs::split_csv_line(line);
    if (header.size() < 2 || header[0] != "class_id" || header[1] != "class_name") {
        gs::raise(gs::Errc::missing_column, "class map header must be class_id,class_name");
    }
    std::vector<int> order;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = gs::split_csv_line(line);
        if (fields.size() < 2) {
            gs::raise(gs::Errc::malformed_row, "line " + std::to_string(line_no));
        }
        order.push_back(static_cast<int>(gs::parse_int_field(fields[0], line_no)));
    }
    if (order.empty()) {
        gs::raise(gs::Errc::empty_input, "class map has no classes");
    }
    return order;
}

// --- grid ---------------------------------------------------------------

struct GridArgs {
    std::string bbox;
    std::string boundary;
    std::string origin;
    double cell_side = 1000.0;
    std::string output;
};

int run_grid(const GridArgs& args) {
    if (args.bbox.empty() == args.boundary.empty()) {
        throw UsageError("grid requires exactly one of --bbox or --boundary");
    }
    ManifestBuilder manifest("grid");
    manifest.set_config("cell_side", args.cell_side);

    gs::BoundingBox bbox;
    std::optional<gs::BoundaryPolygon> polygon;
    if (!args.bbox.empty()) {
        const auto v = parse_double_list(args.bbox, 4, "--bbox");
        bbox = gs::BoundingBox{v[0], v[1], v[2], v[3]};
        manifest.set_config("bbox", args.bbox);
    } else {
        const std::string text = manifest.read_input(args.boundary);
        polygon = gs::parse_geojson_polygon(text, parse_origin_flag(args.origin));
        bbox = gs::polygon_envelope(*polygon);
        manifest.set_config("boundary", args.boundary);
        if (!args.origin.empty()) {
            manifest.set_config("origin", args.origin);
        }
    }

    std::vector<gs::SamplingUnit> grid = gs::generate_grid(bbox, args.cell_side);
    std::int64_t dropped = 0;
    if (polygon) {
        dropped = gs::filter_grid_by_boundary(grid, *polygon);
    }
    gs::validate_candidates(grid);

    manifest.write_output(args.output, units_to_csv(grid, false));
    manifest.finish();
    std::cout << "cells=" << grid.size() << "\n";
    std::cout << "dropped_outside_boundary=" << dropped << "\n";
    return 0;
}

// --- enrich ---------------------------------------------------------------

struct EnrichArgs {
    std::string units;
    std::string pois;
    std::string origin;
    std::string lulc;
    std::string output;
};

int run_enrich(const EnrichArgs& args) {
    ManifestBuilder manifest("enrich");
    const std::optional<gs::GeoOrigin> origin = parse_origin_flag(args.origin);

    std::istringstream units_in(manifest.read_input(args.units));
    std::vector<gs::SamplingUnit> units = gs::parse_units_csv(units_in);

    std::istringstream pois_in(manifest.read_input(args.pois));
    const gs::PoiParseResult pois = gs::parse_pois_csv(pois_in, origin);
    const gs::AssignSummary assigned = gs::assign_pois_to_cells(pois.pois, units);

    gs::BuiltupSummary builtup_summary;
    bool have_lulc = false;
    if (!args.lulc.empty()) {
        std::istringstream lulc_in(manifest.read_input(args.lulc));
        const std::vector<gs::LabeledPoint> points = gs::parse_lulc_csv(lulc_in, origin);
        builtup_summary = gs::apply_builtup_points(points, units);
        have_lulc = true;
    }

    gs::enrich_units(units);
    const gs::CandidateSet set = gs::validate_candidates(std::move(units));

    if (!args.origin.empty()) {
        manifest.set_config("origin", args.origin);
    }
    manifest.write_output(args.output, units_to_csv(set.units(), true));
    manifest.finish();

    std::cout << "units=" << set.size() << "\n";
    std::cout << "pois_assigned=" << assigned.assigned << "\n";
    std::cout << "out_of_grid_count=" << assigned.out_of_grid << "\n";
    if (pois.derived_origin) {
        std::cout << "derived_origin=" << gs::format_double(pois.derived_origin->lon0) << ","
                  << gs::format_double(pois.derived_origin->lat0) << "\n";
    }
    if (have_lulc) {
        std::cout << "lulc_empty_cells=" << builtup_summary.empty_cells << "\n";
        std::cout << "lulc_out_of_grid=" << builtup_summary.out_of_grid << "\n";
    }
    return 0;
}

// --- stratify ---------------------------------------------------------------

struct StratifyArgs {
    std::string units;
    std::string threshold = "auto";
    std::string out_dense;
    std::string out_sparse;
};

int run_stratify(const StratifyArgs& args) {
    ManifestBuilder manifest("stratify");
    std::istringstream units_in(manifest.read_input(args.units));
    std::vector<gs::SamplingUnit> units = gs::parse_units_csv(units_in);
    const bool enriched = units_enriched(units);
    const gs::CandidateSet set = gs::validate_candidates(std::move(units));

    double threshold = 0.0;
    if (args.threshold == "auto") {
        std::vector<double> builtups;
        builtups.reserve(set.size());
        for (const gs::SamplingUnit& u : set.units()) {
            builtups.push_back(u.builtup);
        }
        threshold = gs::quartile_threshold(builtups);
    } else {
        threshold = gs::parse_double_field(args.threshold, 1);
        if (!(threshold >= 0.0 && threshold <= 1.0)) {
            gs::raise(gs::Errc::field_out_of_range, "threshold: " + args.threshold);
        }
    }

    const gs::Stratification strata = gs::stratify(set, threshold);
    manifest.set_config("threshold", args.threshold);
    manifest.set_config("threshold_value", threshold);
    manifest.write_output(args.out_dense, units_to_csv(strata.dense.units(), enriched));
    manifest.write_output(args.out_sparse, units_to_csv(strata.sparse.units(), enriched));
    manifest.finish();

    std::cout << "threshold=" << gs::format_double(threshold) << "\n";
    std::cout << "dense_units=" << strata.dense.size() << "\n";
    std::cout << "sparse_units=" << strata.sparse.size() << "\n";
    if (strata.dense.empty() || strata.sparse.empty()) {
        std::cout << "empty_stratum=1\n";
    }
    return 0;
}

// --- sample ---------------------------------------------------------------

struct SampleArgs {
    std::string units;
    std::string stratum = "dense";
    int n = 0;
    double t0 = 1.0;
    double alpha = 0.999;
    double t_tol = 1e-8;
    int iters = 5000;
    std::uint64_t seed = 0;
    std::string trace;
    std::string output;
    std::string mode = "dual";
};

int run_sample(const SampleArgs& args) {
    if (args.stratum != "dense" && args.stratum != "sparse") {
        throw UsageError("--stratum must be dense or sparse");
    }
    if (args.mode != "dual" && args.mode != "spatial") {
        throw UsageError("--mode must be dual or spatial");
    }
    ManifestBuilder manifest("sample");
    std::istringstream units_in(manifest.read_input(args.units));
    const gs::CandidateSet set = gs::validate_candidates(gs::parse_units_csv(units_in));

    // One RNG stream per stratum run: dense = stream 0, sparse = stream 1.
    const std::uint64_t stream_index = args.stratum == "dense" ? 0 : 1;
    gs::AnnealConfig config;
    config.t0 = args.t0;
    config.alpha = args.alpha;
    config.t_tol = args.t_tol;
    config.max_iters = args.iters;
    config.seed = gs::Rng::stream_seed(args.seed, stream_index);
    config.n = args.n;

    const gs::MoveSet moves =
        args.mode == "dual" ? gs::MoveSet::dual : gs::MoveSet::spatial_only;
    const gs::RunResult result = gs::run(set, config, moves);

    std::vector<gs::SamplingUnit> selected;
    selected.reserve(result.best.member_ids.size());
    for (const std::int64_t id : result.best.member_ids) {
        selected.push_back(set.unit_by_id(id));
    }

    manifest.set_seed(args.seed);
    manifest.set_config("stratum", args.stratum);
    manifest.set_config("mode", args.mode);
    manifest.set_config("n", static_cast<std::int64_t>(args.n));
    manifest.set_config("t0", args.t0);
    manifest.set_config("alpha", args.alpha);
    manifest.set_config("ttol", args.t_tol);
    manifest.set_config("iters", static_cast<std::int64_t>(args.iters));
    manifest.set_config("seed", static_cast<std::int64_t>(args.seed));
    manifest.set_config("stream_seed", static_cast<std::int64_t>(config.seed));

    manifest.write_output(args.output, units_to_csv(selected, true, args.stratum));
    if (!args.trace.empty()) {
        std::ostringstream trace_out;
        gs::write_trace_csv(trace_out, result.trace);
        manifest.write_output(args.trace, trace_out.str());
    }
    manifest.finish();

    std::cout << "iterations=" << result.trace.size() << "\n";
    std::cout << "best_cost_ann=" << gs::format_double(result.best.costs.ann) << "\n";
    std::cout << "best_cost_amul=" << gs::format_double(result.best.costs.amul) << "\n";
    std::cout << "last_cost_ann=" << gs::format_double(result.last.costs.ann) << "\n";
    std::cout << "last_cost_amul=" << gs::format_double(result.last.costs.amul) << "\n";
    return 0;
}

// --- compare ---------------------------------------------------------------

struct CompareArgs {
    std::string methods = "random,stratified,spatial,dual";
    int seeds = 20;
    std::string units;
    int nx = 50;
    int ny = 50;
    double cell_side = 1000.0;
    int clusters = 36;
    int pois_per_cluster = 320;
    int categories = 8;
    double spread = 4500.0;
    double builtup_peak = 0.95;
    std::uint64_t scenario_seed = 2024;
    int n_total = 100;
    double dense_fraction = 0.8;
    double t0 = 1.0;
    double alpha = 0.999;
    double t_tol = 1e-8;
    int iters = 5000;
    int jobs = 0;
    std::string output;
};

int run_compare(const CompareArgs& args) {
    ManifestBuilder manifest("compare");

    std::vector<gs::Method> methods;
    for (const auto name : gs::split_csv_line(args.methods)) {
        methods.push_back(gs::method_from_name(std::string(name)));
    }

    gs::Scenario scenario;
    if (!args.units.empty()) {
        std::istringstream units_in(manifest.read_input(args.units));
        scenario.candidates = gs::validate_candidates(gs::parse_units_csv(units_in));
        manifest.set_config("units", args.units);
    } else {
        gs::ScenarioSpec spec;
        spec.nx = args.nx;
        spec.ny = args.ny;
        spec.cell_side = args.cell_side;
        spec.n_clusters = args.clusters;
        spec.pois_per_cluster = args.pois_per_cluster;
        spec.n_categories = args.categories;
        spec.cluster_spread = args.spread;
        spec.builtup_peak = args.builtup_peak;
        spec.seed = args.scenario_seed;
        scenario = gs::generate_scenario(spec);
        manifest.set_config("scenario_seed", static_cast<std::int64_t>(args.scenario_seed));
        manifest.set_config("nx", static_cast<std::int64_t>(args.nx));
        manifest.set_config("ny", static_cast<std::int64_t>(args.ny));
    }

    gs::AnnealConfig base;
    base.t0 = args.t0;
    base.alpha = args.alpha;
    base.t_tol = args.t_tol;
    base.max_iters = args.iters;

    gs::CompareOptions options;
    options.n_total = args.n_total;
    options.dense_fraction = args.dense_fraction;
    options.jobs = args.jobs;

    manifest.set_config("methods", args.methods);
    manifest.set_config("seeds", static_cast<std::int64_t>(args.seeds));
    manifest.set_config("n_total", static_cast<std::int64_t>(args.n_total));
    manifest.set_config("dense_fraction", args.dense_fraction);
    manifest.set_config("iters", static_cast<std::int64_t>(args.iters));

    const gs::ComparisonReport report =
        gs::compare(scenario, methods, args.seeds, base, options);

    std::ostringstream out;
    gs::write_report_csv(out, report);
    manifest.write_output(args.output, out.str());
    manifest.finish();

    std::cout << "rows=" << report.rows.size() << "\n";
    return 0;
}

// --- eval ---------------------------------------------------------------

struct EvalArgs {
    std::string mode = "binary";
    std::string pred;
    std::string truth;
    std::string classes;
    std::string output;
};

int run_eval(const EvalArgs& args) {
    if (args.mode != "binary" && args.mode != "kappa") {
        throw UsageError("--mode must be binary or kappa");
    }
    ManifestBuilder manifest("eval");
    manifest.set_config("mode", args.mode);

    std::istringstream pred_in(manifest.read_input(args.pred));
    const gs::LabelGrid pred = gs::parse_label_grid_csv(pred_in);
    std::istringstream truth_in(manifest.read_input(args.truth));
    const gs::LabelGrid truth = gs::parse_label_grid_csv(truth_in);

    std::ostringstream out;
    out << "metric,value\n";
    if (args.mode == "binary") {
        const gs::BinaryCounts counts = gs::confusion_binary(pred, truth);
        out << "tp," << counts.tp << "\n";
        out << "fp," << counts.fp << "\n";
        out << "fn," << counts.fn << "\n";
        out << "tn," << counts.tn << "\n";
        out << "precision," << gs::format_double(gs::precision(counts)) << "\n";
        out << "recall," << gs::format_double(gs::recall(counts)) << "\n";
        out << "f1," << gs::format_double(gs::f1(counts)) << "\n";
        out << "iou," << gs::format_double(gs::iou(counts)) << "\n";
        out << "empty_vs_empty," << (counts.empty_vs_empty() ? 1 : 0) << "\n";
    } else {
        int k = 0;
        if (!args.classes.empty()) {
            const std::vector<int> order = parse_class_map(manifest.read_input(args.classes));
            k = static_cast<int>(order.size());
        } else {
            int max_class = 0;
            for (const int v : pred.values) {
                max_class = std::max(max_class, v);
            }
            for (const int v : truth.values) {
                max_class = std::max(max_class, v);
            }
            k = max_class + 1;
        }
        k = std::max(k, 2);
        const gs::ConfusionMatrix matrix = gs::ConfusionMatrix::from_grids(truth, pred, k);
        out << "k," << matrix.k() << "\n";
        out << "p_o," << gs::format_double(matrix.observed_agreement()) << "\n";
        out << "p_e," << gs::format_double(matrix.chance_agreement()) << "\n";
        out << "kappa," << gs::format_double(gs::kappa(matrix)) << "\n";
    }

    manifest.write_output(args.output, out.str());
    manifest.finish();
    std::cout << "written=" << args.output << "\n";
    return 0;
}

// --- resolve ---------------------------------------------------------------

struct ResolveArgs {
    std::string pixels;
    std::string classes;
    std::string output;
};

int run_resolve(const ResolveArgs& args) {
    ManifestBuilder manifest("resolve");

    std::vector<int> declared_order;
    if (!args.classes.empty()) {
        declared_order = parse_class_map(manifest.read_input(args.classes));
    }

    std::istringstream in(manifest.read_input(args.pixels));
    std::string line;
    if (!std::getline(in, line)) {
        gs::raise(gs::Errc::missing_column, "empty instance pixel file");
    }
    const auto header = gs::split_csv_line(line);
    if (header.size() < 3 || header[0] != "instance_id" || header[1] != "class_id" ||
        header[2] != "count") {
        gs::raise(gs::Errc::missing_column, "header must be instance_id,class_id,count");
    }
    std::map<std::int64_t, std::map<int, std::int64_t>> instances;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = gs::split_csv_line(line);
        if (fields.size() < 3) {
            gs::raise(gs::Errc::malformed_row, "line " + std::to_string(line_no));
        }
        const std::int64_t instance = gs::parse_int_field(fields[0], line_no);
        const int class_id = static_cast<int>(gs::parse_int_field(fields[1], line_no));
        const std::int64_t count = gs::parse_int_field(fields[2], line_no);
        instances[instance][class_id] += count;
    }

    std::ostringstream out;
    out << "instance_id,class_id\n";
    for (const auto& [instance, counts] : instances) {
        out << instance << ',' << gs::resolve_instance_label(counts, declared_order) << "\n";
    }

    manifest.write_output(args.output, out.str());
    manifest.finish();
    std::cout << "instances=" << instances.size() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Representative spatial sampling via dual-objective simulated annealing"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    GridArgs grid_args;
    CLI::App* grid = app.add_subcommand("grid", "Generate a sampling grid over a study area");
    grid->add_option("--bbox", grid_args.bbox, "Planar bbox: minx,miny,maxx,maxy (meters)");
    grid->add_option("--boundary", grid_args.boundary, "GeoJSON Polygon boundary file");
    grid->add_option("--origin", grid_args.origin,
                     "lon0,lat0: treat boundary coordinates as geographic");
    grid->add_option("--cell-side", grid_args.cell_side, "Cell side in meters")
        ->capture_default_str();
    grid->add_option("-o,--output", grid_args.output, "Output unit CSV")->required();

    EnrichArgs enrich_args;
    CLI::App* enrich =
        app.add_subcommand("enrich", "Attach POI diversity, MUL and built-up data to units");
    enrich->add_option("--units", enrich_args.units, "Unit CSV from grid")->required();
    enrich->add_option("--pois", enrich_args.pois, "POI CSV")->required();
    enrich->add_option("--origin", enrich_args.origin, "lon0,lat0 projection origin");
    enrich->add_option("--lulc", enrich_args.lulc, "Labeled land-cover points CSV");
    enrich->add_option("-o,--output", enrich_args.output, "Output enriched unit CSV")->required();

    StratifyArgs stratify_args;
    CLI::App* stratify =
        app.add_subcommand("stratify", "Split units into building-dense/sparse strata");
    stratify->add_option("--units", stratify_args.units, "Enriched unit CSV")->required();
    stratify->add_option("--threshold", stratify_args.threshold,
                         "auto (lower quartile) or a fraction in [0,1]")
        ->capture_default_str();
    stratify->add_option("--out-dense", stratify_args.out_dense, "Dense stratum CSV")->required();
    stratify->add_option("--out-sparse", stratify_args.out_sparse, "Sparse stratum CSV")
        ->required();

    SampleArgs sample_args;
    CLI::App* sample = app.add_subcommand("sample", "Run the dual-objective annealer");
    sample->add_option("--units", sample_args.units, "Stratum unit CSV")->required();
    sample->add_option("--stratum", sample_args.stratum, "dense or sparse")->required();
    sample->add_option("--n", sample_args.n, "Number of units to select")->required();
    sample->add_option("--t0", sample_args.t0, "Initial temperature")->capture_default_str();
    sample->add_option("--alpha", sample_args.alpha, "Cooling rate")->capture_default_str();
    sample->add_option("--ttol", sample_args.t_tol, "Minimum temperature")->capture_default_str();
    sample->add_option("--iters", sample_args.iters, "Maximum iterations")->capture_default_str();
    sample->add_option("--seed", sample_args.seed, "Base RNG seed")->capture_default_str();
    sample->add_option("--trace", sample_args.trace, "Optional trace CSV path");
    sample->add_option("--mode", sample_args.mode, "dual or spatial (spread-only)")
        ->capture_default_str();
    sample->add_option("-o,--output", sample_args.output, "Selected-units CSV")->required();

    CompareArgs compare_args;
    CLI::App* compare = app.add_subcommand("compare", "Benchmark sampling methods");
    compare->add_option("--methods", compare_args.methods, "Comma list of methods")
        ->capture_default_str();
    compare->add_option("--seeds", compare_args.seeds, "Number of seeds")->capture_default_str();
    compare->add_option("--units", compare_args.units,
                        "Enriched unit CSV (otherwise a synthetic scenario is generated)");
    compare->add_option("--nx", compare_args.nx, "Scenario grid columns")->capture_default_str();
    compare->add_option("--ny", compare_args.ny, "Scenario grid rows")->capture_default_str();
    compare->add_option("--cell-side", compare_args.cell_side, "Scenario cell side (m)")
        ->capture_default_str();
    compare->add_option("--clusters", compare_args.clusters, "Scenario POI clusters")
        ->capture_default_str();
    compare->add_option("--pois-per-cluster", compare_args.pois_per_cluster,
                        "POIs per cluster")
        ->capture_default_str();
    compare->add_option("--categories", compare_args.categories, "POI categories")
        ->capture_default_str();
    compare->add_option("--spread", compare_args.spread, "Cluster sigma (m)")
        ->capture_default_str();
    compare->add_option("--builtup-peak", compare_args.builtup_peak, "Peak built-up fraction")
        ->capture_default_str();
    compare->add_option("--scenario-seed", compare_args.scenario_seed, "Scenario seed")
        ->capture_default_str();
    compare->add_option("--n", compare_args.n_total, "Total units per method")
        ->capture_default_str();
    compare->add_option("--dense-fraction", compare_args.dense_fraction,
                        "Share allocated to the dense stratum")
        ->capture_default_str();
    compare->add_option("--t0", compare_args.t0, "Initial temperature")->capture_default_str();
    compare->add_option("--alpha", compare_args.alpha, "Cooling rate")->capture_default_str();
    compare->add_option("--ttol", compare_args.t_tol, "Minimum temperature")
        ->capture_default_str();
    compare->add_option("--iters", compare_args.iters, "Annealer iterations")
        ->capture_default_str();
    compare->add_option("--jobs", compare_args.jobs, "Worker threads (0 = auto)")
        ->capture_default_str();
    compare->add_option("-o,--output", compare_args.output, "Report CSV")->required();

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "Pixel metrics from label grids");
    eval->add_option("--mode", eval_args.mode, "binary or kappa")->capture_default_str();
    eval->add_option("--pred", eval_args.pred, "Predicted label grid CSV")->required();
    eval->add_option("--truth", eval_args.truth, "Ground-truth label grid CSV")->required();
    eval->add_option("--classes", eval_args.classes, "Class map CSV (kappa mode)");
    eval->add_option("-o,--output", eval_args.output, "Metrics CSV")->required();

    ResolveArgs resolve_args;
    CLI::App* resolve =
        app.add_subcommand("resolve", "Majority-vote instance labels from pixel counts");
    resolve->add_option("--pixels", resolve_args.pixels, "instance_id,class_id,count CSV")
        ->required();
    resolve->add_option("--classes", resolve_args.classes, "Class map CSV for tie ordering");
    resolve->add_option("-o,--output", resolve_args.output, "Instance label CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (grid->parsed()) {
            return run_grid(grid_args);
        }
        if (enrich->parsed()) {
            return run_enrich(enrich_args);
        }
        if (stratify->parsed()) {
            return run_stratify(stratify_args);
        }
        if (sample->parsed()) {
            return run_sample(sample_args);
        }
        if (compare->parsed()) {
            return run_compare(compare_args);
        }
        if (eval->parsed()) {
            return run_eval(eval_args);
        }
        if (resolve->parsed()) {
            return run_resolve(resolve_args);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const gs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
