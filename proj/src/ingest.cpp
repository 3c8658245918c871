#include "gridsample/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "gridsample/errors.hpp"
#include "gridsample/io_util.hpp"

namespace gridsample {

namespace {

constexpr double kEarthRadius = 6371008.8;  // meters, mean sphere
constexpr double kDegToRad = std::numbers::pi / 180.0;

// Grid geometry reconstructed from unit centroids. Cells dropped by a
// boundary filter leave holes in the key map, so points over them
// resolve to "outside".
struct GridLayout {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double side = 0.0;
    std::unordered_map<std::uint64_t, std::size_t> cell_by_key;

    static std::uint64_t pack(std::int64_t col, std::int64_t row) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(col)) << 32) |
               static_cast<std::uint32_t>(row);
    }

    static GridLayout from_units(std::span<const SamplingUnit> units) {
        if (units.empty()) {
            raise(Errc::empty_input, "grid has no cells");
        }
        GridLayout layout;
        layout.side = units.front().cell_side;
        double min_cx = std::numeric_limits<double>::infinity();
        double min_cy = std::numeric_limits<double>::infinity();
        for (const SamplingUnit& u : units) {
            if (u.cell_side != layout.side) {
                raise(Errc::bad_argument, "grid cells differ in cell_side");
            }
            min_cx = std::min(min_cx, u.centroid.x);
            min_cy = std::min(min_cy, u.centroid.y);
        }
        layout.origin_x = min_cx - layout.side / 2.0;
        layout.origin_y = min_cy - layout.side / 2.0;
        layout.cell_by_key.reserve(units.size());
        for (std::size_t i = 0; i < units.size(); ++i) {
            // Centroids sit at half-integer multiples of side, far from
            // rounding boundaries, so llround is stable here.
            const std::int64_t col =
                std::llround((units[i].centroid.x - layout.origin_x) / layout.side - 0.5);
            const std::int64_t row =
                std::llround((units[i].centroid.y - layout.origin_y) / layout.side - 0.5);
            if (col < 0 || row < 0 ||
                !layout.cell_by_key.emplace(pack(col, row), i).second) {
                raise(Errc::bad_argument, "units do not form a regular grid");
            }
        }
        return layout;
    }

    // Half-open membership [x0, x0+side) x [y0, y0+side).
    std::ptrdiff_t locate(const PlanarPoint& p) const {
        const std::int64_t col = static_cast<std::int64_t>(std::floor((p.x - origin_x) / side));
        const std::int64_t row = static_cast<std::int64_t>(std::floor((p.y - origin_y) / side));
        if (col < 0 || row < 0) {
            return -1;
        }
        const auto it = cell_by_key.find(pack(col, row));
        return it == cell_by_key.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
    }
};

std::string strip_bom(std::string line) {
    if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' && line[2] == '\xBF') {
        line.erase(0, 3);
    }
    return line;
}

}  // namespace

PlanarPoint project_geographic(double lon_deg, double lat_deg, const GeoOrigin& origin) {
    if (!(std::abs(origin.lat0) < 90.0)) {
        raise(Errc::pole_latitude, "origin latitude " + format_double(origin.lat0));
    }
    if (!(std::abs(lat_deg) < 90.0)) {
        raise(Errc::pole_latitude, "latitude " + format_double(lat_deg));
    }
    const double cos_lat0 = std::cos(origin.lat0 * kDegToRad);
    return PlanarPoint{kEarthRadius * (lon_deg - origin.lon0) * kDegToRad * cos_lat0,
                       kEarthRadius * (lat_deg - origin.lat0) * kDegToRad};
}

void unproject_planar(const PlanarPoint& p, const GeoOrigin& origin, double& lon_deg,
                      double& lat_deg) {
    const double cos_lat0 = std::cos(origin.lat0 * kDegToRad);
    lon_deg = origin.lon0 + p.x / (kEarthRadius * kDegToRad * cos_lat0);
    lat_deg = origin.lat0 + p.y / (kEarthRadius * kDegToRad);
}

std::vector<SamplingUnit> generate_grid(const BoundingBox& bbox, double cell_side) {
    if (!(cell_side > 0.0) || !std::isfinite(cell_side)) {
        raise(Errc::field_out_of_range, "cell_side must be > 0");
    }
    if (!(bbox.max_x > bbox.min_x) || !(bbox.max_y > bbox.min_y)) {
        raise(Errc::degenerate_box, "bounding box has non-positive extent");
    }
    const auto ncols = static_cast<std::int64_t>(std::ceil(bbox.width() / cell_side));
    const auto nrows = static_cast<std::int64_t>(std::ceil(bbox.height() / cell_side));
    std::vector<SamplingUnit> grid;
    grid.reserve(static_cast<std::size_t>(ncols * nrows));
    for (std::int64_t row = 0; row < nrows; ++row) {
        for (std::int64_t col = 0; col < ncols; ++col) {
            SamplingUnit u;
            u.id = row * ncols + col;
            u.centroid = PlanarPoint{bbox.min_x + (static_cast<double>(col) + 0.5) * cell_side,
                                     bbox.min_y + (static_cast<double>(row) + 0.5) * cell_side};
            u.cell_side = cell_side;
            grid.push_back(std::move(u));
        }
    }
    return grid;
}

AssignSummary assign_pois_to_cells_serial(std::span<const Poi> pois,
                                          std::vector<SamplingUnit>& grid) {
    const GridLayout layout = GridLayout::from_units(grid);
    AssignSummary summary;
    for (const Poi& poi : pois) {
        const std::ptrdiff_t cell = layout.locate(poi.location);
        if (cell < 0) {
            ++summary.out_of_grid;
        } else {
            ++grid[static_cast<std::size_t>(cell)].poi_counts[poi.category];
            ++summary.assigned;
        }
    }
    return summary;
}

AssignSummary assign_pois_to_cells(std::span<const Poi> pois, std::vector<SamplingUnit>& grid) {
#ifdef _OPENMP
    if (pois.size() >= 4096) {
        const GridLayout layout = GridLayout::from_units(grid);
        AssignSummary summary;
        const auto n = static_cast<std::int64_t>(pois.size());
#pragma omp parallel
        {
            std::unordered_map<std::size_t, std::map<std::string, std::int64_t>> local;
            std::int64_t local_assigned = 0;
            std::int64_t local_out = 0;
#pragma omp for schedule(static) nowait
            for (std::int64_t i = 0; i < n; ++i) {
                const Poi& poi = pois[static_cast<std::size_t>(i)];
                const std::ptrdiff_t cell = layout.locate(poi.location);
                if (cell < 0) {
                    ++local_out;
                } else {
                    ++local[static_cast<std::size_t>(cell)][poi.category];
                    ++local_assigned;
                }
            }
            // Integer merges commute, so the result is independent of
            // thread count and merge order.
#pragma omp critical
            {
                summary.assigned += local_assigned;
                summary.out_of_grid += local_out;
                for (auto& [cell, counts] : local) {
                    for (auto& [category, count] : counts) {
                        grid[cell].poi_counts[category] += count;
                    }
                }
            }
        }
        return summary;
    }
#endif
    return assign_pois_to_cells_serial(pois, grid);
}

double compute_builtup(std::span<const LabeledPoint> points_in_cell, bool* empty_flag) {
    if (empty_flag != nullptr) {
        *empty_flag = points_in_cell.empty();
    }
    if (points_in_cell.empty()) {
        return 0.0;
    }
    std::int64_t built = 0;
    for (const LabeledPoint& p : points_in_cell) {
        built += p.is_builtup ? 1 : 0;
    }
    return static_cast<double>(built) / static_cast<double>(points_in_cell.size());
}

BuiltupSummary apply_builtup_points(std::span<const LabeledPoint> points,
                                    std::vector<SamplingUnit>& grid) {
    const GridLayout layout = GridLayout::from_units(grid);
    std::vector<std::int64_t> built(grid.size(), 0);
    std::vector<std::int64_t> total(grid.size(), 0);
    BuiltupSummary summary;
    const auto n = static_cast<std::int64_t>(points.size());
    std::int64_t out = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : out) if (n >= 4096)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        const LabeledPoint& p = points[static_cast<std::size_t>(i)];
        const std::ptrdiff_t cell = layout.locate(p.location);
        if (cell < 0) {
            ++out;
        } else {
            const auto c = static_cast<std::size_t>(cell);
#ifdef _OPENMP
#pragma omp atomic
#endif
            ++total[c];
            if (p.is_builtup) {
#ifdef _OPENMP
#pragma omp atomic
#endif
                ++built[c];
            }
        }
    }
    summary.out_of_grid = out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (total[i] == 0) {
            grid[i].builtup = 0.0;
            ++summary.empty_cells;
        } else {
            grid[i].builtup = static_cast<double>(built[i]) / static_cast<double>(total[i]);
        }
    }
    return summary;
}

// --- CSV ---------------------------------------------------------------

std::vector<SamplingUnit> parse_units_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        raise(Errc::missing_column, "empty units file");
    }
    line = strip_bom(line);
    const auto header = split_csv_line(line);
    const std::vector<std::string> base = {"id", "x", "y", "cell_side", "builtup"};
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (i >= header.size() || header[i] != base[i]) {
            raise(Errc::missing_column, base[i]);
        }
    }
    bool enriched = false;
    if (header.size() >= 9) {
        const std::vector<std::string> extra = {"d0", "d1", "d2", "mul"};
        enriched = true;
        for (std::size_t i = 0; i < extra.size(); ++i) {
            if (header[5 + i] != extra[i]) {
                raise(Errc::missing_column, extra[i]);
            }
        }
    } else if (header.size() != base.size() &&
               !(header.size() == base.size() + 1 && header[5] == "stratum")) {
        raise(Errc::missing_column, "unexpected unit CSV header");
    }

    std::vector<SamplingUnit> units;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        const std::size_t expected_min = enriched ? 9 : 5;
        if (fields.size() < expected_min) {
            raise(Errc::malformed_row, "line " + std::to_string(line_no) + ": expected " +
                                           std::to_string(expected_min) + " fields, got " +
                                           std::to_string(fields.size()));
        }
        SamplingUnit u;
        u.id = parse_int_field(fields[0], line_no);
        u.centroid.x = parse_double_field(fields[1], line_no);
        u.centroid.y = parse_double_field(fields[2], line_no);
        u.cell_side = parse_double_field(fields[3], line_no);
        u.builtup = parse_double_field(fields[4], line_no);
        if (enriched) {
            DiversityProfile profile;
            profile.d0 = parse_double_field(fields[5], line_no);
            profile.d1 = parse_double_field(fields[6], line_no);
            profile.d2 = parse_double_field(fields[7], line_no);
            u.profile = profile;
            u.mul = parse_double_field(fields[8], line_no);
        }
        units.push_back(std::move(u));
    }
    return units;
}

PoiParseResult parse_pois_csv(std::istream& in, std::optional<GeoOrigin> origin) {
    std::string line;
    if (!std::getline(in, line)) {
        raise(Errc::missing_column, "empty POI file");
    }
    line = strip_bom(line);
    const auto header = split_csv_line(line);
    bool geographic = false;
    if (header.size() >= 4 && header[0] == "id" && header[1] == "lon" && header[2] == "lat" &&
        header[3] == "category") {
        geographic = true;
    } else if (header.size() >= 4 && header[0] == "id" && header[1] == "x" && header[2] == "y" &&
               header[3] == "category") {
        geographic = false;
    } else {
        raise(Errc::missing_column, "POI header must be id,lon,lat,category or id,x,y,category");
    }

    struct RawPoi {
        std::int64_t id;
        double a;
        double b;
        std::string category;
    };
    std::vector<RawPoi> raw;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() < 4) {
            raise(Errc::malformed_row,
                  "line " + std::to_string(line_no) + ": expected 4 fields");
        }
        RawPoi r;
        r.id = parse_int_field(fields[0], line_no);
        r.a = parse_double_field(fields[1], line_no);
        r.b = parse_double_field(fields[2], line_no);
        r.category = std::string(fields[3]);
        if (r.category.empty()) {
            raise(Errc::malformed_row, "line " + std::to_string(line_no) + ": empty category");
        }
        raw.push_back(std::move(r));
    }

    PoiParseResult result;
    result.geographic = geographic;
    result.pois.reserve(raw.size());
    if (geographic) {
        GeoOrigin effective;
        if (origin) {
            effective = *origin;
        } else {
            if (raw.empty()) {
                raise(Errc::empty_input, "geographic POI file with no rows and no origin");
            }
            double sum_lon = 0.0;
            double sum_lat = 0.0;
            for (const RawPoi& r : raw) {
                sum_lon += r.a;
                sum_lat += r.b;
            }
            effective.lon0 = sum_lon / static_cast<double>(raw.size());
            effective.lat0 = sum_lat / static_cast<double>(raw.size());
            result.derived_origin = effective;
        }
        for (RawPoi& r : raw) {
            result.pois.push_back(
                Poi{r.id, project_geographic(r.a, r.b, effective), std::move(r.category)});
        }
    } else {
        for (RawPoi& r : raw) {
            result.pois.push_back(Poi{r.id, PlanarPoint{r.a, r.b}, std::move(r.category)});
        }
    }
    return result;
}

std::vector<LabeledPoint> parse_lulc_csv(std::istream& in, std::optional<GeoOrigin> origin) {
    std::string line;
    if (!std::getline(in, line)) {
        raise(Errc::missing_column, "empty LULC file");
    }
    line = strip_bom(line);
    const auto header = split_csv_line(line);
    bool geographic = false;
    if (header.size() >= 3 && header[0] == "lon" && header[1] == "lat" &&
        header[2] == "is_builtup") {
        geographic = true;
        if (!origin) {
            raise(Errc::missing_column, "geographic LULC file requires an origin");
        }
    } else if (!(header.size() >= 3 && header[0] == "x" && header[1] == "y" &&
                 header[2] == "is_builtup")) {
        raise(Errc::missing_column, "LULC header must be x,y,is_builtup or lon,lat,is_builtup");
    }

    std::vector<LabeledPoint> points;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() < 3) {
            raise(Errc::malformed_row, "line " + std::to_string(line_no) + ": expected 3 fields");
        }
        const double a = parse_double_field(fields[0], line_no);
        const double b = parse_double_field(fields[1], line_no);
        const std::int64_t flag = parse_int_field(fields[2], line_no);
        if (flag != 0 && flag != 1) {
            raise(Errc::malformed_row,
                  "line " + std::to_string(line_no) + ": is_builtup must be 0 or 1");
        }
        LabeledPoint p;
        p.location = geographic ? project_geographic(a, b, *origin) : PlanarPoint{a, b};
        p.is_builtup = flag == 1;
        points.push_back(p);
    }
    return points;
}

void write_units_csv(std::ostream& out, std::span<const SamplingUnit> units, bool enriched,
                     const std::string& stratum_label) {
    out << "id,x,y,cell_side,builtup";
    if (enriched) {
        out << ",d0,d1,d2,mul";
    }
    if (!stratum_label.empty()) {
        out << ",stratum";
    }
    out << "\n";
    for (const SamplingUnit& u : units) {
        out << u.id << ',' << format_double(u.centroid.x) << ',' << format_double(u.centroid.y)
            << ',' << format_double(u.cell_side) << ',' << format_double(u.builtup);
        if (enriched) {
            if (!u.profile || !u.mul) {
                raise(Errc::bad_argument,
                      "unit " + std::to_string(u.id) + " lacks profile/mul for enriched output");
            }
            out << ',' << format_double(u.profile->d0) << ',' << format_double(u.profile->d1)
                << ',' << format_double(u.profile->d2) << ',' << format_double(*u.mul);
        }
        if (!stratum_label.empty()) {
            out << ',' << stratum_label;
        }
        out << "\n";
    }
}

void write_pois_csv(std::ostream& out, std::span<const Poi> pois) {
    out << "id,x,y,category\n";
    for (const Poi& p : pois) {
        out << p.id << ',' << format_double(p.location.x) << ',' << format_double(p.location.y)
            << ',' << p.category << "\n";
    }
}

// --- boundary -----------------------------------------------------------

BoundaryPolygon parse_geojson_polygon(const std::string& geojson_text,
                                      std::optional<GeoOrigin> origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(geojson_text);
    } catch (const nlohmann::json::parse_error& e) {
        raise(Errc::malformed_row, std::string("GeoJSON parse failure: ") + e.what());
    }
    const nlohmann::json* geometry = &doc;
    if (doc.value("type", "") == "Feature") {
        if (!doc.contains("geometry")) {
            raise(Errc::malformed_row, "GeoJSON Feature without geometry");
        }
        geometry = &doc["geometry"];
    }
    if (geometry->value("type", "") != "Polygon") {
        raise(Errc::malformed_row, "boundary must be a GeoJSON Polygon");
    }
    if (!geometry->contains("coordinates") || !(*geometry)["coordinates"].is_array()) {
        raise(Errc::malformed_row, "Polygon without coordinates");
    }
    BoundaryPolygon poly;
    for (const auto& ring_json : (*geometry)["coordinates"]) {
        std::vector<PlanarPoint> ring;
        for (const auto& coord : ring_json) {
            if (!coord.is_array() || coord.size() < 2) {
                raise(Errc::malformed_row, "Polygon coordinate is not an [x, y] pair");
            }
            const double a = coord[0].get<double>();
            const double b = coord[1].get<double>();
            ring.push_back(origin ? project_geographic(a, b, *origin) : PlanarPoint{a, b});
        }
        if (ring.size() < 3) {
            raise(Errc::malformed_row, "Polygon ring with fewer than 3 points");
        }
        poly.rings.push_back(std::move(ring));
    }
    if (poly.rings.empty()) {
        raise(Errc::malformed_row, "Polygon with no rings");
    }
    return poly;
}

bool point_in_polygon(const PlanarPoint& p, const BoundaryPolygon& poly) {
    bool inside = false;
    for (const auto& ring : poly.rings) {
        const std::size_t n = ring.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const PlanarPoint& a = ring[j];
            const PlanarPoint& b = ring[i];
            if ((a.y > p.y) != (b.y > p.y)) {
                const double t = (p.y - a.y) / (b.y - a.y);
                if (p.x < a.x + t * (b.x - a.x)) {
                    inside = !inside;
                }
            }
        }
    }
    return inside;
}

BoundingBox polygon_envelope(const BoundaryPolygon& poly) {
    BoundingBox box{std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity()};
    for (const auto& ring : poly.rings) {
        for (const PlanarPoint& p : ring) {
            box.min_x = std::min(box.min_x, p.x);
            box.min_y = std::min(box.min_y, p.y);
            box.max_x = std::max(box.max_x, p.x);
            box.max_y = std::max(box.max_y, p.y);
        }
    }
    if (!(box.max_x > box.min_x) || !(box.max_y > box.min_y)) {
        raise(Errc::degenerate_box, "boundary polygon has no extent");
    }
    return box;
}

std::int64_t filter_grid_by_boundary(std::vector<SamplingUnit>& grid, const BoundaryPolygon& poly) {
    const std::size_t before = grid.size();
    std::erase_if(grid, [&](const SamplingUnit& u) { return !point_in_polygon(u.centroid, poly); });
    return static_cast<std::int64_t>(before - grid.size());
}

}  // namespace gridsample
