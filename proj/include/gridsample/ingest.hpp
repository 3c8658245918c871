#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridsample/core.hpp"

namespace gridsample {

struct Poi {
    std::int64_t id = -1;
    PlanarPoint location;
    std::string category;
};

struct BoundingBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
};

struct GeoOrigin {
    double lon0 = 0.0;  // degrees
    double lat0 = 0.0;  // degrees
};

// Equirectangular local projection around origin, sphere radius
// 6,371,008.8 m. Adequate for relative distances at city scale, which is
// all the cost functions need. Throws Errc::pole_latitude at |lat0| >= 90.
PlanarPoint project_geographic(double lon_deg, double lat_deg, const GeoOrigin& origin);

// Analytic inverse of project_geographic.
void unproject_planar(const PlanarPoint& p, const GeoOrigin& origin, double& lon_deg,
                      double& lat_deg);

// Tiles bbox row-major from (min_x, min_y) with ceil(width/side) columns
// and ceil(height/side) rows; ids 0..count-1; centroids at nominal cell
// centers (edge cells keep nominal side x side extent).
std::vector<SamplingUnit> generate_grid(const BoundingBox& bbox, double cell_side);

struct AssignSummary {
    std::int64_t assigned = 0;
    std::int64_t out_of_grid = 0;
};

// Increments poi_counts[category] of the cell whose half-open interval
// [x0, x0+side) x [y0, y0+side) contains each POI. POIs outside every
// cell are counted, not assigned. The grid layout is reconstructed from
// the units' centroids, so grids with cells dropped by a boundary filter
// still assign correctly (POIs over dropped cells count as out-of-grid).
AssignSummary assign_pois_to_cells(std::span<const Poi> pois, std::vector<SamplingUnit>& grid);
AssignSummary assign_pois_to_cells_serial(std::span<const Poi> pois,
                                          std::vector<SamplingUnit>& grid);

struct LabeledPoint {
    PlanarPoint location;
    bool is_builtup = false;
};

// Fraction of built-labeled points among those given; 0 for an empty
// list, with *empty_flag set when provided.
double compute_builtup(std::span<const LabeledPoint> points_in_cell, bool* empty_flag = nullptr);

struct BuiltupSummary {
    std::int64_t empty_cells = 0;   // cells that received no labeled point
    std::int64_t out_of_grid = 0;   // labeled points outside every cell
};

// Recomputes every cell's builtup fraction from labeled land-cover
// points, using the same half-open cell membership as POI assignment.
BuiltupSummary apply_builtup_points(std::span<const LabeledPoint> points,
                                    std::vector<SamplingUnit>& grid);

// --- CSV formats -----------------------------------------------------
//
// units CSV:  id,x,y,cell_side,builtup[,d0,d1,d2,mul]
//             (the bracketed columns are appended by the enrich step)
// POI CSV:    id,lon,lat,category  or  id,x,y,category
//
// All files are UTF-8, ',' separated, '.' decimal point, one header row.

std::vector<SamplingUnit> parse_units_csv(std::istream& in);

struct PoiParseResult {
    std::vector<Poi> pois;
    bool geographic = false;                  // true if the file had lon/lat columns
    std::optional<GeoOrigin> derived_origin;  // set when the origin was defaulted
};

// Geographic files are projected. When no origin is supplied, the
// centroid of all points becomes the origin and is echoed back in
// derived_origin so callers can record it.
PoiParseResult parse_pois_csv(std::istream& in, std::optional<GeoOrigin> origin = std::nullopt);

// lulc CSV: x,y,is_builtup or lon,lat,is_builtup (is_builtup in {0,1}).
std::vector<LabeledPoint> parse_lulc_csv(std::istream& in,
                                         std::optional<GeoOrigin> origin = std::nullopt);

void write_units_csv(std::ostream& out, std::span<const SamplingUnit> units, bool enriched,
                     const std::string& stratum_label = std::string());
void write_pois_csv(std::ostream& out, std::span<const Poi> pois);

// --- study-area boundary ----------------------------------------------

// Outer ring plus holes of one GeoJSON Polygon, in planar meters.
struct BoundaryPolygon {
    std::vector<std::vector<PlanarPoint>> rings;
};

// Accepts a GeoJSON Feature or bare geometry of type Polygon. When an
// origin is given the coordinates are treated as lon/lat and projected;
// otherwise they are taken as planar meters.
BoundaryPolygon parse_geojson_polygon(const std::string& geojson_text,
                                      std::optional<GeoOrigin> origin = std::nullopt);

// Even-odd rule over all rings.
bool point_in_polygon(const PlanarPoint& p, const BoundaryPolygon& poly);

BoundingBox polygon_envelope(const BoundaryPolygon& poly);

// Drops cells whose centroid falls outside the polygon; returns the
// number removed.
std::int64_t filter_grid_by_boundary(std::vector<SamplingUnit>& grid,
                                     const BoundaryPolygon& poly);

}  // namespace gridsample
