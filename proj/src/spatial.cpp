#include "gridsample/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gridsample/errors.hpp"
#include "gridsample/io_util.hpp"

namespace gridsample {

namespace {

// Shared by the tree and the brute-force reference so both routes
// produce bit-identical distances.
inline double dist_sq(const PlanarPoint& a, const PlanarPoint& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

}  // namespace

NnIndex::NnIndex(std::vector<PlanarPoint> points) : points_(std::move(points)) {
    std::vector<std::uint32_t> order(points_.size());
    std::iota(order.begin(), order.end(), 0u);
    nodes_.reserve(points_.size());
    root_ = build(order, 0);
}

std::int32_t NnIndex::build(std::span<std::uint32_t> order, int depth) {
    if (order.empty()) {
        return -1;
    }
    const auto axis = static_cast<std::uint8_t>(depth % 2);
    const std::size_t mid = order.size() / 2;
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(mid), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                         const double ca = axis == 0 ? points_[a].x : points_[a].y;
                         const double cb = axis == 0 ? points_[b].x : points_[b].y;
                         return ca < cb || (ca == cb && a < b);
                     });
    const auto index = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{-1, -1, order[mid], axis});
    const std::int32_t left = build(order.first(mid), depth + 1);
    const std::int32_t right = build(order.subspan(mid + 1), depth + 1);
    nodes_[static_cast<std::size_t>(index)].left = left;
    nodes_[static_cast<std::size_t>(index)].right = right;
    return index;
}

void NnIndex::search(std::int32_t node, const PlanarPoint& q, std::size_t exclude,
                     Hit& best) const {
    if (node < 0) {
        return;
    }
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    const PlanarPoint& p = points_[n.point];
    if (n.point != exclude) {
        const double d2 = dist_sq(q, p);
        if (d2 < best.distance) {
            best.distance = d2;
            best.index = n.point;
        }
    }
    const double split = n.axis == 0 ? p.x : p.y;
    const double qc = n.axis == 0 ? q.x : q.y;
    const double diff = qc - split;
    const std::int32_t near_child = diff < 0.0 ? n.left : n.right;
    const std::int32_t far_child = diff < 0.0 ? n.right : n.left;
    search(near_child, q, exclude, best);
    if (diff * diff < best.distance) {
        search(far_child, q, exclude, best);
    }
}

NnIndex::Hit NnIndex::nearest(const PlanarPoint& q, std::size_t exclude) const {
    if (points_.empty() || (points_.size() == 1 && exclude == 0)) {
        raise(Errc::too_few_points, "no queryable point in index");
    }
    Hit best{npos, std::numeric_limits<double>::infinity()};
    search(root_, q, exclude, best);
    best.distance = std::sqrt(best.distance);
    return best;
}

NnIndex::Hit NnIndex::nearest_other(std::size_t i) const {
    return nearest(points_[i], i);
}

std::vector<double> nearest_neighbor_distances(std::span<const PlanarPoint> points) {
    if (points.size() < 2) {
        raise(Errc::too_few_points, "need at least 2 points, got " +
                                        std::to_string(points.size()));
    }
    const NnIndex index(std::vector<PlanarPoint>(points.begin(), points.end()));
    std::vector<double> distances(points.size());
    const auto n = static_cast<std::int64_t>(points.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n >= 512)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        distances[static_cast<std::size_t>(i)] =
            index.nearest_other(static_cast<std::size_t>(i)).distance;
    }
    return distances;
}

std::vector<double> nearest_neighbor_distances_bruteforce(std::span<const PlanarPoint> points) {
    if (points.size() < 2) {
        raise(Errc::too_few_points, "need at least 2 points, got " +
                                        std::to_string(points.size()));
    }
    const std::size_t n = points.size();
    std::vector<double> distances(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            best = std::min(best, dist_sq(points[i], points[j]));
        }
        distances[i] = std::sqrt(best);
    }
    return distances;
}

double cost_ann(std::span<const PlanarPoint> points, double area_m2) {
    if (!(area_m2 > 0.0) || !std::isfinite(area_m2)) {
        raise(Errc::non_positive_area, format_double(area_m2));
    }
    const std::vector<double> distances = nearest_neighbor_distances(points);
    double sum = 0.0;
    for (const double d : distances) {
        sum += d;
    }
    const double mean = sum / static_cast<double>(distances.size());
    if (mean == 0.0) {
        raise(Errc::zero_mean_distance, "all points coincide");
    }
    const double expected =
        1.0 / (2.0 * std::sqrt(static_cast<double>(points.size()) / area_m2));
    return expected / mean;
}

double cost_amul(std::span<const double> muls) {
    if (muls.empty()) {
        raise(Errc::empty_input, "no MUL values");
    }
    double sum = 0.0;
    for (const double m : muls) {
        if (!(m >= 0.0 && m <= 1.0)) {
            raise(Errc::field_out_of_range, "mul: " + format_double(m));
        }
        sum += m;
    }
    if (sum == 0.0) {
        raise(Errc::zero_mean_mul, "mean mixed-use level is zero");
    }
    return static_cast<double>(muls.size()) / sum;
}

CostPair compute_costs(const CandidateSet& candidates, std::span<const std::int64_t> member_ids) {
    std::vector<PlanarPoint> points;
    std::vector<double> muls;
    points.reserve(member_ids.size());
    muls.reserve(member_ids.size());
    for (const std::int64_t id : member_ids) {
        const SamplingUnit& u = candidates.unit_by_id(id);
        if (!u.mul) {
            raise(Errc::bad_argument,
                  "unit " + std::to_string(id) + " has no MUL; run the enrich step first");
        }
        points.push_back(u.centroid);
        muls.push_back(*u.mul);
    }
    return CostPair{cost_ann(points, candidates.total_area()), cost_amul(muls)};
}

}  // namespace gridsample
