#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gridsample/core.hpp"

namespace gridsample {

// Static 2-d tree over a fixed point set; exact nearest-neighbor
// queries. Points may coincide.
class NnIndex {
public:
    explicit NnIndex(std::vector<PlanarPoint> points);

    struct Hit {
        std::size_t index = 0;
        double distance = 0.0;
    };

    // Nearest stored point to q, skipping the stored point at index
    // `exclude` (pass npos to consider all).
    Hit nearest(const PlanarPoint& q, std::size_t exclude = npos) const;

    // Nearest other stored point to stored point i.
    Hit nearest_other(std::size_t i) const;

    std::size_t size() const { return points_.size(); }
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    struct Node {
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::uint32_t point = 0;
        std::uint8_t axis = 0;
    };

    std::int32_t build(std::span<std::uint32_t> order, int depth);
    void search(std::int32_t node, const PlanarPoint& q, std::size_t exclude, Hit& best) const;

    std::vector<PlanarPoint> points_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

// D_n: Euclidean distance from each point to its nearest other point.
// The tree-backed version parallelizes queries; the brute-force one is
// the serial O(N^2) reference and must agree exactly.
std::vector<double> nearest_neighbor_distances(std::span<const PlanarPoint> points);
std::vector<double> nearest_neighbor_distances_bruteforce(std::span<const PlanarPoint> points);

// Inverse of the average-nearest-neighbor index: the expected mean
// nearest-neighbor distance of a random pattern, 1/(2*sqrt(N/A)),
// divided by the observed mean of D_n. No edge correction.
double cost_ann(std::span<const PlanarPoint> points, double area_m2);

// Inverse of the mean mixed-use level; >= 1 on valid inputs.
double cost_amul(std::span<const double> muls);

// Both objectives for a member subset of a candidate set, using the
// set's total area as A. Members must carry MUL values.
CostPair compute_costs(const CandidateSet& candidates, std::span<const std::int64_t> member_ids);

}  // namespace gridsample
