#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

namespace gridsample {

struct BinaryCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    // Both grids empty of foreground: the empty-vs-empty convention
    // applies and precision/recall/F1/IoU are all 1.
    bool empty_vs_empty() const { return tp == 0 && fp == 0 && fn == 0; }
};

// Integer label raster, row-major. Parsed from a CSV of integers, one
// row per pixel row.
struct LabelGrid {
    int rows = 0;
    int cols = 0;
    std::vector<int> values;

    int at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

LabelGrid parse_label_grid_csv(std::istream& in);

// Per-pixel tallies with foreground = 1. Throws Errc::shape_mismatch.
BinaryCounts confusion_binary(const LabelGrid& pred, const LabelGrid& truth);
BinaryCounts confusion_binary_serial(const LabelGrid& pred, const LabelGrid& truth);

double precision(const BinaryCounts& c);
double recall(const BinaryCounts& c);
double f1(const BinaryCounts& c);
double iou(const BinaryCounts& c);

// K x K counts, rows = truth, columns = prediction.
class ConfusionMatrix {
public:
    ConfusionMatrix(int k, std::vector<std::int64_t> counts);

    static ConfusionMatrix from_grids(const LabelGrid& truth, const LabelGrid& pred, int k);

    int k() const { return k_; }
    std::int64_t at(int truth_class, int predicted_class) const {
        return counts_[static_cast<std::size_t>(truth_class) * k_ + predicted_class];
    }
    std::int64_t total() const { return total_; }

    double observed_agreement() const;  // p_o
    double chance_agreement() const;    // p_e, marginal-product form

private:
    int k_ = 0;
    std::vector<std::int64_t> counts_;
    std::int64_t total_ = 0;
};

// Cohen's kappa (p_o - p_e) / (1 - p_e) with the standard
// marginal-product chance agreement. Throws Errc::degenerate_agreement
// when p_e = 1 (all mass in a single diagonal cell).
double kappa(const ConfusionMatrix& m);

// Majority vote over a building instance's predicted pixel classes.
// Ties go to the class that appears earliest in declared_order, or to
// the smallest class id when no ordering is given. Throws
// Errc::empty_instance when no positive count exists.
int resolve_instance_label(const std::map<int, std::int64_t>& pixel_class_counts,
                           std::span<const int> declared_order = {});

}  // namespace gridsample
