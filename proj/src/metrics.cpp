#include "gridsample/metrics.hpp"

#include <istream>
#include <string>

#include "gridsample/errors.hpp"
#include "gridsample/io_util.hpp"

namespace gridsample {

LabelGrid parse_label_grid_csv(std::istream& in) {
    LabelGrid grid;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (grid.rows == 0) {
            grid.cols = static_cast<int>(fields.size());
        } else if (static_cast<int>(fields.size()) != grid.cols) {
            raise(Errc::shape_mismatch, "line " + std::to_string(line_no) + ": expected " +
                                            std::to_string(grid.cols) + " columns");
        }
        for (const auto field : fields) {
            grid.values.push_back(static_cast<int>(parse_int_field(field, line_no)));
        }
        ++grid.rows;
    }
    if (grid.rows == 0) {
        raise(Errc::empty_input, "label grid has no rows");
    }
    return grid;
}

BinaryCounts confusion_binary_serial(const LabelGrid& pred, const LabelGrid& truth) {
    if (pred.rows != truth.rows || pred.cols != truth.cols) {
        raise(Errc::shape_mismatch, "prediction and truth grids differ in shape");
    }
    BinaryCounts c;
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        const bool p = pred.values[i] != 0;
        const bool t = truth.values[i] != 0;
        if (p && t) {
            ++c.tp;
        } else if (p && !t) {
            ++c.fp;
        } else if (!p && t) {
            ++c.fn;
        } else {
            ++c.tn;
        }
    }
    return c;
}

BinaryCounts confusion_binary(const LabelGrid& pred, const LabelGrid& truth) {
    if (pred.rows != truth.rows || pred.cols != truth.cols) {
        raise(Errc::shape_mismatch, "prediction and truth grids differ in shape");
    }
    BinaryCounts c;
    const auto n = static_cast<std::int64_t>(pred.values.size());
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : tp, fp, fn, tn) if (n >= 65536)
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        const bool p = pred.values[static_cast<std::size_t>(i)] != 0;
        const bool t = truth.values[static_cast<std::size_t>(i)] != 0;
        tp += (p && t) ? 1 : 0;
        fp += (p && !t) ? 1 : 0;
        fn += (!p && t) ? 1 : 0;
        tn += (!p && !t) ? 1 : 0;
    }
    c.tp = tp;
    c.fp = fp;
    c.fn = fn;
    c.tn = tn;
    return c;
}

// Degenerate denominators follow the empty-vs-empty convention: with no
// foreground in either grid all four metrics are 1; a vacuous
// numerator-only degeneracy (no predictions, or no truth) keeps the
// affected metric at 1 while F1/IoU fall to 0 through the other factor.
double precision(const BinaryCounts& c) {
    if (c.tp + c.fp == 0) {
        return 1.0;
    }
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const BinaryCounts& c) {
    if (c.tp + c.fn == 0) {
        return 1.0;
    }
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double f1(const BinaryCounts& c) {
    if (c.empty_vs_empty()) {
        return 1.0;
    }
    const double p = precision(c);
    const double r = recall(c);
    if (p + r == 0.0) {
        return 0.0;
    }
    return 2.0 * p * r / (p + r);
}

double iou(const BinaryCounts& c) {
    if (c.empty_vs_empty()) {
        return 1.0;
    }
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn + c.fp);
}

ConfusionMatrix::ConfusionMatrix(int k, std::vector<std::int64_t> counts)
    : k_(k), counts_(std::move(counts)) {
    if (k_ < 2) {
        raise(Errc::field_out_of_range, "class count must be >= 2, got " + std::to_string(k_));
    }
    if (counts_.size() != static_cast<std::size_t>(k_) * static_cast<std::size_t>(k_)) {
        raise(Errc::shape_mismatch, "count matrix is not k x k");
    }
    for (const std::int64_t c : counts_) {
        if (c < 0) {
            raise(Errc::field_out_of_range, "negative count " + std::to_string(c));
        }
        total_ += c;
    }
    if (total_ == 0) {
        raise(Errc::empty_input, "confusion matrix has no observations");
    }
}

ConfusionMatrix ConfusionMatrix::from_grids(const LabelGrid& truth, const LabelGrid& pred, int k) {
    if (pred.rows != truth.rows || pred.cols != truth.cols) {
        raise(Errc::shape_mismatch, "prediction and truth grids differ in shape");
    }
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k) * k, 0);
    for (std::size_t i = 0; i < truth.values.size(); ++i) {
        const int t = truth.values[i];
        const int p = pred.values[i];
        if (t < 0 || t >= k || p < 0 || p >= k) {
            raise(Errc::field_out_of_range,
                  "class id outside [0, " + std::to_string(k) + ")");
        }
        ++counts[static_cast<std::size_t>(t) * k + p];
    }
    return ConfusionMatrix(k, std::move(counts));
}

double ConfusionMatrix::observed_agreement() const {
    std::int64_t diagonal = 0;
    for (int i = 0; i < k_; ++i) {
        diagonal += at(i, i);
    }
    return static_cast<double>(diagonal) / static_cast<double>(total_);
}

double ConfusionMatrix::chance_agreement() const {
    double pe = 0.0;
    for (int i = 0; i < k_; ++i) {
        std::int64_t row = 0;
        std::int64_t col = 0;
        for (int j = 0; j < k_; ++j) {
            row += at(i, j);
            col += at(j, i);
        }
        pe += (static_cast<double>(row) / static_cast<double>(total_)) *
              (static_cast<double>(col) / static_cast<double>(total_));
    }
    return pe;
}

double kappa(const ConfusionMatrix& m) {
    // Integer check for p_e == 1: sum of row*col marginal products
    // equals N^2 exactly iff all mass sits in one diagonal cell.
    std::int64_t marginal_product_sum = 0;
    for (int i = 0; i < m.k(); ++i) {
        std::int64_t row = 0;
        std::int64_t col = 0;
        for (int j = 0; j < m.k(); ++j) {
            row += m.at(i, j);
            col += m.at(j, i);
        }
        marginal_product_sum += row * col;
    }
    if (marginal_product_sum == m.total() * m.total()) {
        raise(Errc::degenerate_agreement, "chance agreement is 1");
    }
    const double po = m.observed_agreement();
    const double pe = m.chance_agreement();
    return (po - pe) / (1.0 - pe);
}

int resolve_instance_label(const std::map<int, std::int64_t>& pixel_class_counts,
                           std::span<const int> declared_order) {
    std::int64_t best_count = 0;
    int best_class = -1;
    auto rank_of = [&](int class_id) -> std::size_t {
        for (std::size_t i = 0; i < declared_order.size(); ++i) {
            if (declared_order[i] == class_id) {
                return i;
            }
        }
        raise(Errc::bad_argument, "class " + std::to_string(class_id) + " not in declared order");
    };
    for (const auto& [class_id, count] : pixel_class_counts) {
        if (count < 0) {
            raise(Errc::field_out_of_range, "negative count " + std::to_string(count));
        }
        if (count == 0) {
            continue;
        }
        bool wins = false;
        if (best_class < 0 || count > best_count) {
            wins = true;
        } else if (count == best_count && !declared_order.empty() &&
                   rank_of(class_id) < rank_of(best_class)) {
            wins = true;
        }
        // Without a declared order the map's ascending iteration makes
        // the smallest class id win ties by arrival.
        if (wins) {
            best_class = class_id;
            best_count = count;
        }
    }
    if (best_class < 0) {
        raise(Errc::empty_instance, "no positive pixel count");
    }
    return best_class;
}

}  // namespace gridsample
