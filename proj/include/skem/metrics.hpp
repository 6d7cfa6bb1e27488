#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "skem/model.hpp"

namespace skem {

/// L x L count matrix, rows = truth, cols = prediction (classes 1..L).
struct ConfusionMatrix {
  Eigen::MatrixXi counts;

  int num_classes() const { return static_cast<int>(counts.rows()); }
  long long total() const { return counts.cast<long long>().sum(); }
};

struct RunSummary {
  double accuracy = 0.0;  // PA: trace over total
  double miou = 0.0;      // mean per-class intersection-over-union
  std::vector<int> tp, fp, fn, tn;
  std::vector<int> zero_support_classes;  // IoU term forced to 0 for these
  bool converged = true;
};

struct AggregateSummary {
  int n_runs = 0;
  int n_accepted = 0;
  bool empty = false;  // no run passed the filter
  double acc_median = 0.0, acc_mean = 0.0, acc_std = 0.0;
  double miou_median = 0.0, miou_mean = 0.0, miou_std = 0.0;
};

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& pred,
                          int num_classes);

RunSummary metrics(const ConfusionMatrix& cm);

/// (filtered by accuracy > floor, unfiltered). Standard deviations use the
/// n-1 divisor (0 for a single run).
std::pair<AggregateSummary, AggregateSummary> aggregate(
    const std::vector<RunSummary>& runs, double accuracy_floor = 0.5);

/// Plain integer grid, rows/cols in class order (digits [1..9,0]).
void write_confusion(const ConfusionMatrix& cm, std::ostream& out);

}  // namespace skem
