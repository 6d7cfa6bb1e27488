#include "skem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace skem {

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

AggregateSummary summarize(const std::vector<const RunSummary*>& runs, int n_total) {
  AggregateSummary agg;
  agg.n_runs = n_total;
  agg.n_accepted = static_cast<int>(runs.size());
  if (runs.empty()) {
    agg.empty = true;
    return agg;
  }
  std::vector<double> acc, miou;
  acc.reserve(runs.size());
  miou.reserve(runs.size());
  for (const RunSummary* r : runs) {
    acc.push_back(r->accuracy);
    miou.push_back(r->miou);
  }
  agg.acc_median = median_of(acc);
  agg.acc_mean = mean_of(acc);
  agg.acc_std = std_of(acc, agg.acc_mean);
  agg.miou_median = median_of(miou);
  agg.miou_mean = mean_of(miou);
  agg.miou_std = std_of(miou, agg.miou_mean);
  return agg;
}

}  // namespace

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& pred,
                          int num_classes) {
  if (truth.size() != pred.size()) {
    throw std::invalid_argument(
        "number of predicted samples differs from number of truth samples");
  }
  if (num_classes < 1) throw std::invalid_argument("need at least one class");
  ConfusionMatrix cm;
  cm.counts = Eigen::MatrixXi::Zero(num_classes, num_classes);
  for (size_t n = 0; n < truth.size(); ++n) {
    const int i = truth[n];
    const int j = pred[n];
    if (i < 1 || i > num_classes) throw std::invalid_argument("truth class out of range");
    if (j < 1 || j > num_classes) {
      throw std::invalid_argument("predicted class out of range");
    }
    cm.counts(i - 1, j - 1) += 1;
  }
  return cm;
}

RunSummary metrics(const ConfusionMatrix& cm) {
  const int L = cm.num_classes();
  const long long total = cm.total();
  if (total <= 0) throw std::invalid_argument("confusion matrix has no counts");

  RunSummary rs;
  rs.tp.resize(static_cast<size_t>(L));
  rs.fp.resize(static_cast<size_t>(L));
  rs.fn.resize(static_cast<size_t>(L));
  rs.tn.resize(static_cast<size_t>(L));

  long long trace = 0;
  double iou_sum = 0.0;
  for (int i = 0; i < L; ++i) {
    const long long row = cm.counts.row(i).cast<long long>().sum();
    const long long col = cm.counts.col(i).cast<long long>().sum();
    const long long diag = cm.counts(i, i);
    trace += diag;
    rs.tp[static_cast<size_t>(i)] = static_cast<int>(diag);
    rs.fp[static_cast<size_t>(i)] = static_cast<int>(col - diag);
    rs.fn[static_cast<size_t>(i)] = static_cast<int>(row - diag);
    rs.tn[static_cast<size_t>(i)] = static_cast<int>(total - col - row + diag);
    const long long denom = row + col - diag;
    if (denom == 0) {
      rs.zero_support_classes.push_back(i + 1);
    } else {
      iou_sum += static_cast<double>(diag) / static_cast<double>(denom);
    }
  }
  rs.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  rs.miou = iou_sum / static_cast<double>(L);
  return rs;
}

std::pair<AggregateSummary, AggregateSummary> aggregate(
    const std::vector<RunSummary>& runs, double accuracy_floor) {
  if (runs.empty()) throw std::invalid_argument("no runs to aggregate");
  std::vector<const RunSummary*> accepted;
  std::vector<const RunSummary*> all;
  for (const auto& r : runs) {
    all.push_back(&r);
    if (r.accuracy > accuracy_floor) accepted.push_back(&r);
  }
  const int n = static_cast<int>(runs.size());
  return {summarize(accepted, n), summarize(all, n)};
}

void write_confusion(const ConfusionMatrix& cm, std::ostream& out) {
  const int width = static_cast<int>(std::to_string(cm.counts.maxCoeff()).size());
  for (int i = 0; i < cm.num_classes(); ++i) {
    for (int j = 0; j < cm.num_classes(); ++j) {
      if (j) out << ' ';
      out << std::setw(width) << cm.counts(i, j);
    }
    out << '\n';
  }
}

}  // namespace skem
