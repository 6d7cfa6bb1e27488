#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "skem/model.hpp"

namespace skem {

/// One factor of the composite likelihood: a shared kernel model over a
/// subset of feature columns (0-based indices into the full feature vector).
struct FeatureGroup {
  std::vector<Eigen::Index> columns;
  SharedKernelModel model;
};

// Product-of-subsets classifier: the class likelihood is the product of the
// group likelihoods over pairwise disjoint feature subsets. A single group
// covering all features is the plain joint classifier. `dither` records
// whether the variant expects zero feature values to be dithered before
// scoring (a feature-preparation fact carried with the model).
struct CompositeModel {
  std::vector<FeatureGroup> groups;
  bool dither = false;

  int num_classes() const {
    return groups.empty() ? 0 : groups.front().model.num_classes();
  }
};

struct ClassPriors {
  Eigen::VectorXd p;

  static ClassPriors uniform(int num_classes);
};

void validate(const CompositeModel& model);
void validate(const ClassPriors& priors);

/// Pre-factored composite scorer for batch use.
class CompositeEvaluator {
 public:
  explicit CompositeEvaluator(const CompositeModel& model);

  /// Per-class log score: log prior + sum of group log-likelihoods.
  Eigen::VectorXd log_scores(const Eigen::Ref<const Eigen::VectorXd>& x,
                             const ClassPriors& priors) const;

  /// Predicted class (1..L, ties to the lowest index) and the log scores.
  std::pair<int, Eigen::VectorXd> classify(const Eigen::Ref<const Eigen::VectorXd>& x,
                                           const ClassPriors& priors) const;

  int num_classes() const { return num_classes_; }

 private:
  std::vector<std::vector<Eigen::Index>> columns_;
  std::vector<SharedKernelEvaluator> evaluators_;
  int num_classes_;
};

std::pair<int, Eigen::VectorXd> classify(const CompositeModel& model,
                                         const Eigen::VectorXd& x,
                                         const ClassPriors& priors);

/// Row-wise classify; result order matches row order.
std::vector<int> classify_batch(const CompositeModel& model,
                                const Eigen::MatrixXd& features,
                                const ClassPriors& priors);

}  // namespace skem
