#include "skem/classifier.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace skem {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ClassPriors ClassPriors::uniform(int num_classes) {
  if (num_classes < 1) throw std::invalid_argument("need at least one class");
  return ClassPriors{Eigen::VectorXd::Constant(num_classes, 1.0 / num_classes)};
}

void validate(const ClassPriors& priors) {
  if (priors.p.size() < 1) throw std::invalid_argument("priors are empty");
  if ((priors.p.array() < 0.0).any()) {
    throw std::invalid_argument("priors must be non-negative");
  }
  if (std::abs(priors.p.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("priors do not sum to 1");
  }
}

void validate(const CompositeModel& model) {
  if (model.groups.empty()) throw std::invalid_argument("composite has no groups");
  const int L = model.groups.front().model.num_classes();
  std::vector<Eigen::Index> seen;
  for (const auto& g : model.groups) {
    validate(g.model);
    if (g.model.num_classes() != L) {
      throw std::invalid_argument("groups disagree on number of classes");
    }
    if (static_cast<Eigen::Index>(g.columns.size()) != g.model.dimension()) {
      throw std::invalid_argument("group dimension does not match its column subset");
    }
    for (Eigen::Index c : g.columns) {
      if (c < 0) throw std::invalid_argument("negative feature column");
      for (Eigen::Index s : seen) {
        if (s == c) throw std::invalid_argument("feature subsets overlap");
      }
      seen.push_back(c);
    }
  }
}

CompositeEvaluator::CompositeEvaluator(const CompositeModel& model)
    : num_classes_(model.num_classes()) {
  if (model.groups.empty()) throw std::invalid_argument("composite has no groups");
  for (const auto& g : model.groups) {
    if (g.model.num_classes() != num_classes_) {
      throw std::invalid_argument("groups disagree on number of classes");
    }
    columns_.push_back(g.columns);
    evaluators_.emplace_back(g.model);
  }
}

Eigen::VectorXd CompositeEvaluator::log_scores(
    const Eigen::Ref<const Eigen::VectorXd>& x, const ClassPriors& priors) const {
  if (priors.p.size() != num_classes_) {
    throw std::invalid_argument("priors length does not match classes");
  }
  for (const auto& cols : columns_) {
    for (Eigen::Index c : cols) {
      if (c >= x.size()) {
        throw std::invalid_argument("feature vector is missing column " +
                                    std::to_string(c));
      }
    }
  }
  Eigen::VectorXd scores(num_classes_);
  for (int j = 0; j < num_classes_; ++j) {
    scores[j] = priors.p[j] > 0.0 ? std::log(priors.p[j]) : -kInf;
  }
  for (size_t g = 0; g < evaluators_.size(); ++g) {
    Eigen::VectorXd sub(static_cast<Eigen::Index>(columns_[g].size()));
    for (size_t i = 0; i < columns_[g].size(); ++i) {
      sub[static_cast<Eigen::Index>(i)] = x[columns_[g][i]];
    }
    for (int j = 0; j < num_classes_; ++j) {
      if (scores[j] == -kInf) continue;
      scores[j] += evaluators_[g].class_log_likelihood(sub, j + 1);
    }
  }
  return scores;
}

std::pair<int, Eigen::VectorXd> CompositeEvaluator::classify(
    const Eigen::Ref<const Eigen::VectorXd>& x, const ClassPriors& priors) const {
  Eigen::VectorXd scores = log_scores(x, priors);
  int best = -1;
  double best_score = -kInf;
  for (int j = 0; j < num_classes_; ++j) {
    if (std::isnan(scores[j])) {
      throw std::runtime_error("non-finite classifier score (NaN input?)");
    }
    if (scores[j] > best_score) {
      best_score = scores[j];
      best = j;
    }
  }
  if (best < 0) {
    throw std::runtime_error("every class scored -inf; cannot classify");
  }
  return {best + 1, std::move(scores)};
}

std::pair<int, Eigen::VectorXd> classify(const CompositeModel& model,
                                         const Eigen::VectorXd& x,
                                         const ClassPriors& priors) {
  return CompositeEvaluator(model).classify(x, priors);
}

std::vector<int> classify_batch(const CompositeModel& model,
                                const Eigen::MatrixXd& features,
                                const ClassPriors& priors) {
  CompositeEvaluator eval(model);
  std::vector<int> out(static_cast<size_t>(features.rows()));
  for (Eigen::Index n = 0; n < features.rows(); ++n) {
    out[static_cast<size_t>(n)] =
        eval.classify(features.row(n).transpose(), priors).first;
  }
  return out;
}

}  // namespace skem
