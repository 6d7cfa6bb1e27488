#include "skem/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace skem {

namespace {

constexpr double kWeightColumnTol = 1e-9;
constexpr double kSymmetryTol = 1e-12;

void check_components(const std::vector<GaussianComponent>& components) {
  if (components.empty()) {
    throw std::invalid_argument("model has no components");
  }
  const Eigen::Index m = components.front().dimension();
  for (const auto& c : components) {
    if (c.dimension() != m || c.covariance.rows() != m || c.covariance.cols() != m) {
      throw std::invalid_argument("components disagree on dimension");
    }
    const double scale = std::max(1.0, c.covariance.cwiseAbs().maxCoeff());
    if ((c.covariance - c.covariance.transpose()).cwiseAbs().maxCoeff() >
        kSymmetryTol * scale) {
      throw std::invalid_argument("covariance is not symmetric");
    }
    GaussianDensity check(c);  // throws FactorizationError if not PD
  }
}

}  // namespace

int LabeledDataset::num_classes() const {
  int L = 0;
  for (int c : labels) L = std::max(L, c);
  return L;
}

void validate(const SharedKernelModel& model) {
  check_components(model.components);
  if (model.weights.rows() != model.num_components()) {
    throw std::invalid_argument("weight matrix must have one row per component");
  }
  if (model.weights.cols() < 1) {
    throw std::invalid_argument("model needs at least one class");
  }
  if ((model.weights.array() < 0.0).any()) {
    throw std::invalid_argument("weights must be non-negative");
  }
  for (Eigen::Index j = 0; j < model.weights.cols(); ++j) {
    if (std::abs(model.weights.col(j).sum() - 1.0) > kWeightColumnTol) {
      throw std::invalid_argument("weight column does not sum to 1");
    }
  }
}

void validate(const MixtureModel& model) {
  check_components(model.components);
  if (model.weights.size() != model.num_components()) {
    throw std::invalid_argument("weight vector must have one entry per component");
  }
  if ((model.weights.array() < 0.0).any()) {
    throw std::invalid_argument("weights must be non-negative");
  }
  if (std::abs(model.weights.sum() - 1.0) > kWeightColumnTol) {
    throw std::invalid_argument("weights do not sum to 1");
  }
}

void validate(const LabeledDataset& data, int num_classes) {
  if (data.samples.rows() != static_cast<Eigen::Index>(data.labels.size())) {
    throw std::invalid_argument("labels and samples must have equal length");
  }
  if (data.samples.rows() == 0) {
    throw std::invalid_argument("dataset is empty");
  }
  std::vector<bool> seen(static_cast<size_t>(num_classes), false);
  for (int c : data.labels) {
    if (c < 1 || c > num_classes) {
      throw std::invalid_argument("class label out of range");
    }
    seen[static_cast<size_t>(c - 1)] = true;
  }
  for (int i = 0; i < num_classes; ++i) {
    if (!seen[static_cast<size_t>(i)]) {
      throw std::invalid_argument("empty class: no samples labeled " +
                                  std::to_string(i + 1));
    }
  }
}

std::vector<std::vector<Eigen::Index>> class_index_sets(
    const std::vector<int>& labels, int num_classes) {
  std::vector<std::vector<Eigen::Index>> gamma(static_cast<size_t>(num_classes));
  for (Eigen::Index n = 0; n < static_cast<Eigen::Index>(labels.size()); ++n) {
    const int c = labels[static_cast<size_t>(n)];
    if (c < 1 || c > num_classes) {
      throw std::invalid_argument("class label out of range");
    }
    gamma[static_cast<size_t>(c - 1)].push_back(n);
  }
  return gamma;
}

SharedKernelEvaluator::SharedKernelEvaluator(const SharedKernelModel& model)
    : weights_(model.weights) {
  densities_.reserve(model.components.size());
  for (const auto& c : model.components) densities_.emplace_back(c);
}

double SharedKernelEvaluator::class_likelihood(
    const Eigen::Ref<const Eigen::VectorXd>& x, int cls) const {
  if (cls < 1 || cls > num_classes()) {
    throw std::invalid_argument("class out of range");
  }
  double sum = 0.0;
  for (size_t k = 0; k < densities_.size(); ++k) {
    sum += weights_(static_cast<Eigen::Index>(k), cls - 1) * densities_[k].pdf(x);
  }
  return sum;
}

double SharedKernelEvaluator::class_log_likelihood(
    const Eigen::Ref<const Eigen::VectorXd>& x, int cls) const {
  if (cls < 1 || cls > num_classes()) {
    throw std::invalid_argument("class out of range");
  }
  double max_term = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd terms(static_cast<Eigen::Index>(densities_.size()));
  for (size_t k = 0; k < densities_.size(); ++k) {
    const double w = weights_(static_cast<Eigen::Index>(k), cls - 1);
    const double t = w > 0.0 ? std::log(w) + densities_[k].log_pdf(x)
                             : -std::numeric_limits<double>::infinity();
    terms[static_cast<Eigen::Index>(k)] = t;
    max_term = std::max(max_term, t);
  }
  if (!std::isfinite(max_term)) return max_term;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < terms.size(); ++k) {
    acc += std::exp(terms[k] - max_term);
  }
  return max_term + std::log(acc);
}

double class_likelihood(const SharedKernelModel& model, const Eigen::VectorXd& x,
                        int cls) {
  return SharedKernelEvaluator(model).class_likelihood(x, cls);
}

double class_log_likelihood(const SharedKernelModel& model,
                            const Eigen::VectorXd& x, int cls) {
  return SharedKernelEvaluator(model).class_log_likelihood(x, cls);
}

Eigen::MatrixXd sample_shared_kernel(const SharedKernelModel& model, int cls,
                                     Eigen::Index n, RngStream& rng) {
  if (cls < 1 || cls > model.num_classes()) {
    throw std::invalid_argument("class out of range");
  }
  const int K = model.num_components();
  std::vector<GaussianDensity> densities;
  densities.reserve(static_cast<size_t>(K));
  for (const auto& c : model.components) densities.emplace_back(c);

  Eigen::MatrixXd out(n, model.dimension());
  for (Eigen::Index i = 0; i < n; ++i) {
    // invert the cumulative weights of the class column
    const double u = rng.uniform();
    int pick = K - 1;
    double cum = 0.0;
    for (int k = 0; k < K; ++k) {
      cum += model.weights(k, cls - 1);
      if (cum > u) {
        pick = k;
        break;
      }
    }
    out.row(i) = densities[static_cast<size_t>(pick)].sample(rng).transpose();
  }
  return out;
}

SharedKernelModel marginal_projection(const SharedKernelModel& model,
                                      const std::vector<Eigen::Index>& dims) {
  const Eigen::Index m = model.dimension();
  std::vector<bool> used(static_cast<size_t>(m), false);
  for (Eigen::Index d : dims) {
    if (d < 0 || d >= m) throw std::invalid_argument("projection index out of range");
    if (used[static_cast<size_t>(d)]) {
      throw std::invalid_argument("duplicate projection index");
    }
    used[static_cast<size_t>(d)] = true;
  }
  const Eigen::Index p = static_cast<Eigen::Index>(dims.size());
  SharedKernelModel out;
  out.weights = model.weights;
  out.components.reserve(model.components.size());
  for (const auto& c : model.components) {
    GaussianComponent g;
    g.mean.resize(p);
    g.covariance.resize(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
      g.mean[i] = c.mean[dims[static_cast<size_t>(i)]];
      for (Eigen::Index j = 0; j < p; ++j) {
        g.covariance(i, j) =
            c.covariance(dims[static_cast<size_t>(i)], dims[static_cast<size_t>(j)]);
      }
    }
    out.components.push_back(std::move(g));
  }
  return out;
}

}  // namespace skem
