#pragma once

#include <vector>

#include <Eigen/Core>

#include "skem/gaussian.hpp"
#include "skem/rng.hpp"

namespace skem {

// Shared kernel model: K Gaussian kernels common to all classes, plus a
// K x L weight matrix whose column j holds the class-j mixing weights
// (each column sums to 1). Class labels are 1-based values 1..L
// throughout; matrix/vector positions are 0-based as usual.
struct SharedKernelModel {
  std::vector<GaussianComponent> components;
  Eigen::MatrixXd weights;  // K x L

  int num_components() const { return static_cast<int>(components.size()); }
  int num_classes() const { return static_cast<int>(weights.cols()); }
  Eigen::Index dimension() const {
    return components.empty() ? 0 : components.front().dimension();
  }
};

/// Plain unsupervised Gaussian mixture (weights sum to 1).
struct MixtureModel {
  std::vector<GaussianComponent> components;
  Eigen::VectorXd weights;  // K

  int num_components() const { return static_cast<int>(components.size()); }
  Eigen::Index dimension() const {
    return components.empty() ? 0 : components.front().dimension();
  }
};

/// N samples (rows) with class labels in 1..L.
struct LabeledDataset {
  Eigen::MatrixXd samples;  // N x M
  std::vector<int> labels;  // length N, values 1..L

  Eigen::Index size() const { return samples.rows(); }
  Eigen::Index dimension() const { return samples.cols(); }
  int num_classes() const;
};

/// Throws std::invalid_argument (or FactorizationError) on any broken invariant.
void validate(const SharedKernelModel& model);
void validate(const MixtureModel& model);

/// Checks labels/sample agreement and that every class 1..num_classes occurs.
void validate(const LabeledDataset& data, int num_classes);

/// Index sets Gamma_i (ascending sample order), one per class 1..num_classes.
std::vector<std::vector<Eigen::Index>> class_index_sets(
    const std::vector<int>& labels, int num_classes);

// Evaluator with all kernels pre-factored; use it when scoring many points
// against the same model.
class SharedKernelEvaluator {
 public:
  explicit SharedKernelEvaluator(const SharedKernelModel& model);

  /// Sum_k pi_{k,cls} N(x; mu_k, P_k), linear domain.
  double class_likelihood(const Eigen::Ref<const Eigen::VectorXd>& x, int cls) const;

  /// Log of the same, via log-sum-exp.
  double class_log_likelihood(const Eigen::Ref<const Eigen::VectorXd>& x, int cls) const;

  const std::vector<GaussianDensity>& densities() const { return densities_; }
  int num_classes() const { return static_cast<int>(weights_.cols()); }
  Eigen::Index dimension() const { return densities_.front().dimension(); }

 private:
  Eigen::MatrixXd weights_;
  std::vector<GaussianDensity> densities_;
};

double class_likelihood(const SharedKernelModel& model,
                        const Eigen::VectorXd& x, int cls);
double class_log_likelihood(const SharedKernelModel& model,
                            const Eigen::VectorXd& x, int cls);

/// n i.i.d. draws (rows) from the class-conditional mixture of `cls`.
Eigen::MatrixXd sample_shared_kernel(const SharedKernelModel& model, int cls,
                                     Eigen::Index n, RngStream& rng);

/// Model restricted to the given distinct 0-based dimensions; weights unchanged.
SharedKernelModel marginal_projection(const SharedKernelModel& model,
                                      const std::vector<Eigen::Index>& dims);

}  // namespace skem
