#pragma once

#include <stdexcept>

#include <Eigen/Core>

#include "skem/rng.hpp"

namespace skem {

/// One Gaussian kernel: mean vector and full covariance matrix.
struct GaussianComponent {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;

  Eigen::Index dimension() const { return mean.size(); }
};

/// Covariance could not be Cholesky-factored (not positive definite).
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cholesky-factored Gaussian, frozen at construction. The covariance is
// symmetrized as 0.5*(P + P^T) before factoring to absorb round-off
// asymmetry; an indefinite or singular matrix throws FactorizationError.
// Density evaluation goes through triangular solves, never an explicit
// inverse, and the log-determinant comes from the factor diagonal.
class GaussianDensity {
 public:
  explicit GaussianDensity(const GaussianComponent& comp);
  GaussianDensity(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance);

  double log_pdf(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double pdf(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// One draw L*z + mu with z standard normal.
  Eigen::VectorXd sample(RngStream& rng) const;

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cholesky_lower() const { return chol_lower_; }
  Eigen::Index dimension() const { return mean_.size(); }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd chol_lower_;
  double log_norm_;  // -M/2 log(2pi) - sum_i log L_ii
};

double gaussian_pdf(const Eigen::VectorXd& x, const GaussianComponent& comp);
double log_gaussian_pdf(const Eigen::VectorXd& x, const GaussianComponent& comp);
Eigen::VectorXd sample_component(const GaussianComponent& comp, RngStream& rng);

}  // namespace skem
