#include "skem/gaussian.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace skem {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)
}

GaussianDensity::GaussianDensity(const Eigen::VectorXd& mean,
                                 const Eigen::MatrixXd& covariance)
    : mean_(mean) {
  const Eigen::Index m = mean.size();
  if (covariance.rows() != m || covariance.cols() != m) {
    throw std::invalid_argument("covariance dimensions do not match mean");
  }
  const Eigen::MatrixXd sym = 0.5 * (covariance + covariance.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw FactorizationError("covariance is not positive definite");
  }
  chol_lower_ = llt.matrixL();
  double log_det_half = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double d = chol_lower_(i, i);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw FactorizationError("covariance is not positive definite");
    }
    log_det_half += std::log(d);
  }
  log_norm_ = -0.5 * static_cast<double>(m) * kLog2Pi - log_det_half;
}

GaussianDensity::GaussianDensity(const GaussianComponent& comp)
    : GaussianDensity(comp.mean, comp.covariance) {}

double GaussianDensity::log_pdf(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != mean_.size()) {
    throw std::invalid_argument("point dimension does not match Gaussian");
  }
  const Eigen::VectorXd z =
      chol_lower_.triangularView<Eigen::Lower>().solve(x - mean_);
  return log_norm_ - 0.5 * z.squaredNorm();
}

double GaussianDensity::pdf(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return std::exp(log_pdf(x));
}

Eigen::VectorXd GaussianDensity::sample(RngStream& rng) const {
  return chol_lower_ * rng.normal_vector(mean_.size()) + mean_;
}

double gaussian_pdf(const Eigen::VectorXd& x, const GaussianComponent& comp) {
  return GaussianDensity(comp).pdf(x);
}

double log_gaussian_pdf(const Eigen::VectorXd& x, const GaussianComponent& comp) {
  return GaussianDensity(comp).log_pdf(x);
}

Eigen::VectorXd sample_component(const GaussianComponent& comp, RngStream& rng) {
  return GaussianDensity(comp).sample(rng);
}

}  // namespace skem
