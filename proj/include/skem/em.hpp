#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "skem/model.hpp"
#include "skem/rng.hpp"

namespace skem {

struct TrainingConfig {
  int num_components = 10;       // K
  int max_passes = 50;           // NP
  double loglik_tolerance = 0.1; // per-class stationarity tolerance
  std::uint64_t seed = 0;
  double init_mean_low = 0.0;
  double init_mean_high = 1.0;
  double init_cov_scale = 0.3;   // initial covariance = scale * I
};

struct TrainingReport {
  int passes_used = 0;
  // per_class_loglik_history[i] holds the class-(i+1) incomplete-data
  // log-likelihood evaluated at the start of each pass.
  std::vector<std::vector<double>> per_class_loglik_history;
  bool converged = false;
  double final_total_loglik = 0.0;  // log-likelihood of the returned model
};

// Optional observability hooks. `trace` receives one tab-separated line per
// pass: pass number, per-class log-likelihood, max |delta|. The callbacks
// fire after the E-step (responsibilities, K x N) and after the M-step
// (updated model); em_train reports its mixture as a 1-class shared model.
struct TrainingDiagnostics {
  std::ostream* trace = nullptr;
  std::function<void(int pass, const SharedKernelModel&)> on_pass;
  std::function<void(int pass, const Eigen::MatrixXd&)> on_responsibilities;
};

/// Training failed at a specific pass (factorization or degeneracy).
class TrainingError : public std::runtime_error {
 public:
  TrainingError(const std::string& msg, int pass)
      : std::runtime_error(msg + " (pass " + std::to_string(pass) + ")"),
        pass_(pass) {}
  int pass() const { return pass_; }

 private:
  int pass_;
};

/// A kernel lost essentially all responsibility mass.
class DivergenceError : public TrainingError {
 public:
  using TrainingError::TrainingError;
};

/// Random initialization: means i.i.d. uniform on [low, high]^M, every
/// covariance = init_cov_scale * I, every weight = 1/K.
SharedKernelModel init_parameters(const TrainingConfig& cfg, Eigen::Index dimension,
                                  int num_classes, RngStream& rng);

/// Supervised shared kernel EM. Returns the model at termination (after the
/// M-step of the final pass) and the convergence bookkeeping.
std::pair<SharedKernelModel, TrainingReport> skem_train(
    const LabeledDataset& data, const SharedKernelModel& init,
    const TrainingConfig& cfg, const TrainingDiagnostics& diag = {});

/// Standard unsupervised EM for a Gaussian mixture.
std::pair<MixtureModel, TrainingReport> em_train(
    const Eigen::MatrixXd& data, const MixtureModel& init,
    const TrainingConfig& cfg, const TrainingDiagnostics& diag = {});

/// Sum over classes and their samples of the class-conditional
/// log-likelihood, computed in log domain.
double total_loglikelihood(const SharedKernelModel& model,
                           const LabeledDataset& data);

}  // namespace skem
