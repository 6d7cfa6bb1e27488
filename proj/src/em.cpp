#include "skem/em.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace skem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDegenerateResponsibility = 1e-12;

void write_trace(std::ostream* trace, int pass, const std::vector<double>& ll,
                 double max_delta) {
  if (!trace) return;
  char buf[64];
  *trace << pass;
  for (double v : ll) {
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    *trace << '\t' << buf;
  }
  std::snprintf(buf, sizeof(buf), "%.10g", max_delta);
  *trace << '\t' << buf << '\n';
}

std::vector<GaussianDensity> factor_components(
    const std::vector<GaussianComponent>& components, int pass) {
  std::vector<GaussianDensity> out;
  out.reserve(components.size());
  for (size_t k = 0; k < components.size(); ++k) {
    try {
      out.emplace_back(components[k]);
    } catch (const FactorizationError&) {
      throw TrainingError(
          "covariance factorization failed for component " + std::to_string(k + 1),
          pass);
    }
  }
  return out;
}

// Responsibilities for one sample in log domain (log-sum-exp), plus the
// log of the mixture density. `col_weights` is the class weight column.
double log_domain_column(const Eigen::VectorXd& col_weights,
                         const Eigen::VectorXd& log_g,
                         Eigen::Ref<Eigen::VectorXd> w_out) {
  const Eigen::Index K = col_weights.size();
  Eigen::VectorXd terms(K);
  double max_term = -kInf;
  for (Eigen::Index k = 0; k < K; ++k) {
    terms[k] = col_weights[k] > 0.0 ? std::log(col_weights[k]) + log_g[k] : -kInf;
    max_term = std::max(max_term, terms[k]);
  }
  if (!std::isfinite(max_term)) {
    throw std::runtime_error("all mixture terms vanished for a sample");
  }
  double acc = 0.0;
  for (Eigen::Index k = 0; k < K; ++k) acc += std::exp(terms[k] - max_term);
  const double log_denom = max_term + std::log(acc);
  for (Eigen::Index k = 0; k < K; ++k) {
    w_out[k] = col_weights[k] > 0.0 ? std::exp(terms[k] - log_denom) : 0.0;
  }
  return log_denom;
}

}  // namespace

SharedKernelModel init_parameters(const TrainingConfig& cfg, Eigen::Index dimension,
                                  int num_classes, RngStream& rng) {
  if (cfg.num_components < 1 || dimension < 1 || num_classes < 1) {
    throw std::invalid_argument("num_components, dimension and num_classes must be >= 1");
  }
  if (cfg.init_cov_scale <= 0.0) {
    throw std::invalid_argument("init_cov_scale must be positive");
  }
  SharedKernelModel model;
  model.components.resize(static_cast<size_t>(cfg.num_components));
  for (auto& comp : model.components) {
    comp.mean.resize(dimension);
    for (Eigen::Index d = 0; d < dimension; ++d) {
      comp.mean[d] = cfg.init_mean_low +
                     (cfg.init_mean_high - cfg.init_mean_low) * rng.uniform();
    }
    comp.covariance =
        cfg.init_cov_scale * Eigen::MatrixXd::Identity(dimension, dimension);
  }
  model.weights = Eigen::MatrixXd::Constant(cfg.num_components, num_classes,
                                            1.0 / cfg.num_components);
  return model;
}

std::pair<SharedKernelModel, TrainingReport> skem_train(
    const LabeledDataset& data, const SharedKernelModel& init,
    const TrainingConfig& cfg, const TrainingDiagnostics& diag) {
  const Eigen::Index N = data.samples.rows();
  const Eigen::Index M = data.samples.cols();
  const int K = init.num_components();
  const int L = init.num_classes();
  if (cfg.max_passes < 1) throw std::invalid_argument("max_passes must be >= 1");
  if (cfg.loglik_tolerance <= 0.0) {
    throw std::invalid_argument("loglik_tolerance must be positive");
  }
  if (init.dimension() != M) {
    throw std::invalid_argument("initial model dimension does not match data");
  }
  validate(data, L);
  const auto gamma = class_index_sets(data.labels, L);

  std::vector<Eigen::VectorXd> xs(static_cast<size_t>(N));
  for (Eigen::Index n = 0; n < N; ++n) {
    xs[static_cast<size_t>(n)] = data.samples.row(n).transpose();
  }

  SharedKernelModel model = init;
  TrainingReport report;
  report.per_class_loglik_history.assign(static_cast<size_t>(L), {});

  Eigen::MatrixXd W(K, N);
  std::vector<double> ll(static_cast<size_t>(L), 0.0);
  std::vector<double> prev_ll(static_cast<size_t>(L), -kInf);

  int pass = 0;
  for (pass = 1; pass <= cfg.max_passes; ++pass) {
    const auto densities = factor_components(model.components, pass);

    Eigen::MatrixXd G(K, N);
    for (Eigen::Index n = 0; n < N; ++n) {
      for (int k = 0; k < K; ++k) {
        G(k, n) = densities[static_cast<size_t>(k)].pdf(xs[static_cast<size_t>(n)]);
      }
    }

    // E-step in linear domain, exactly as the update equations read.
    std::fill(ll.begin(), ll.end(), 0.0);
    bool rescale = false;
    for (Eigen::Index n = 0; n < N && !rescale; ++n) {
      const int c = data.labels[static_cast<size_t>(n)] - 1;
      double denom = 0.0;
      for (int k = 0; k < K; ++k) {
        W(k, n) = model.weights(k, c) * G(k, n);
        denom += W(k, n);
      }
      if (denom == 0.0 || !std::isfinite(denom)) {
        rescale = true;
        break;
      }
      W.col(n) /= denom;
      ll[static_cast<size_t>(c)] += std::log(denom);
    }
    if (rescale) {
      // Some denominator under- or overflowed; redo the pass with
      // log-sum-exp responsibilities.
      std::fill(ll.begin(), ll.end(), 0.0);
      Eigen::MatrixXd logG(K, N);
      for (Eigen::Index n = 0; n < N; ++n) {
        for (int k = 0; k < K; ++k) {
          logG(k, n) =
              densities[static_cast<size_t>(k)].log_pdf(xs[static_cast<size_t>(n)]);
        }
      }
      for (Eigen::Index n = 0; n < N; ++n) {
        const int c = data.labels[static_cast<size_t>(n)] - 1;
        const double log_denom =
            log_domain_column(model.weights.col(c), logG.col(n), W.col(n));
        ll[static_cast<size_t>(c)] += log_denom;
      }
    }
    if (diag.on_responsibilities) diag.on_responsibilities(pass, W);

    // M-step: class weight columns, then shared means, then shared
    // covariances pooled over all samples.
    for (int i = 0; i < L; ++i) {
      const auto& idx = gamma[static_cast<size_t>(i)];
      for (int k = 0; k < K; ++k) {
        double s = 0.0;
        for (Eigen::Index n : idx) s += W(k, n);
        model.weights(k, i) = s / static_cast<double>(idx.size());
      }
    }

    Eigen::VectorXd total(K);
    for (int k = 0; k < K; ++k) {
      double s = 0.0;
      for (Eigen::Index n = 0; n < N; ++n) s += W(k, n);
      total[k] = s;
      if (s < kDegenerateResponsibility * static_cast<double>(N)) {
        throw DivergenceError(
            "component " + std::to_string(k + 1) + " lost all responsibility",
            pass);
      }
    }
    for (int k = 0; k < K; ++k) {
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(M);
      for (Eigen::Index n = 0; n < N; ++n) acc += W(k, n) * xs[static_cast<size_t>(n)];
      model.components[static_cast<size_t>(k)].mean = acc / total[k];
    }
    for (int k = 0; k < K; ++k) {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(M, M);
      const Eigen::VectorXd& mu = model.components[static_cast<size_t>(k)].mean;
      for (Eigen::Index n = 0; n < N; ++n) {
        const Eigen::VectorXd d = xs[static_cast<size_t>(n)] - mu;
        acc.noalias() += W(k, n) * (d * d.transpose());
      }
      model.components[static_cast<size_t>(k)].covariance = acc / total[k];
    }
    if (diag.on_pass) diag.on_pass(pass, model);

    double max_delta = kInf;
    if (pass > 1) {
      max_delta = 0.0;
      for (int i = 0; i < L; ++i) {
        max_delta = std::max(
            max_delta, std::abs(ll[static_cast<size_t>(i)] - prev_ll[static_cast<size_t>(i)]));
      }
    }
    for (int i = 0; i < L; ++i) {
      report.per_class_loglik_history[static_cast<size_t>(i)].push_back(
          ll[static_cast<size_t>(i)]);
    }
    write_trace(diag.trace, pass, ll, max_delta);
    prev_ll = ll;
    if (pass > 1 && max_delta < cfg.loglik_tolerance) {
      report.converged = true;
      break;
    }
  }
  report.passes_used = std::min(pass, cfg.max_passes);
  report.final_total_loglik = total_loglikelihood(model, data);
  return {std::move(model), std::move(report)};
}

std::pair<MixtureModel, TrainingReport> em_train(const Eigen::MatrixXd& data,
                                                 const MixtureModel& init,
                                                 const TrainingConfig& cfg,
                                                 const TrainingDiagnostics& diag) {
  const Eigen::Index N = data.rows();
  const Eigen::Index M = data.cols();
  const int K = init.num_components();
  if (cfg.max_passes < 1) throw std::invalid_argument("max_passes must be >= 1");
  if (N < K) throw std::invalid_argument("need at least K samples");
  if (init.dimension() != M) {
    throw std::invalid_argument("initial model dimension does not match data");
  }

  std::vector<Eigen::VectorXd> xs(static_cast<size_t>(N));
  for (Eigen::Index n = 0; n < N; ++n) {
    xs[static_cast<size_t>(n)] = data.row(n).transpose();
  }

  MixtureModel model = init;
  TrainingReport report;
  report.per_class_loglik_history.assign(1, {});

  Eigen::MatrixXd W(K, N);
  std::vector<double> ll(1, 0.0);
  double prev_ll = -kInf;

  int pass = 0;
  for (pass = 1; pass <= cfg.max_passes; ++pass) {
    const auto densities = factor_components(model.components, pass);

    Eigen::MatrixXd G(K, N);
    for (Eigen::Index n = 0; n < N; ++n) {
      for (int k = 0; k < K; ++k) {
        G(k, n) = densities[static_cast<size_t>(k)].pdf(xs[static_cast<size_t>(n)]);
      }
    }

    ll[0] = 0.0;
    bool rescale = false;
    for (Eigen::Index n = 0; n < N && !rescale; ++n) {
      double denom = 0.0;
      for (int k = 0; k < K; ++k) {
        W(k, n) = model.weights[k] * G(k, n);
        denom += W(k, n);
      }
      if (denom == 0.0 || !std::isfinite(denom)) {
        rescale = true;
        break;
      }
      W.col(n) /= denom;
      ll[0] += std::log(denom);
    }
    if (rescale) {
      ll[0] = 0.0;
      Eigen::MatrixXd logG(K, N);
      for (Eigen::Index n = 0; n < N; ++n) {
        for (int k = 0; k < K; ++k) {
          logG(k, n) =
              densities[static_cast<size_t>(k)].log_pdf(xs[static_cast<size_t>(n)]);
        }
      }
      for (Eigen::Index n = 0; n < N; ++n) {
        ll[0] += log_domain_column(model.weights, logG.col(n), W.col(n));
      }
    }
    if (diag.on_responsibilities) diag.on_responsibilities(pass, W);

    Eigen::VectorXd total(K);
    for (int k = 0; k < K; ++k) {
      double s = 0.0;
      for (Eigen::Index n = 0; n < N; ++n) s += W(k, n);
      total[k] = s;
      if (s < kDegenerateResponsibility * static_cast<double>(N)) {
        throw DivergenceError(
            "component " + std::to_string(k + 1) + " lost all responsibility",
            pass);
      }
    }
    for (int k = 0; k < K; ++k) {
      model.weights[k] = total[k] / static_cast<double>(N);
    }
    for (int k = 0; k < K; ++k) {
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(M);
      for (Eigen::Index n = 0; n < N; ++n) acc += W(k, n) * xs[static_cast<size_t>(n)];
      model.components[static_cast<size_t>(k)].mean = acc / total[k];
    }
    for (int k = 0; k < K; ++k) {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(M, M);
      const Eigen::VectorXd& mu = model.components[static_cast<size_t>(k)].mean;
      for (Eigen::Index n = 0; n < N; ++n) {
        const Eigen::VectorXd d = xs[static_cast<size_t>(n)] - mu;
        acc.noalias() += W(k, n) * (d * d.transpose());
      }
      model.components[static_cast<size_t>(k)].covariance = acc / total[k];
    }
    if (diag.on_pass) {
      SharedKernelModel as_shared;
      as_shared.components = model.components;
      as_shared.weights = model.weights;
      diag.on_pass(pass, as_shared);
    }

    double max_delta = kInf;
    if (pass > 1) max_delta = std::abs(ll[0] - prev_ll);
    report.per_class_loglik_history[0].push_back(ll[0]);
    write_trace(diag.trace, pass, ll, max_delta);
    prev_ll = ll[0];
    if (pass > 1 && max_delta < cfg.loglik_tolerance) {
      report.converged = true;
      break;
    }
  }
  report.passes_used = std::min(pass, cfg.max_passes);

  SharedKernelModel as_shared;
  as_shared.components = model.components;
  as_shared.weights = model.weights;
  LabeledDataset wrapped{data, std::vector<int>(static_cast<size_t>(N), 1)};
  report.final_total_loglik = total_loglikelihood(as_shared, wrapped);
  return {std::move(model), std::move(report)};
}

double total_loglikelihood(const SharedKernelModel& model,
                           const LabeledDataset& data) {
  const int L = model.num_classes();
  validate(data, L);
  if (data.dimension() != model.dimension()) {
    throw std::invalid_argument("data dimension does not match model");
  }
  SharedKernelEvaluator eval(model);
  const auto gamma = class_index_sets(data.labels, L);
  double total = 0.0;
  for (int i = 0; i < L; ++i) {
    for (Eigen::Index n : gamma[static_cast<size_t>(i)]) {
      total += eval.class_log_likelihood(data.samples.row(n).transpose(), i + 1);
    }
  }
  return total;
}

}  // namespace skem
