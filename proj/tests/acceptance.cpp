// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Each check carries its tolerance inline.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "skem/classifier.hpp"
#include "skem/digits.hpp"
#include "skem/em.hpp"
#include "skem/experiment.hpp"
#include "skem/features.hpp"
#include "skem/idx_io.hpp"
#include "skem/metrics.hpp"
#include "skem/model_io.hpp"

using namespace skem;

namespace {

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw CheckFailure(what);
}

void require_close(double got, double want, double tol, const std::string& what) {
  if (!(std::abs(got - want) <= tol)) {
    std::ostringstream os;
    os << what << ": got " << got << ", wanted " << want << " +/- " << tol;
    throw CheckFailure(os.str());
  }
}

double scalar_gauss(double x, double mu, double s) {
  return std::exp(-(x - mu) * (x - mu) / (2.0 * s)) /
         std::sqrt(2.0 * std::numbers::pi * s);
}

SharedKernelModel reference_generator() {
  SharedKernelModel m;
  const Eigen::Matrix2d cov = 0.5 * Eigen::Matrix2d::Identity();
  m.components = {{Eigen::Vector2d(0, 2), cov},
                  {Eigen::Vector2d(3, 1), cov},
                  {Eigen::Vector2d(6, 3), cov}};
  m.weights.resize(3, 3);
  m.weights.col(0) << 0.1, 0.8, 0.1;
  m.weights.col(1) << 0.7, 0.1, 0.2;
  m.weights.col(2) << 0.3, 0.1, 0.6;
  return m;
}

LabeledDataset sample_labeled(const SharedKernelModel& gen, Eigen::Index per_class,
                              RngStream& rng) {
  const int L = gen.num_classes();
  LabeledDataset data;
  data.samples.resize(per_class * L, gen.dimension());
  data.labels.reserve(static_cast<size_t>(per_class * L));
  for (int c = 1; c <= L; ++c) {
    data.samples.middleRows((c - 1) * per_class, per_class) =
        sample_shared_kernel(gen, c, per_class, rng);
    for (Eigen::Index i = 0; i < per_class; ++i) data.labels.push_back(c);
  }
  return data;
}

// ---------------------------------------------------------------- criterion 1
// One SKEM pass on the 2-class, 5-sample, 2-component scalar instance must
// reproduce the closed-form updates to 1e-12.
void criterion_worked_example() {
  const double xs[6] = {0, 0.20, 0.45, 1.10, 0.35, 1.30};
  const std::vector<int> labels = {1, 1, 2, 1, 2};
  const double mu0[3] = {0, 0.30, 1.00};
  const double s0[3] = {0, 0.30, 0.30};

  // independent oracle: responsibilities and closed-form updates, written
  // term by term with plain scalar arithmetic
  double w[6][3];
  for (int n = 1; n <= 5; ++n) {
    const double t1 = 0.5 * scalar_gauss(xs[n], mu0[1], s0[1]);
    const double t2 = 0.5 * scalar_gauss(xs[n], mu0[2], s0[2]);
    w[n][1] = t1 / (t1 + t2);
    w[n][2] = t2 / (t1 + t2);
  }
  const double pi11 = (w[1][1] + w[2][1] + w[4][1]) / 3.0;
  const double pi21 = (w[1][2] + w[2][2] + w[4][2]) / 3.0;
  const double pi12 = (w[3][1] + w[5][1]) / 2.0;
  const double pi22 = (w[3][2] + w[5][2]) / 2.0;
  double mu[3], var[3];
  for (int k = 1; k <= 2; ++k) {
    double num = 0, den = 0;
    for (int n = 1; n <= 5; ++n) {
      num += w[n][k] * xs[n];
      den += w[n][k];
    }
    mu[k] = num / den;
    double vnum = 0;
    for (int n = 1; n <= 5; ++n) vnum += w[n][k] * (xs[n] - mu[k]) * (xs[n] - mu[k]);
    var[k] = vnum / den;
  }
  // Lagrange multipliers, implicitly: responsibility mass per class = l(i)
  double lam1 = 0, lam2 = 0;
  for (int n : {1, 2, 4}) lam1 += w[n][1] + w[n][2];
  for (int n : {3, 5}) lam2 += w[n][1] + w[n][2];
  require_close(lam1, 3.0, 1e-12, "lambda_1");
  require_close(lam2, 2.0, 1e-12, "lambda_2");

  LabeledDataset data;
  data.samples.resize(5, 1);
  data.samples << xs[1], xs[2], xs[3], xs[4], xs[5];
  data.labels = labels;
  SharedKernelModel init;
  init.components = {
      {Eigen::VectorXd::Constant(1, mu0[1]), Eigen::MatrixXd::Constant(1, 1, s0[1])},
      {Eigen::VectorXd::Constant(1, mu0[2]), Eigen::MatrixXd::Constant(1, 1, s0[2])}};
  init.weights = Eigen::MatrixXd::Constant(2, 2, 0.5);
  TrainingConfig cfg;
  cfg.num_components = 2;
  cfg.max_passes = 1;
  const auto [model, report] = skem_train(data, init, cfg);

  require_close(model.weights(0, 0), pi11, 1e-12, "pi_11");
  require_close(model.weights(1, 0), pi21, 1e-12, "pi_21");
  require_close(model.weights(0, 1), pi12, 1e-12, "pi_12");
  require_close(model.weights(1, 1), pi22, 1e-12, "pi_22");
  require_close(model.components[0].mean[0], mu[1], 1e-12, "mu_1");
  require_close(model.components[1].mean[0], mu[2], 1e-12, "mu_2");
  require_close(model.components[0].covariance(0, 0), var[1], 1e-12, "sigma^2_1");
  require_close(model.components[1].covariance(0, 0), var[2], 1e-12, "sigma^2_2");
}

// ---------------------------------------------------------------- criterion 2
// For L=1, SKEM and standard EM must produce exactly equal parameter
// trajectories on 20 seeded instances (N=200, M=2, K=3).
void criterion_reduction_equivalence() {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream data_rng(9000 + seed);
    Eigen::MatrixXd raw(200, 2);
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
      raw(i, 0) = data_rng.uniform();
      raw(i, 1) = data_rng.uniform();
    }
    TrainingConfig cfg;
    cfg.num_components = 3;
    cfg.max_passes = 12;
    RngStream init_rng(seed);
    const SharedKernelModel skem_init = init_parameters(cfg, 2, 1, init_rng);
    MixtureModel em_init;
    em_init.components = skem_init.components;
    em_init.weights = skem_init.weights.col(0);

    std::vector<SharedKernelModel> skem_passes, em_passes;
    TrainingDiagnostics sd, ed;
    sd.on_pass = [&](int, const SharedKernelModel& m) { skem_passes.push_back(m); };
    ed.on_pass = [&](int, const SharedKernelModel& m) { em_passes.push_back(m); };

    LabeledDataset labeled{raw, std::vector<int>(200, 1)};
    skem_train(labeled, skem_init, cfg, sd);
    em_train(raw, em_init, cfg, ed);

    require(skem_passes.size() == em_passes.size(),
            "pass counts differ at seed " + std::to_string(seed));
    for (size_t p = 0; p < skem_passes.size(); ++p) {
      const auto& a = skem_passes[p];
      const auto& b = em_passes[p];
      require(a.weights == b.weights,
              "weights differ at seed " + std::to_string(seed) + " pass " +
                  std::to_string(p + 1));
      for (size_t k = 0; k < a.components.size(); ++k) {
        require(a.components[k].mean == b.components[k].mean,
                "means differ at seed " + std::to_string(seed));
        require(a.components[k].covariance == b.components[k].covariance,
                "covariances differ at seed " + std::to_string(seed));
      }
    }
  }
}

// ---------------------------------------------------------------- criterion 3
// Total class-conditional log-likelihood non-decreasing (slack 1e-8) at
// every pass across 100 seeded random training problems.
void criterion_monotonicity() {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RngStream rng(4000 + seed);
    const int L = 1 + static_cast<int>(seed % 4);
    const int K = 1 + static_cast<int>((seed / 4) % 4);
    const int M = 1 + static_cast<int>(seed % 3);
    const Eigen::Index N = 120;
    LabeledDataset data;
    data.samples.resize(N, M);
    for (Eigen::Index i = 0; i < N; ++i) {
      for (int d = 0; d < M; ++d) data.samples(i, d) = rng.uniform();
      data.labels.push_back(1 + static_cast<int>(i) % L);
    }
    TrainingConfig cfg;
    cfg.num_components = K;
    cfg.max_passes = 12;
    RngStream init_rng(seed);
    const SharedKernelModel init = init_parameters(cfg, M, L, init_rng);
    const auto [model, report] = skem_train(data, init, cfg);

    std::vector<double> totals(static_cast<size_t>(report.passes_used), 0.0);
    for (const auto& hist : report.per_class_loglik_history) {
      require(hist.size() == totals.size(), "history length mismatch");
      for (size_t p = 0; p < hist.size(); ++p) totals[p] += hist[p];
    }
    for (size_t p = 1; p < totals.size(); ++p) {
      require(totals[p] >= totals[p - 1] - 1e-8,
              "log-likelihood decreased at seed " + std::to_string(seed) +
                  " pass " + std::to_string(p + 1));
    }
    require(report.final_total_loglik >= totals.back() - 1e-8,
            "final model log-likelihood below last pass at seed " +
                std::to_string(seed));
  }
}

// ---------------------------------------------------------------- criterion 4
// Data sampled from the reference 2-D generator (2000 per class), init as
// printed: converged means within 0.1 per coordinate after best component
// matching, weights within 0.05.
void criterion_parameter_recovery() {
  const SharedKernelModel truth = reference_generator();
  RngStream rng(0x63A);
  const LabeledDataset data = sample_labeled(truth, 2000, rng);

  SharedKernelModel init;
  init.components = {{Eigen::Vector2d(-1, 0), 2.0 * Eigen::Matrix2d::Identity()},
                     {Eigen::Vector2d(2, 1), 2.0 * Eigen::Matrix2d::Identity()},
                     {Eigen::Vector2d(7, 2), 2.0 * Eigen::Matrix2d::Identity()}};
  init.weights = Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0);
  TrainingConfig cfg;
  cfg.num_components = 3;
  cfg.max_passes = 50;
  const auto [model, report] = skem_train(data, init, cfg);

  // best component matching over all 3! permutations
  std::vector<int> perm = {0, 1, 2};
  std::vector<int> best_perm;
  double best_cost = 1e30;
  std::sort(perm.begin(), perm.end());
  do {
    double cost = 0.0;
    for (int k = 0; k < 3; ++k) {
      cost += (model.components[static_cast<size_t>(perm[static_cast<size_t>(k)])].mean -
               truth.components[static_cast<size_t>(k)].mean)
                  .norm();
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  for (int k = 0; k < 3; ++k) {
    const auto& est = model.components[static_cast<size_t>(best_perm[static_cast<size_t>(k)])];
    const Eigen::Vector2d diff = est.mean - truth.components[static_cast<size_t>(k)].mean;
    require(diff.cwiseAbs().maxCoeff() < 0.1,
            "mean " + std::to_string(k + 1) + " off by " +
                std::to_string(diff.cwiseAbs().maxCoeff()));
    for (int j = 0; j < 3; ++j) {
      const double got = model.weights(best_perm[static_cast<size_t>(k)], j);
      const double want = truth.weights(k, j);
      require_close(got, want, 0.05,
                    "weight (" + std::to_string(k + 1) + "," + std::to_string(j + 1) + ")");
    }
  }
}

// ---------------------------------------------------------------- criterion 5
// Digit pipeline, scaled Monte Carlo: 2Dx3D, K=10, 50 runs on 100 train /
// 250 test images per digit -> filtered mean accuracy >= 0.90, std <= 0.05.
void criterion_digit_pipeline() {
  const SegmentGeometry geom{2.0, 0.5, 1.0};
  RngStream train_rng(0x5eed0001), test_rng(0x5eed0002);
  const DigitDataset train_ds = generate_dataset(geom, 100, 500, train_rng);
  const DigitDataset test_ds = generate_dataset(geom, 250, 500, test_rng);
  const LabeledDataset train = build_feature_table(train_ds);
  const LabeledDataset test = build_feature_table(test_ds);

  ExperimentConfig cfg;
  cfg.variant = "2Dx3D";
  cfg.n_runs = 50;
  cfg.seed = 7;
  cfg.jobs = 2;
  cfg.training.num_components = 10;
  const ExperimentResult res = run_experiment(train, test, cfg);

  require(!res.filtered.empty, "no run beat the 0.5 accuracy floor");
  std::printf("        [criterion 5] accepted %d/50, mean %.4f, std %.4f\n",
              res.filtered.n_accepted, res.filtered.acc_mean, res.filtered.acc_std);
  require(res.filtered.acc_mean >= 0.90,
          "filtered mean accuracy " + std::to_string(res.filtered.acc_mean) +
              " below 0.90");
  require(res.filtered.acc_std <= 0.05,
          "filtered accuracy std " + std::to_string(res.filtered.acc_std) +
              " above 0.05");
}

// ---------------------------------------------------------------- criterion 6
// K-undercapacity law on the 3D variant: K=3 -> mean accuracy 0.30 +/- 0.03
// over 20 runs (all runs fall below the acceptance floor, so the mean is
// over every run); K=6 -> 0.60 +/- 0.05. Confusion matrices must show K
// recognized classes and the rest consistently misclassified.
void criterion_k_undercapacity() {
  const SegmentGeometry geom{2.0, 0.5, 1.0};
  RngStream train_rng(0x5eed0003), test_rng(0x5eed0004);
  const DigitDataset train_ds = generate_dataset(geom, 100, 500, train_rng);
  const DigitDataset test_ds = generate_dataset(geom, 250, 500, test_rng);
  const LabeledDataset train = build_feature_table(train_ds);
  const LabeledDataset test = build_feature_table(test_ds);

  auto recognized_classes = [](const ConfusionMatrix& cm) {
    int recognized = 0, misclassified = 0;
    for (int i = 0; i < cm.num_classes(); ++i) {
      const double frac = static_cast<double>(cm.counts(i, i)) /
                          static_cast<double>(cm.counts.row(i).sum());
      if (frac >= 0.5) ++recognized;
      if (frac <= 0.2) ++misclassified;
    }
    return std::pair<int, int>(recognized, misclassified);
  };

  ExperimentConfig cfg;
  cfg.variant = "3D";
  cfg.n_runs = 20;
  cfg.seed = 11;
  cfg.jobs = 2;

  cfg.training.num_components = 3;
  const ExperimentResult k3 = run_experiment(train, test, cfg);
  require(k3.n_diverged == 0, "K=3 runs diverged");
  // every run sits below the floor, so the reported mean covers all runs
  require(k3.filtered.empty, "K=3 runs unexpectedly beat the 0.5 floor");
  std::printf("        [criterion 6] K=3 mean %.4f (all runs)\n",
              k3.unfiltered.acc_mean);
  require_close(k3.unfiltered.acc_mean, 0.30, 0.03, "K=3 mean accuracy");
  const auto [rec3, mis3] = recognized_classes(k3.best_confusion);
  require(rec3 == 3, "K=3 best run recognized " + std::to_string(rec3) +
                         " classes, expected 3");
  require(mis3 == 7, "K=3 best run misclassified " + std::to_string(mis3) +
                         " classes, expected 7");

  cfg.training.num_components = 6;
  cfg.seed = 12;
  const ExperimentResult k6 = run_experiment(train, test, cfg);
  const AggregateSummary& stats6 = k6.filtered.empty ? k6.unfiltered : k6.filtered;
  std::printf("        [criterion 6] K=6 mean %.4f (%s runs)\n", stats6.acc_mean,
              k6.filtered.empty ? "all" : "accepted");
  require_close(stats6.acc_mean, 0.60, 0.05, "K=6 mean accuracy");
  const auto [rec6, mis6] = recognized_classes(k6.best_confusion);
  require(rec6 == 6, "K=6 best run recognized " + std::to_string(rec6) +
                         " classes, expected 6");
  require(mis6 == 4, "K=6 best run misclassified " + std::to_string(mis6) +
                         " classes, expected 4");
}

// ---------------------------------------------------------------- criterion 7
// Metrics oracle: the reference 5-D best-run matrix and a 2x2 hand count.
void criterion_metrics_oracle() {
  ConfusionMatrix cm;
  cm.counts.resize(10, 10);
  cm.counts << 169, 0, 0, 0, 0, 0, 0, 0, 81, 0,
      0, 250, 0, 0, 0, 0, 0, 0, 0, 0,
      0, 0, 250, 0, 0, 0, 0, 0, 0, 0,
      0, 0, 0, 250, 0, 0, 0, 0, 0, 0,
      0, 0, 0, 0, 250, 0, 0, 0, 0, 0,
      0, 0, 0, 0, 0, 250, 0, 0, 0, 0,
      0, 0, 0, 0, 0, 0, 250, 0, 0, 0,
      0, 0, 0, 0, 0, 0, 0, 250, 0, 0,
      29, 0, 0, 0, 0, 0, 1, 0, 220, 0,
      0, 0, 0, 0, 0, 0, 0, 0, 0, 250;
  for (int i = 0; i < 10; ++i) {
    require(cm.counts.row(i).sum() == 250, "row sum is not 250");
  }
  const RunSummary rs = metrics(cm);
  require(rs.accuracy == 2389.0 / 2500.0, "PA is not exactly 2389/2500");
  require_close(rs.accuracy, 0.9556, 1e-12, "PA");

  // independent hand computation of the mean IoU formula
  double miou = 0.0;
  for (int i = 0; i < 10; ++i) {
    long long row = 0, col = 0;
    for (int j = 0; j < 10; ++j) {
      row += cm.counts(i, j);
      col += cm.counts(j, i);
    }
    miou += static_cast<double>(cm.counts(i, i)) /
            static_cast<double>(row + col - cm.counts(i, i));
  }
  miou /= 10.0;
  require_close(rs.miou, miou, 1e-12, "MIoU vs hand computation");

  ConfusionMatrix small;
  small.counts.resize(2, 2);
  small.counts << 1, 1, 0, 1;
  const RunSummary srs = metrics(small);
  require(srs.accuracy == 2.0 / 3.0, "2x2 PA is not exactly 2/3");
  require(srs.miou == 0.5, "2x2 MIoU is not exactly 1/2");
}

// ---------------------------------------------------------------- criterion 8
// Invariant suites: normalization during training, exact quadrant masses,
// bit-exact IDX round trip, lossless model round trip, C(M,2) ellipse groups.
void criterion_invariants() {
  // responsibility and weight columns normalized after every step
  {
    const SharedKernelModel gen = reference_generator();
    RngStream rng(0xbeef);
    const LabeledDataset data = sample_labeled(gen, 150, rng);
    TrainingConfig cfg;
    cfg.num_components = 3;
    cfg.max_passes = 15;
    RngStream init_rng(8);
    const SharedKernelModel init = init_parameters(cfg, 2, 3, init_rng);
    TrainingDiagnostics diag;
    diag.on_responsibilities = [](int pass, const Eigen::MatrixXd& w) {
      for (Eigen::Index n = 0; n < w.cols(); ++n) {
        require(std::abs(w.col(n).sum() - 1.0) <= 1e-9,
                "responsibility column " + std::to_string(n) +
                    " not normalized at pass " + std::to_string(pass));
      }
    };
    diag.on_pass = [](int pass, const SharedKernelModel& m) {
      for (Eigen::Index j = 0; j < m.weights.cols(); ++j) {
        require(std::abs(m.weights.col(j).sum() - 1.0) <= 1e-9,
                "weight column " + std::to_string(j) + " not normalized at pass " +
                    std::to_string(pass));
      }
    };
    skem_train(data, init, cfg, diag);
  }

  // quadrant masses: integer counts sum exactly to the total
  {
    const SegmentGeometry geom{2.0, 0.5, 1.0};
    for (int digit = 0; digit <= 9; ++digit) {
      RngStream rng(600 + static_cast<std::uint64_t>(digit));
      const DigitImage img = render_digit(geom, digit, 300, rng);
      const auto q = quadrant_mass(img);
      long long on = 0, quadrant_total = 0;
      long long counts[4] = {0, 0, 0, 0};
      for (int r = 0; r < kImageSize; ++r) {
        for (int c = 0; c < kImageSize; ++c) {
          if (img.at(r, c) == 0) continue;
          ++on;
          const int idx = r < 14 ? (c >= 14 ? 0 : 1) : (c < 14 ? 2 : 3);
          ++counts[idx];
        }
      }
      for (int i = 0; i < 4; ++i) quadrant_total += counts[i];
      require(quadrant_total == on, "quadrant partition lost pixels");
      for (int i = 0; i < 4; ++i) {
        require(q[static_cast<size_t>(i)] ==
                    static_cast<double>(counts[i]) / static_cast<double>(on),
                "quadrant fraction is not count/total");
      }
    }
  }

  // IDX round trip, bit-exact
  {
    namespace fs = std::filesystem;
    const SegmentGeometry geom;
    RngStream rng(0xacce55);
    const DigitDataset ds = generate_dataset(geom, 4, 30, rng);
    const auto img_path = fs::temp_directory_path() / "skem_acc_images.idx3";
    const auto lab_path = fs::temp_directory_path() / "skem_acc_labels.idx1";
    write_idx(ds, img_path.string(), lab_path.string());
    const DigitDataset back = read_idx(img_path.string(), lab_path.string());
    fs::remove(img_path);
    fs::remove(lab_path);
    require(back.images.size() == ds.images.size(), "IDX image count changed");
    for (size_t i = 0; i < ds.images.size(); ++i) {
      require(back.images[i].pixels == ds.images[i].pixels, "IDX pixels changed");
      require(back.images[i].digit == ds.images[i].digit, "IDX label changed");
    }
  }

  // model file round trip, lossless to 17 significant digits
  {
    const SharedKernelModel gen = reference_generator();
    RngStream rng(0x10ad);
    const LabeledDataset data = sample_labeled(gen, 200, rng);
    TrainingConfig cfg;
    cfg.num_components = 3;
    cfg.max_passes = 20;
    RngStream init_rng(4);
    const auto [model, report] =
        skem_train(data, init_parameters(cfg, 2, 3, init_rng), cfg);
    std::stringstream buf;
    save_model(model, buf);
    const SharedKernelModel back = load_model(buf);
    require(back.weights == model.weights, "weights not lossless");
    for (size_t k = 0; k < model.components.size(); ++k) {
      require(back.components[k].mean == model.components[k].mean,
              "means not lossless");
      require(back.components[k].covariance == model.components[k].covariance,
              "covariances not lossless");
    }
  }

  // ellipse export: exactly C(M,2) projection groups
  {
    for (const int m : {4, 6}) {
      SharedKernelModel model;
      model.components = {
          {Eigen::VectorXd::Zero(m), Eigen::MatrixXd::Identity(m, m)},
          {Eigen::VectorXd::Ones(m), 2.0 * Eigen::MatrixXd::Identity(m, m)}};
      model.weights = Eigen::MatrixXd::Constant(2, 2, 0.5);
      const auto recs = export_ellipses(model, {});
      std::set<std::pair<int, int>> pairs;
      for (const auto& r : recs) pairs.insert({r.dim1, r.dim2});
      const size_t expected = static_cast<size_t>(m * (m - 1) / 2);
      require(pairs.size() == expected, "projection group count is not C(M,2)");
      require(recs.size() == expected * 2 * 2, "record count mismatch");
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"criterion 1: one-pass worked-example closed forms (1e-12)",
       criterion_worked_example},
      {"criterion 2: L=1 SKEM equals standard EM exactly, 20 seeds",
       criterion_reduction_equivalence},
      {"criterion 3: log-likelihood monotone over 100 seeded problems",
       criterion_monotonicity},
      {"criterion 4: parameter recovery on the 2-D reference generator",
       criterion_parameter_recovery},
      {"criterion 5: digit pipeline 2Dx3D K=10, 50 runs, mean >= 0.90",
       criterion_digit_pipeline},
      {"criterion 6: K-undercapacity at K=3 (0.30) and K=6 (0.60)",
       criterion_k_undercapacity},
      {"criterion 7: metrics oracle (reference matrix and 2x2 hand count)",
       criterion_metrics_oracle},
      {"criterion 8: invariant suites (normalization, quadrants, IDX, model "
       "file, ellipses)",
       criterion_invariants},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    try {
      c.fn();
      std::printf("PASS  %s\n", c.name);
    } catch (const std::exception& e) {
      std::printf("FAIL  %s\n      %s\n", c.name, e.what());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  } else {
    std::printf("all %zu criteria passed\n", criteria.size());
  }
  return failures == 0 ? 0 : 1;
}
