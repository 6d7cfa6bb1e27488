#include "skem/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

namespace skem {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_labels_in_range(const LabeledDataset& data, int num_classes) {
  if (data.samples.rows() != static_cast<Eigen::Index>(data.labels.size())) {
    throw std::invalid_argument("labels and samples must have equal length");
  }
  for (int c : data.labels) {
    if (c < 1 || c > num_classes) {
      throw std::invalid_argument("test label out of range");
    }
  }
}

}  // namespace

CompositeModel train_composite(const std::vector<LabeledDataset>& group_tables,
                               const VariantSpec& spec, const TrainingConfig& cfg,
                               RngStream& rng, const TrainingDiagnostics& diag) {
  if (group_tables.size() != spec.groups.size()) {
    throw std::invalid_argument("group tables do not match the variant spec");
  }
  CompositeModel composite;
  composite.dither = spec.dither;
  for (size_t g = 0; g < group_tables.size(); ++g) {
    const LabeledDataset& table = group_tables[g];
    const int L = table.num_classes();
    SharedKernelModel init = init_parameters(cfg, table.dimension(), L, rng);
    auto [model, report] = skem_train(table, init, cfg, diag);
    (void)report;
    composite.groups.push_back({spec.groups[g], std::move(model)});
  }
  return composite;
}

ExperimentResult run_experiment(
    const LabeledDataset& train_table, const LabeledDataset& test_table,
    const ExperimentConfig& cfg,
    const std::function<void(const RunRecord&)>& progress) {
  if (cfg.n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  const VariantSpec& spec = variant_by_name(cfg.variant);
  const int L = train_table.num_classes();
  validate(train_table, L);
  check_labels_in_range(test_table, L);

  RngStream base(cfg.seed);
  RngStream train_dither = base.derive(kTrainDitherStream);
  RngStream test_dither = base.derive(kTestDitherStream);
  const std::vector<LabeledDataset> train_groups =
      select_variant(train_table, spec, train_dither);
  const LabeledDataset test_full =
      spec.dither ? dither_table(test_table, kDitherSigma, test_dither) : test_table;

  const ClassPriors priors = ClassPriors::uniform(L);
  const int n = cfg.n_runs;

  if (test_full.samples.cols() != train_table.samples.cols()) {
    throw std::invalid_argument("train and test tables disagree on column count");
  }

  ExperimentResult result;
  result.runs.resize(static_cast<size_t>(n));
  std::vector<ConfusionMatrix> cms(static_cast<size_t>(n));
  std::vector<CompositeModel> models(static_cast<size_t>(n));

  auto run_one = [&](int r) {
    RunRecord& rec = result.runs[static_cast<size_t>(r)];
    rec.run_index = r;
    rec.seed = cfg.seed + static_cast<std::uint64_t>(r);
    RngStream rng(rec.seed);
    try {
      std::vector<TrainingReport> reports;
      CompositeModel composite;
      composite.dither = spec.dither;
      for (size_t g = 0; g < train_groups.size(); ++g) {
        const LabeledDataset& table = train_groups[g];
        SharedKernelModel init =
            init_parameters(cfg.training, table.dimension(), L, rng);
        auto [model, report] = skem_train(table, init, cfg.training);
        composite.groups.push_back({spec.groups[g], std::move(model)});
        reports.push_back(std::move(report));
      }
      const std::vector<int> preds =
          classify_batch(composite, test_full.samples, priors);
      ConfusionMatrix cm = confusion(test_table.labels, preds, L);
      const RunSummary rs = metrics(cm);
      rec.accuracy = rs.accuracy;
      rec.miou = rs.miou;
      rec.converged = true;
      for (const auto& rep : reports) rec.converged = rec.converged && rep.converged;
      cms[static_cast<size_t>(r)] = std::move(cm);
      models[static_cast<size_t>(r)] = std::move(composite);
    } catch (const std::exception& e) {
      rec.diverged = true;
      rec.error = e.what();
    }
    if (progress) {
      static std::mutex mtx;
      const std::lock_guard<std::mutex> lock(mtx);
      progress(rec);
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    for (int r = 0; r < n; ++r) run_one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const int r = next.fetch_add(1);
          if (r >= n) break;
          run_one(r);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<RunSummary> usable;
  for (int r = 0; r < n; ++r) {
    const RunRecord& rec = result.runs[static_cast<size_t>(r)];
    if (rec.diverged) {
      ++result.n_diverged;
      continue;
    }
    RunSummary rs;
    rs.accuracy = rec.accuracy;
    rs.miou = rec.miou;
    rs.converged = rec.converged;
    usable.push_back(rs);
    if (result.best_run_index < 0 ||
        rec.accuracy > result.runs[static_cast<size_t>(result.best_run_index)].accuracy) {
      result.best_run_index = r;
    }
  }
  if (!usable.empty()) {
    auto [filtered, unfiltered] = aggregate(usable, cfg.accuracy_floor);
    filtered.n_runs = n;
    unfiltered.n_runs = n;
    result.filtered = filtered;
    result.unfiltered = unfiltered;
  } else {
    result.filtered.n_runs = n;
    result.filtered.empty = true;
    result.unfiltered.n_runs = n;
    result.unfiltered.empty = true;
  }
  if (result.best_run_index >= 0) {
    result.best_confusion = cms[static_cast<size_t>(result.best_run_index)];
    result.best_model = models[static_cast<size_t>(result.best_run_index)];
  }
  return result;
}

std::vector<KStudyCell> run_kstudy(
    const LabeledDataset& train_table, const LabeledDataset& test_table,
    const std::vector<std::string>& variants, const std::vector<int>& k_values,
    const ExperimentConfig& base_cfg,
    const std::function<void(const KStudyCell&)>& cell_done) {
  if (variants.empty() || k_values.empty()) {
    throw std::invalid_argument("kstudy needs at least one variant and one K");
  }
  for (int k : k_values) {
    if (k < 1) throw std::invalid_argument("K values must be >= 1");
  }
  std::vector<KStudyCell> cells;
  int cell_index = 0;
  for (const auto& variant : variants) {
    for (int k : k_values) {
      ExperimentConfig cfg = base_cfg;
      cfg.variant = variant;
      cfg.training.num_components = k;
      cfg.seed = base_cfg.seed +
                 static_cast<std::uint64_t>(cell_index) *
                     static_cast<std::uint64_t>(base_cfg.n_runs);
      const ExperimentResult res = run_experiment(train_table, test_table, cfg);

      KStudyCell cell;
      cell.variant = variant;
      cell.num_components = k;
      cell.n_runs = cfg.n_runs;
      cell.n_diverged = res.n_diverged;
      cell.n_accepted = res.filtered.empty ? 0 : res.filtered.n_accepted;
      // Below-floor sweeps (small K) still get reported, over all runs.
      const AggregateSummary& stats =
          res.filtered.empty ? res.unfiltered : res.filtered;
      cell.used_filter = !res.filtered.empty;
      if (!stats.empty) {
        cell.acc_mean = stats.acc_mean;
        cell.acc_std = stats.acc_std;
      }
      cells.push_back(cell);
      if (cell_done) cell_done(cell);
      ++cell_index;
    }
  }
  return cells;
}

WeightBand weight_band(double weight) {
  if (weight < 0.0 || !std::isfinite(weight)) {
    throw std::invalid_argument("mixture weight must be non-negative");
  }
  if (weight < 0.01) return {"yellow", 0.5, true};
  if (weight < 0.1) return {"green", 0.5, false};
  if (weight < 0.2) return {"cyan", 1.0, false};
  if (weight < 0.3) return {"magenta", 2.0, false};
  if (weight < 0.4) return {"red", 3.0, false};
  if (weight < 0.5) return {"blue", 4.0, false};
  return {"black", 5.0, false};
}

std::vector<EllipseRecord> export_ellipses(const SharedKernelModel& model,
                                           const std::vector<int>& classes) {
  validate(model);
  const Eigen::Index m = model.dimension();
  std::vector<int> cls = classes;
  if (cls.empty()) {
    for (int j = 1; j <= model.num_classes(); ++j) cls.push_back(j);
  }
  for (int j : cls) {
    if (j < 1 || j > model.num_classes()) {
      throw std::invalid_argument("class out of range");
    }
  }

  std::vector<EllipseRecord> out;
  for (int j : cls) {
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = a + 1; b < m; ++b) {
        const SharedKernelModel plane = marginal_projection(model, {a, b});
        for (int k = 0; k < model.num_components(); ++k) {
          const auto& comp = plane.components[static_cast<size_t>(k)];
          Eigen::Matrix2d sub = comp.covariance;
          sub = 0.5 * (sub + sub.transpose());
          Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(sub);
          const double lo = eig.eigenvalues()[0];
          const double hi = eig.eigenvalues()[1];
          if (!(lo > 0.0)) {
            throw std::invalid_argument("projected covariance is not positive definite");
          }
          EllipseRecord rec;
          rec.class_label = j;
          rec.component = k + 1;
          rec.dim1 = static_cast<int>(a) + 1;
          rec.dim2 = static_cast<int>(b) + 1;
          rec.center_x = comp.mean[0];
          rec.center_y = comp.mean[1];
          rec.semi_major = std::sqrt(hi);
          rec.semi_minor = std::sqrt(lo);
          if (hi - lo <= 1e-12 * std::max(hi, 1.0)) {
            rec.angle_rad = 0.0;  // circular: orientation is conventional
          } else {
            const Eigen::Vector2d v = eig.eigenvectors().col(1);
            double angle = std::atan2(v.y(), v.x());
            if (angle > std::numbers::pi / 2) angle -= std::numbers::pi;
            if (angle <= -std::numbers::pi / 2) angle += std::numbers::pi;
            rec.angle_rad = angle;
          }
          rec.weight = model.weights(k, j - 1);
          rec.band = weight_band(rec.weight);
          out.push_back(std::move(rec));
        }
      }
    }
  }
  return out;
}

void write_runs_csv(const ExperimentResult& result, std::ostream& out) {
  out << "run,seed,accuracy,miou,converged,diverged,error\n";
  for (const auto& rec : result.runs) {
    std::string err = rec.error;
    for (char& c : err) {
      if (c == ',' || c == '\n') c = ';';
    }
    out << rec.run_index << ',' << rec.seed << ',' << fmt(rec.accuracy) << ','
        << fmt(rec.miou) << ',' << (rec.converged ? 1 : 0) << ','
        << (rec.diverged ? 1 : 0) << ',' << err << '\n';
  }
}

namespace {
void write_aggregate_row(std::ostream& out, const char* scope,
                         const AggregateSummary& agg, int n_diverged) {
  out << scope << ',' << agg.n_runs << ',' << agg.n_accepted << ',' << n_diverged
      << ',' << fmt(agg.acc_median) << ',' << fmt(agg.acc_mean) << ','
      << fmt(agg.acc_std) << ',' << fmt(agg.miou_median) << ',' << fmt(agg.miou_mean)
      << ',' << fmt(agg.miou_std) << '\n';
}
}  // namespace

void write_aggregate_csv(const ExperimentResult& result, std::ostream& out) {
  out << "scope,n_runs,n_accepted,n_diverged,med_acc,mean_acc,std_acc,"
         "med_miou,mean_miou,std_miou\n";
  write_aggregate_row(out, "filtered", result.filtered, result.n_diverged);
  write_aggregate_row(out, "all", result.unfiltered, result.n_diverged);
}

void write_kstudy_csv(const std::vector<KStudyCell>& cells, std::ostream& out) {
  out << "variant,K,n_runs,n_accepted,n_diverged,used_filter,mean_acc,std_acc\n";
  for (const auto& c : cells) {
    out << c.variant << ',' << c.num_components << ',' << c.n_runs << ','
        << c.n_accepted << ',' << c.n_diverged << ',' << (c.used_filter ? 1 : 0)
        << ',' << fmt(c.acc_mean) << ',' << fmt(c.acc_std) << '\n';
  }
}

void write_ellipse_csv(const std::vector<EllipseRecord>& records, std::ostream& out) {
  out << "group,class,component,dim1,dim2,center_x,center_y,a,b,angle_rad,weight,"
         "band\n";
  for (const auto& r : records) {
    out << r.group << ',' << r.class_label << ',' << r.component << ',' << r.dim1
        << ',' << r.dim2 << ',' << fmt(r.center_x) << ',' << fmt(r.center_y) << ','
        << fmt(r.semi_major) << ',' << fmt(r.semi_minor) << ',' << fmt(r.angle_rad)
        << ',' << fmt(r.weight) << ',' << r.band.colour << '\n';
  }
}

}  // namespace skem
