// Command line front end: data generation, feature extraction, SKEM
// training, classification, metrics, Monte Carlo experiments and plot
// exports. See README.md for the file formats.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skem/classifier.hpp"
#include "skem/digits.hpp"
#include "skem/em.hpp"
#include "skem/experiment.hpp"
#include "skem/features.hpp"
#include "skem/idx_io.hpp"
#include "skem/metrics.hpp"
#include "skem/model_io.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out_dir = ".";
  bool verbose = false;
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

skem::LabeledDataset load_features_or_idx(const std::string& features_path,
                                          const std::string& images_path,
                                          const std::string& labels_path,
                                          bool standardize) {
  if (!features_path.empty()) {
    return skem::read_feature_csv(features_path);
  }
  if (images_path.empty() || labels_path.empty()) {
    throw std::runtime_error("need either --features or both --images and --labels");
  }
  const skem::DigitDataset ds = skem::read_idx(images_path, labels_path);
  return skem::build_feature_table(ds, {standardize});
}

void print_report(const skem::TrainingReport& report, size_t group) {
  std::cout << "group " << group + 1 << ": passes=" << report.passes_used
            << " converged=" << (report.converged ? "yes" : "no")
            << " final_loglik=" << report.final_total_loglik << '\n';
}

int add_gen_data(CLI::App& app) {
  static double D = 2.0, d = 0.5, nsig = 1.0;
  static int samples = 500, per_digit = 100;
  static std::uint64_t seed = 0;
  static std::string out_images = "images.idx3", out_labels = "labels.idx1";

  CLI::App* cmd = app.add_subcommand("gen-data", "generate 7-segment digit images");
  cmd->add_option("--D", D, "segment half-length")->check(CLI::PositiveNumber);
  cmd->add_option("--d", d, "segment half-width")->check(CLI::PositiveNumber);
  cmd->add_option("--nsig", nsig, "covariance scale factor")->check(CLI::PositiveNumber);
  cmd->add_option("--samples-per-segment", samples, "Gaussian draws per segment")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--per-digit", per_digit, "images per digit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", seed, "RNG seed");
  cmd->add_option("--out-images", out_images, "IDX3 output path");
  cmd->add_option("--out-labels", out_labels, "IDX1 output path");
  cmd->callback([] {
    skem::SegmentGeometry geom{D, d, nsig};
    skem::RngStream rng(seed);
    const skem::DigitDataset ds =
        skem::generate_dataset(geom, per_digit, samples, rng);
    skem::write_idx(ds, out_images, out_labels);
    std::cout << "wrote " << ds.images.size() << " images to " << out_images
              << " / " << out_labels << '\n';
  });
  return 0;
}

int add_extract_features(CLI::App& app) {
  static std::string images, labels, out = "features.csv";
  static bool standardize = false;

  CLI::App* cmd =
      app.add_subcommand("extract-features", "PCA + quadrant mass feature table");
  cmd->add_option("--images", images, "IDX3 input")->required();
  cmd->add_option("--labels", labels, "IDX1 input")->required();
  cmd->add_option("--out", out, "feature CSV output");
  cmd->add_flag("--standardize", standardize,
                "scale image columns to unit variance before PCA");
  cmd->callback([] {
    const skem::DigitDataset ds = skem::read_idx(images, labels);
    const skem::LabeledDataset table =
        skem::build_feature_table(ds, {standardize});
    skem::write_feature_csv(table, out);
    std::cout << "wrote " << table.size() << " rows to " << out << '\n';
  });
  return 0;
}

skem::TrainingConfig* add_training_opts(CLI::App* cmd, skem::TrainingConfig& cfg) {
  cmd->add_option("--K", cfg.num_components, "number of mixture components")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-passes", cfg.max_passes, "pass limit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", cfg.loglik_tolerance, "per-class log-likelihood tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--init-cov-scale", cfg.init_cov_scale,
                  "initial covariance = scale * I")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--init-mean-low", cfg.init_mean_low, "initial mean range low");
  cmd->add_option("--init-mean-high", cfg.init_mean_high, "initial mean range high");
  return &cfg;
}

int add_train(CLI::App& app) {
  static std::string features, images, labels, variant = "2Dx3D";
  static std::string out_model = "model.txt";
  static bool standardize = false, verbose = false;
  static std::uint64_t seed = 0;
  static skem::TrainingConfig tcfg;

  CLI::App* cmd = app.add_subcommand("train", "train one SKEM per variant group");
  cmd->add_option("--features", features, "feature CSV input");
  cmd->add_option("--images", images, "IDX3 input (alternative to --features)");
  cmd->add_option("--labels", labels, "IDX1 input (alternative to --features)");
  cmd->add_option("--variant", variant, "classifier variant name");
  cmd->add_option("--out-model", out_model, "composite model output path");
  cmd->add_option("--seed", seed, "RNG seed");
  cmd->add_flag("--standardize", standardize, "standardize before PCA (IDX input)");
  cmd->add_flag("--verbose", verbose, "per-pass trace on stderr");
  add_training_opts(cmd, tcfg);
  cmd->callback([] {
    const skem::LabeledDataset table =
        load_features_or_idx(features, images, labels, standardize);
    const skem::VariantSpec& spec = skem::variant_by_name(variant);
    skem::RngStream dither_rng =
        skem::RngStream(seed).derive(skem::kTrainDitherStream);
    const auto groups = skem::select_variant(table, spec, dither_rng);

    skem::RngStream rng(seed);
    skem::CompositeModel composite;
    composite.dither = spec.dither;
    const int L = table.num_classes();
    for (size_t g = 0; g < groups.size(); ++g) {
      if (verbose) std::cerr << "# group " << g + 1 << '\n';
      skem::TrainingDiagnostics diag;
      if (verbose) diag.trace = &std::cerr;
      skem::SharedKernelModel init =
          skem::init_parameters(tcfg, groups[g].dimension(), L, rng);
      auto [model, report] = skem::skem_train(groups[g], init, tcfg, diag);
      print_report(report, g);
      composite.groups.push_back({spec.groups[g], std::move(model)});
    }
    skem::save_composite(composite, out_model);
    std::cout << "wrote model to " << out_model << '\n';
  });
  return 0;
}

int add_classify(CLI::App& app) {
  static std::string model_path, features, out = "predictions.csv";
  static std::uint64_t seed = 0;

  CLI::App* cmd = app.add_subcommand("classify", "predict classes for a feature table");
  cmd->add_option("--model", model_path, "composite model file")->required();
  cmd->add_option("--features", features, "feature CSV input")->required();
  cmd->add_option("--out", out, "predictions CSV output");
  cmd->add_option("--seed", seed, "seed for the test-side dither (dithered variants)");
  cmd->callback([] {
    const skem::CompositeModel model = skem::load_composite_or_model(model_path);
    skem::LabeledDataset table = skem::read_feature_csv(features);
    if (model.dither) {
      skem::RngStream dither_rng =
          skem::RngStream(seed).derive(skem::kTestDitherStream);
      table = skem::dither_table(table, skem::kDitherSigma, dither_rng);
    }
    const auto priors = skem::ClassPriors::uniform(model.num_classes());
    const std::vector<int> preds =
        skem::classify_batch(model, table.samples, priors);
    auto os = open_out(out);
    os << "row,label,predicted\n";
    for (size_t i = 0; i < preds.size(); ++i) {
      os << i << ',' << table.labels[i] << ',' << preds[i] << '\n';
    }
    std::cout << "wrote " << preds.size() << " predictions to " << out << '\n';
  });
  return 0;
}

int add_evaluate(CLI::App& app) {
  static std::string model_path, features, out_dir = ".";
  static std::uint64_t seed = 0;

  CLI::App* cmd =
      app.add_subcommand("evaluate", "confusion matrix and metrics on a test table");
  cmd->add_option("--model", model_path, "composite model file")->required();
  cmd->add_option("--features", features, "feature CSV input")->required();
  cmd->add_option("--out-dir", out_dir, "output directory");
  cmd->add_option("--seed", seed, "seed for the test-side dither (dithered variants)");
  cmd->callback([] {
    const skem::CompositeModel model = skem::load_composite_or_model(model_path);
    skem::LabeledDataset table = skem::read_feature_csv(features);
    if (model.dither) {
      skem::RngStream dither_rng =
          skem::RngStream(seed).derive(skem::kTestDitherStream);
      table = skem::dither_table(table, skem::kDitherSigma, dither_rng);
    }

    const int L = model.num_classes();
    const auto priors = skem::ClassPriors::uniform(L);
    const std::vector<int> preds = skem::classify_batch(model, table.samples, priors);
    const skem::ConfusionMatrix cm = skem::confusion(table.labels, preds, L);
    const skem::RunSummary rs = skem::metrics(cm);

    fs::create_directories(out_dir);
    {
      auto os = open_out(fs::path(out_dir) / "confusion.txt");
      skem::write_confusion(cm, os);
    }
    {
      auto os = open_out(fs::path(out_dir) / "summary.csv");
      char buf[40];
      os << "metric,value\n";
      std::snprintf(buf, sizeof(buf), "%.17g", rs.accuracy);
      os << "accuracy," << buf << '\n';
      std::snprintf(buf, sizeof(buf), "%.17g", rs.miou);
      os << "miou," << buf << '\n';
    }
    {
      auto os = open_out(fs::path(out_dir) / "per_class.csv");
      os << "class,tp,fp,fn,tn\n";
      for (int i = 0; i < L; ++i) {
        os << i + 1 << ',' << rs.tp[static_cast<size_t>(i)] << ','
           << rs.fp[static_cast<size_t>(i)] << ',' << rs.fn[static_cast<size_t>(i)]
           << ',' << rs.tn[static_cast<size_t>(i)] << '\n';
      }
    }
    std::cout << "accuracy=" << rs.accuracy << " miou=" << rs.miou << '\n';
  });
  return 0;
}

int add_experiment(CLI::App& app) {
  static std::string train_features, test_features, out_dir = ".";
  static bool verbose = false;
  static skem::ExperimentConfig cfg;

  CLI::App* cmd =
      app.add_subcommand("experiment", "seeded Monte Carlo train/evaluate runs");
  cmd->add_option("--train-features", train_features, "training feature CSV")
      ->required();
  cmd->add_option("--test-features", test_features, "test feature CSV")->required();
  cmd->add_option("--variant", cfg.variant, "classifier variant name");
  cmd->add_option("--runs", cfg.n_runs, "number of Monte Carlo runs")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "base seed (run r uses seed+r)");
  cmd->add_option("--jobs", cfg.jobs, "parallel workers")->check(CLI::PositiveNumber);
  cmd->add_option("--accuracy-floor", cfg.accuracy_floor,
                  "outlier filter threshold");
  cmd->add_option("--out-dir", out_dir, "output directory");
  cmd->add_flag("--verbose", verbose, "per-run progress on stderr");
  add_training_opts(cmd, cfg.training);
  cmd->callback([] {
    const skem::LabeledDataset train = skem::read_feature_csv(train_features);
    const skem::LabeledDataset test = skem::read_feature_csv(test_features);
    std::function<void(const skem::RunRecord&)> progress;
    if (verbose) {
      progress = [](const skem::RunRecord& rec) {
        if (rec.diverged) {
          std::cerr << "run " << rec.run_index << ": diverged (" << rec.error << ")\n";
        } else {
          std::cerr << "run " << rec.run_index << ": accuracy " << rec.accuracy
                    << (rec.converged ? "" : " (pass limit)") << '\n';
        }
      };
    }
    const skem::ExperimentResult res =
        skem::run_experiment(train, test, cfg, progress);

    fs::create_directories(out_dir);
    {
      auto os = open_out(fs::path(out_dir) / "runs.csv");
      skem::write_runs_csv(res, os);
    }
    {
      auto os = open_out(fs::path(out_dir) / "aggregate.csv");
      skem::write_aggregate_csv(res, os);
    }
    if (res.best_run_index >= 0) {
      auto os = open_out(fs::path(out_dir) / "best_confusion.txt");
      skem::write_confusion(res.best_confusion, os);
      skem::save_composite(res.best_model,
                           (fs::path(out_dir) / "best_model.txt").string());
    }
    std::cout << "accepted " << res.filtered.n_accepted << "/" << res.runs.size()
              << " runs, filtered mean accuracy " << res.filtered.acc_mean
              << " (std " << res.filtered.acc_std << "), diverged "
              << res.n_diverged << '\n';
  });
  return 0;
}

int add_kstudy(CLI::App& app) {
  static std::string train_features, test_features, out = "kstudy.csv";
  static std::vector<std::string> variants = {"3D", "6D", "9D", "10D"};
  static std::vector<int> k_values = {3, 6, 8, 10, 12, 15, 18};
  static bool verbose = false;
  static skem::ExperimentConfig cfg;

  CLI::App* cmd = app.add_subcommand("kstudy", "accuracy sweep over K and variants");
  cmd->add_option("--train-features", train_features, "training feature CSV")
      ->required();
  cmd->add_option("--test-features", test_features, "test feature CSV")->required();
  cmd->add_option("--variants", variants, "variant names");
  cmd->add_option("--K-list", k_values, "component counts to sweep");
  cmd->add_option("--runs", cfg.n_runs, "runs per (variant, K) cell")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "base seed");
  cmd->add_option("--jobs", cfg.jobs, "parallel workers")->check(CLI::PositiveNumber);
  cmd->add_option("--accuracy-floor", cfg.accuracy_floor, "outlier filter threshold");
  cmd->add_option("--out", out, "output CSV");
  cmd->add_option("--max-passes", cfg.training.max_passes, "pass limit")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", cfg.training.loglik_tolerance, "log-likelihood tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--verbose", verbose, "per-cell progress on stderr");
  cmd->callback([] {
    const skem::LabeledDataset train = skem::read_feature_csv(train_features);
    const skem::LabeledDataset test = skem::read_feature_csv(test_features);
    std::function<void(const skem::KStudyCell&)> cell_done;
    if (verbose) {
      cell_done = [](const skem::KStudyCell& c) {
        std::cerr << c.variant << " K=" << c.num_components << ": mean "
                  << c.acc_mean << " +/- " << c.acc_std << " (" << c.n_accepted
                  << "/" << c.n_runs << " accepted)\n";
      };
    }
    const auto cells =
        skem::run_kstudy(train, test, variants, k_values, cfg, cell_done);
    auto os = open_out(out);
    skem::write_kstudy_csv(cells, os);
    std::cout << "wrote " << cells.size() << " cells to " << out << '\n';
  });
  return 0;
}

int add_export_ellipses(CLI::App& app) {
  static std::string model_path, out = "ellipses.csv";
  static std::vector<int> classes;

  CLI::App* cmd = app.add_subcommand(
      "export-ellipses", "1-sigma 2-D projection ellipses for plotting");
  cmd->add_option("--model", model_path, "model file (plain or composite)")
      ->required();
  cmd->add_option("--classes", classes, "classes to export (default: all)");
  cmd->add_option("--out", out, "output CSV");
  cmd->callback([] {
    const skem::CompositeModel model = skem::load_composite_or_model(model_path);
    std::vector<skem::EllipseRecord> records;
    for (size_t g = 0; g < model.groups.size(); ++g) {
      auto group_records = skem::export_ellipses(model.groups[g].model, classes);
      for (auto& r : group_records) r.group = static_cast<int>(g) + 1;
      records.insert(records.end(), group_records.begin(), group_records.end());
    }
    auto os = open_out(out);
    skem::write_ellipse_csv(records, os);
    std::cout << "wrote " << records.size() << " ellipses to " << out << '\n';
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shared kernel EM toolkit"};
  app.require_subcommand(1);
  // options for a subcommand live in a [subcommand] section of the file
  app.set_config("--config", "", "read options from an INI-style file");

  add_gen_data(app);
  add_extract_features(app);
  add_train(app);
  add_classify(app);
  add_evaluate(app);
  add_experiment(app);
  add_kstudy(app);
  add_export_ellipses(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const skem::TrainingError& e) {
    std::cerr << "training failed: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
