#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "skem/classifier.hpp"
#include "skem/em.hpp"
#include "skem/features.hpp"
#include "skem/metrics.hpp"
#include "skem/model.hpp"

namespace skem {

struct ExperimentConfig {
  std::string variant = "2Dx3D";
  int n_runs = 500;
  std::uint64_t seed = 0;
  double accuracy_floor = 0.5;
  int jobs = 1;
  TrainingConfig training;  // training.num_components is K
};

// Substream ids for the per-dataset dither draws. Run r of an experiment
// trains from seed cfg.seed + r, so a one-run experiment reproduces a plain
// train + evaluate at the same seed.
inline constexpr std::uint64_t kTrainDitherStream = 0x7261696e;
inline constexpr std::uint64_t kTestDitherStream = 0x74657374;

struct RunRecord {
  int run_index = 0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double miou = 0.0;
  bool converged = false;
  bool diverged = false;  // training aborted; excluded from both aggregates
  std::string error;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;
  AggregateSummary filtered;    // accuracy > floor, diverged runs excluded
  AggregateSummary unfiltered;  // every run that produced a classifier
  int n_diverged = 0;
  int best_run_index = -1;  // highest accuracy, ties to the lowest index
  ConfusionMatrix best_confusion;
  CompositeModel best_model;
};

/// Trains one SKEM per variant group on the (already selected) group tables.
CompositeModel train_composite(const std::vector<LabeledDataset>& group_tables,
                               const VariantSpec& spec, const TrainingConfig& cfg,
                               RngStream& rng, const TrainingDiagnostics& diag = {});

// Monte Carlo protocol: run r draws its initial means from seed
// cfg.seed + r; the dither draw (for dithered variants) is a fixed
// substream of cfg.seed, so initialization is the only per-run variation.
// Results are identical for any jobs count. `progress`, when set, fires
// once per finished run (serialized, completion order).
ExperimentResult run_experiment(const LabeledDataset& train_table,
                                const LabeledDataset& test_table,
                                const ExperimentConfig& cfg,
                                const std::function<void(const RunRecord&)>& progress = {});

struct KStudyCell {
  std::string variant;
  int num_components = 0;
  int n_runs = 0;
  int n_accepted = 0;
  int n_diverged = 0;
  bool used_filter = true;  // false when no run beat the floor (stats over all)
  double acc_mean = 0.0;
  double acc_std = 0.0;
};

/// Sweep over (variant, K) cells; cell c uses base seed cfg.seed + c*n_runs
/// so no two cells share run seeds. `cell_done` fires after each cell.
std::vector<KStudyCell> run_kstudy(
    const LabeledDataset& train_table, const LabeledDataset& test_table,
    const std::vector<std::string>& variants, const std::vector<int>& k_values,
    const ExperimentConfig& base_cfg,
    const std::function<void(const KStudyCell&)>& cell_done = {});

/// Line style bucket for one mixture weight (plot export).
struct WeightBand {
  std::string colour;
  double thickness = 0.0;
  bool dashed = false;
};

WeightBand weight_band(double weight);

struct EllipseRecord {
  int group = 1;        // 1-based composite group
  int class_label = 1;  // 1..L
  int component = 1;    // 1..K
  int dim1 = 1, dim2 = 1;  // 1-based projection pair, dim1 < dim2
  double center_x = 0.0, center_y = 0.0;
  double semi_major = 0.0, semi_minor = 0.0;
  double angle_rad = 0.0;
  double weight = 0.0;
  WeightBand band;
};

/// 1-sigma ellipses of every 2-D marginal of every component, for the given
/// classes (all classes when the list is empty).
std::vector<EllipseRecord> export_ellipses(const SharedKernelModel& model,
                                           const std::vector<int>& classes);

void write_runs_csv(const ExperimentResult& result, std::ostream& out);
void write_aggregate_csv(const ExperimentResult& result, std::ostream& out);
void write_kstudy_csv(const std::vector<KStudyCell>& cells, std::ostream& out);
void write_ellipse_csv(const std::vector<EllipseRecord>& records, std::ostream& out);

}  // namespace skem
