#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "skem/digits.hpp"
#include "skem/model.hpp"
#include "skem/rng.hpp"

namespace skem {

// Full feature layout: 14 columns [pca1..pca10, q1..q4]. The label column
// holds classes 1..10 with 10 standing for digit 0.
inline constexpr int kFeatureColumns = 14;

const std::vector<std::string>& feature_column_names();

struct FeatureOptions {
  // When set, image columns are scaled to unit variance after centering
  // (zero-variance columns stay zero). Off by default: the centering the
  // PCA itself performs is the reference behaviour.
  bool standardize = false;
};

/// First principal direction of the image (columns as variables), full 28
/// entries, unit norm, sign fixed so the largest-magnitude entry is positive.
Eigen::VectorXd first_pca_loading(const DigitImage& img,
                                  const FeatureOptions& opts = {});

/// Entries 11..20 (1-based) of the first principal direction.
Eigen::VectorXd pca_features(const DigitImage& img, const FeatureOptions& opts = {});

/// Fractions of binarized on-pixels per quadrant: q1 top-right, q2 top-left,
/// q3 bottom-left, q4 bottom-right. Throws on an all-zero image.
std::array<double, 4> quadrant_mass(const DigitImage& img);

/// Adds N(0, sigma^2) noise to entries that are exactly zero.
Eigen::VectorXd apply_dither(const Eigen::VectorXd& features, double sigma,
                             RngStream& rng);

/// Dither applied entry-wise to a whole feature table (labels untouched).
LabeledDataset dither_table(const LabeledDataset& table, double sigma,
                            RngStream& rng);

/// One 14-column row per image, ordered (sample, digit [1..9,0]).
LabeledDataset build_feature_table(const DigitDataset& dataset,
                                   const FeatureOptions& opts = {});

inline constexpr double kDitherSigma = 0.01;

/// One of the ten named classifier variants: feature column groups over the
/// 14-column layout, plus whether zero features get dithered first.
struct VariantSpec {
  std::string name;
  std::vector<std::vector<Eigen::Index>> groups;  // 0-based columns
  bool dither = false;
};

const std::vector<VariantSpec>& all_variants();
const VariantSpec& variant_by_name(const std::string& name);

/// Column subsets per group (after dithering when the variant uses it).
std::vector<LabeledDataset> select_variant(const LabeledDataset& table,
                                           const VariantSpec& spec, RngStream& rng);

void write_feature_csv(const LabeledDataset& table, const std::string& path);
LabeledDataset read_feature_csv(const std::string& path);

}  // namespace skem
