#include "skem/features.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

namespace skem {

namespace {

Eigen::MatrixXd image_as_matrix(const DigitImage& img) {
  Eigen::MatrixXd x(kImageSize, kImageSize);
  for (int r = 0; r < kImageSize; ++r) {
    for (int c = 0; c < kImageSize; ++c) {
      x(r, c) = static_cast<double>(img.at(r, c));
    }
  }
  return x;
}

}  // namespace

const std::vector<std::string>& feature_column_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (int i = 1; i <= 10; ++i) v.push_back("pca" + std::to_string(i));
    for (int i = 1; i <= 4; ++i) v.push_back("q" + std::to_string(i));
    return v;
  }();
  return names;
}

Eigen::VectorXd first_pca_loading(const DigitImage& img, const FeatureOptions& opts) {
  Eigen::MatrixXd x = image_as_matrix(img);
  const Eigen::RowVectorXd col_means = x.colwise().mean();
  x.rowwise() -= col_means;
  if (opts.standardize) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const double sd = std::sqrt(x.col(c).squaredNorm() / (x.rows() - 1));
      if (sd > 0.0) x.col(c) /= sd;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  if (!(svd.singularValues()[0] > 0.0)) {
    throw std::domain_error("image has zero variance; PCA is undefined");
  }
  Eigen::VectorXd loading = svd.matrixV().col(0);
  Eigen::Index max_idx = 0;
  loading.cwiseAbs().maxCoeff(&max_idx);
  if (loading[max_idx] < 0.0) loading = -loading;
  return loading;
}

Eigen::VectorXd pca_features(const DigitImage& img, const FeatureOptions& opts) {
  return first_pca_loading(img, opts).segment(10, 10);
}

std::array<double, 4> quadrant_mass(const DigitImage& img) {
  constexpr int half = kImageSize / 2;
  long long q1 = 0, q2 = 0, q3 = 0, q4 = 0;
  for (int r = 0; r < kImageSize; ++r) {
    for (int c = 0; c < kImageSize; ++c) {
      if (img.at(r, c) == 0) continue;
      if (r < half) {
        (c >= half ? q1 : q2) += 1;
      } else {
        (c < half ? q3 : q4) += 1;
      }
    }
  }
  const long long total = q1 + q2 + q3 + q4;
  if (total == 0) {
    throw std::domain_error("all-zero image has no quadrant mass");
  }
  const double t = static_cast<double>(total);
  return {q1 / t, q2 / t, q3 / t, q4 / t};
}

Eigen::VectorXd apply_dither(const Eigen::VectorXd& features, double sigma,
                             RngStream& rng) {
  if (sigma <= 0.0) throw std::invalid_argument("dither sigma must be positive");
  Eigen::VectorXd out = features;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out[i] == 0.0) out[i] += sigma * rng.normal();
  }
  return out;
}

LabeledDataset dither_table(const LabeledDataset& table, double sigma,
                            RngStream& rng) {
  if (sigma <= 0.0) throw std::invalid_argument("dither sigma must be positive");
  LabeledDataset out = table;
  for (Eigen::Index r = 0; r < out.samples.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.samples.cols(); ++c) {
      if (out.samples(r, c) == 0.0) out.samples(r, c) += sigma * rng.normal();
    }
  }
  return out;
}

LabeledDataset build_feature_table(const DigitDataset& dataset,
                                   const FeatureOptions& opts) {
  if (dataset.empty()) throw std::invalid_argument("dataset is empty");
  const int n = dataset.n_per_digit;
  LabeledDataset table;
  table.samples.resize(static_cast<Eigen::Index>(n) * 10, kFeatureColumns);
  table.labels.reserve(static_cast<size_t>(n) * 10);
  Eigen::Index row = 0;
  for (int s = 0; s < n; ++s) {
    for (int cls = 1; cls <= 10; ++cls) {
      const DigitImage& img = dataset.image(cls, s);
      table.samples.row(row).head(10) = pca_features(img, opts).transpose();
      const auto q = quadrant_mass(img);
      for (int i = 0; i < 4; ++i) table.samples(row, 10 + i) = q[static_cast<size_t>(i)];
      table.labels.push_back(cls);
      ++row;
    }
  }
  return table;
}

const std::vector<VariantSpec>& all_variants() {
  // columns: pca1..pca10 -> 0..9, q1..q4 -> 10..13
  static const std::vector<VariantSpec> variants = {
      {"3D", {{11, 12, 13}}, false},
      {"3x1D", {{11}, {12}, {13}}, false},
      {"4D", {{11, 12, 13, 3}}, false},
      {"5D", {{11, 12, 13, 3, 4}}, false},
      {"2Dx3D", {{3, 4}, {11, 12, 13}}, false},
      {"6D", {{11, 12, 13, 1, 3, 4}}, false},
      {"3Dx3D", {{1, 3, 4}, {11, 12, 13}}, false},
      {"9D", {{11, 12, 13, 1, 2, 3, 4, 5, 6}}, false},
      {"10D", {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}}, true},
      {"13D", {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13}}, true},
  };
  return variants;
}

const VariantSpec& variant_by_name(const std::string& name) {
  for (const auto& v : all_variants()) {
    if (v.name == name) return v;
  }
  throw std::invalid_argument("unknown variant: " + name);
}

std::vector<LabeledDataset> select_variant(const LabeledDataset& table,
                                           const VariantSpec& spec, RngStream& rng) {
  const LabeledDataset& src =
      spec.dither ? dither_table(table, kDitherSigma, rng) : table;
  std::vector<LabeledDataset> out;
  out.reserve(spec.groups.size());
  for (const auto& cols : spec.groups) {
    LabeledDataset group;
    group.labels = src.labels;
    group.samples.resize(src.samples.rows(), static_cast<Eigen::Index>(cols.size()));
    for (size_t i = 0; i < cols.size(); ++i) {
      if (cols[i] < 0 || cols[i] >= src.samples.cols()) {
        throw std::invalid_argument("variant column out of range");
      }
      group.samples.col(static_cast<Eigen::Index>(i)) = src.samples.col(cols[i]);
    }
    out.push_back(std::move(group));
  }
  return out;
}

void write_feature_csv(const LabeledDataset& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const auto& names = feature_column_names();
  if (table.samples.cols() != static_cast<Eigen::Index>(names.size())) {
    throw std::invalid_argument("feature table must have 14 columns");
  }
  for (const auto& n : names) out << n << ',';
  out << "label\n";
  char buf[40];
  for (Eigen::Index r = 0; r < table.samples.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.samples.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", table.samples(r, c));
      out << buf << ',';
    }
    out << table.labels[static_cast<size_t>(r)] << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

LabeledDataset read_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty feature file: " + path);
  size_t n_cols = 0;
  {
    std::stringstream header(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(header, field, ',')) fields.push_back(field);
    if (fields.empty() || fields.back() != "label") {
      throw std::runtime_error("feature file must end with a label column: " + path);
    }
    n_cols = fields.size() - 1;
  }
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(ss, field, ',')) values.push_back(std::stod(field));
    if (values.size() != n_cols + 1) {
      throw std::runtime_error("ragged row in feature file: " + path);
    }
    labels.push_back(static_cast<int>(values.back()));
    values.pop_back();
    rows.push_back(std::move(values));
  }
  LabeledDataset table;
  table.samples.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(n_cols));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < n_cols; ++c) {
      table.samples(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
    }
  }
  table.labels = std::move(labels);
  return table;
}

}  // namespace skem
