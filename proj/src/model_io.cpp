#include "skem/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace skem {

namespace {

constexpr const char* kModelHeader = "shared_kernel_model";
constexpr const char* kCompositeHeader = "shared_kernel_composite";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

std::string expect_token(std::istream& in, const char* what) {
  std::string tok;
  if (!(in >> tok)) {
    throw ModelFormatError(std::string("unexpected end of model file, wanted ") + what);
  }
  return tok;
}

void expect_keyword(std::istream& in, const std::string& keyword) {
  const std::string tok = expect_token(in, keyword.c_str());
  if (tok != keyword) {
    throw ModelFormatError("expected '" + keyword + "', found '" + tok + "'");
  }
}

long expect_count(std::istream& in, const char* what) {
  const std::string tok = expect_token(in, what);
  try {
    size_t pos = 0;
    const long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ModelFormatError(std::string("bad integer for ") + what + ": '" + tok + "'");
  }
}

double expect_real(std::istream& in, const char* what) {
  const std::string tok = expect_token(in, what);
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ModelFormatError(std::string("bad number for ") + what + ": '" + tok + "'");
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

}  // namespace

void save_model(const SharedKernelModel& model, std::ostream& out) {
  validate(model);
  const Eigen::Index m = model.dimension();
  out << kModelHeader << " 1\n";
  out << "dimension " << m << '\n';
  out << "num_components " << model.num_components() << '\n';
  out << "num_classes " << model.num_classes() << '\n';
  for (int k = 0; k < model.num_components(); ++k) {
    const auto& comp = model.components[static_cast<size_t>(k)];
    out << "component " << k + 1 << '\n';
    out << "mean";
    for (Eigen::Index i = 0; i < m; ++i) out << ' ' << fmt(comp.mean[i]);
    out << '\n';
    out << "covariance\n";
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        out << (j ? " " : "") << fmt(comp.covariance(i, j));
      }
      out << '\n';
    }
  }
  out << "weights\n";
  for (Eigen::Index k = 0; k < model.weights.rows(); ++k) {
    for (Eigen::Index j = 0; j < model.weights.cols(); ++j) {
      out << (j ? " " : "") << fmt(model.weights(k, j));
    }
    out << '\n';
  }
}

void save_model(const SharedKernelModel& model, const std::string& path) {
  auto out = open_out(path);
  save_model(model, out);
}

SharedKernelModel load_model(std::istream& in) {
  expect_keyword(in, kModelHeader);
  const long version = expect_count(in, "format version");
  if (version != 1) throw ModelFormatError("unsupported model format version");
  expect_keyword(in, "dimension");
  const long m = expect_count(in, "dimension");
  expect_keyword(in, "num_components");
  const long K = expect_count(in, "num_components");
  expect_keyword(in, "num_classes");
  const long L = expect_count(in, "num_classes");
  if (m < 1 || K < 1 || L < 1) throw ModelFormatError("non-positive model size");

  SharedKernelModel model;
  model.components.resize(static_cast<size_t>(K));
  for (long k = 0; k < K; ++k) {
    expect_keyword(in, "component");
    const long ordinal = expect_count(in, "component ordinal");
    if (ordinal != k + 1) throw ModelFormatError("components out of order");
    auto& comp = model.components[static_cast<size_t>(k)];
    expect_keyword(in, "mean");
    comp.mean.resize(m);
    for (long i = 0; i < m; ++i) comp.mean[i] = expect_real(in, "mean entry");
    expect_keyword(in, "covariance");
    comp.covariance.resize(m, m);
    for (long i = 0; i < m; ++i) {
      for (long j = 0; j < m; ++j) {
        comp.covariance(i, j) = expect_real(in, "covariance entry");
      }
    }
  }
  expect_keyword(in, "weights");
  model.weights.resize(K, L);
  for (long k = 0; k < K; ++k) {
    for (long j = 0; j < L; ++j) {
      model.weights(k, j) = expect_real(in, "weight entry");
    }
  }
  try {
    validate(model);
  } catch (const std::exception& e) {
    throw ModelFormatError(std::string("model file violates invariants: ") + e.what());
  }
  return model;
}

SharedKernelModel load_model(const std::string& path) {
  auto in = open_in(path);
  return load_model(in);
}

void save_composite(const CompositeModel& model, std::ostream& out) {
  validate(model);
  out << kCompositeHeader << " 1\n";
  out << "num_groups " << model.groups.size() << '\n';
  out << "num_classes " << model.num_classes() << '\n';
  out << "dither " << (model.dither ? 1 : 0) << '\n';
  for (size_t g = 0; g < model.groups.size(); ++g) {
    out << "group " << g + 1 << '\n';
    out << "columns " << model.groups[g].columns.size();
    for (Eigen::Index c : model.groups[g].columns) out << ' ' << c + 1;
    out << '\n';
    save_model(model.groups[g].model, out);
  }
}

void save_composite(const CompositeModel& model, const std::string& path) {
  auto out = open_out(path);
  save_composite(model, out);
}

CompositeModel load_composite(std::istream& in) {
  expect_keyword(in, kCompositeHeader);
  const long version = expect_count(in, "format version");
  if (version != 1) throw ModelFormatError("unsupported composite format version");
  expect_keyword(in, "num_groups");
  const long n_groups = expect_count(in, "num_groups");
  expect_keyword(in, "num_classes");
  const long L = expect_count(in, "num_classes");
  expect_keyword(in, "dither");
  const long dither = expect_count(in, "dither flag");
  if (dither != 0 && dither != 1) throw ModelFormatError("dither flag must be 0 or 1");
  if (n_groups < 1 || L < 1) throw ModelFormatError("non-positive composite size");

  CompositeModel model;
  model.dither = dither == 1;
  for (long g = 0; g < n_groups; ++g) {
    expect_keyword(in, "group");
    const long ordinal = expect_count(in, "group ordinal");
    if (ordinal != g + 1) throw ModelFormatError("groups out of order");
    expect_keyword(in, "columns");
    const long n_cols = expect_count(in, "column count");
    if (n_cols < 1) throw ModelFormatError("group has no columns");
    FeatureGroup group;
    for (long i = 0; i < n_cols; ++i) {
      const long c = expect_count(in, "column index");
      if (c < 1) throw ModelFormatError("column indices are 1-based");
      group.columns.push_back(static_cast<Eigen::Index>(c - 1));
    }
    group.model = load_model(in);
    if (group.model.num_classes() != L) {
      throw ModelFormatError("group class count disagrees with composite header");
    }
    model.groups.push_back(std::move(group));
  }
  try {
    validate(model);
  } catch (const std::exception& e) {
    throw ModelFormatError(std::string("composite file violates invariants: ") +
                           e.what());
  }
  return model;
}

CompositeModel load_composite(const std::string& path) {
  auto in = open_in(path);
  return load_composite(in);
}

CompositeModel load_composite_or_model(const std::string& path) {
  auto in = open_in(path);
  std::string first;
  in >> first;
  in.seekg(0);
  if (first == kCompositeHeader) return load_composite(in);
  SharedKernelModel plain = load_model(in);
  FeatureGroup group;
  group.columns.resize(static_cast<size_t>(plain.dimension()));
  std::iota(group.columns.begin(), group.columns.end(), 0);
  group.model = std::move(plain);
  CompositeModel composite;
  composite.groups.push_back(std::move(group));
  return composite;
}

}  // namespace skem
