#include "skem/digits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skem/gaussian.hpp"

namespace skem {

namespace {

const std::array<DigitRecipe, 10> kRecipes = {{
    {0, {1, 2, 4, 5}, {3, 6}, false},
    {1, {1, 2}, {}, true},
    {2, {1, 4}, {3, 6, 7}, false},
    {3, {1, 2}, {3, 6, 7}, false},
    {4, {1, 2, 5}, {7}, false},
    {5, {2, 5}, {3, 6, 7}, false},
    {6, {2, 4, 5}, {3, 6, 7}, false},
    {7, {1, 2}, {6}, false},
    {8, {1, 2, 4, 5}, {3, 6, 7}, false},
    {9, {1, 2, 5}, {3, 6, 7}, false},
}};

constexpr double kBoxFactor = 1.8;

}  // namespace

std::array<Eigen::Vector2d, 7> segment_centers(const SegmentGeometry& geom) {
  const double w = geom.half_length + geom.half_width;
  const double h = 2.0 * w;
  return {Eigen::Vector2d(w, w),  Eigen::Vector2d(w, -w), Eigen::Vector2d(0, -h),
          Eigen::Vector2d(-w, -w), Eigen::Vector2d(-w, w), Eigen::Vector2d(0, h),
          Eigen::Vector2d(0, 0)};
}

const DigitRecipe& digit_recipe(int digit) {
  if (digit < 0 || digit > 9) {
    throw std::invalid_argument("unsupported digit: must be between 0 and 9");
  }
  return kRecipes[static_cast<size_t>(digit)];
}

int digit_for_class(int cls) {
  if (cls < 1 || cls > 10) throw std::invalid_argument("class out of range");
  return cls % 10;
}

int class_for_digit(int digit) {
  if (digit < 0 || digit > 9) throw std::invalid_argument("digit out of range");
  return digit == 0 ? 10 : digit;
}

Eigen::MatrixXi render_digit_counts(const SegmentGeometry& geom, int digit,
                                    int samples_per_segment, RngStream& rng) {
  if (samples_per_segment < 1) {
    throw std::invalid_argument("samples_per_segment must be >= 1");
  }
  if (geom.half_length <= 0 || geom.half_width <= 0 || geom.sigma_scale <= 0) {
    throw std::invalid_argument("segment geometry must be positive");
  }
  const DigitRecipe& recipe = digit_recipe(digit);
  auto centers = segment_centers(geom);
  if (recipe.recenter) {
    const double w = geom.half_length + geom.half_width;
    centers[0] = Eigen::Vector2d(0, w);
    centers[1] = Eigen::Vector2d(0, -w);
  }

  const double D = geom.half_length;
  const double d = geom.half_width;
  Eigen::Matrix2d cov_v = Eigen::Matrix2d::Zero();  // vertical: diag(d, D)
  cov_v(0, 0) = geom.sigma_scale * d;
  cov_v(1, 1) = geom.sigma_scale * D;
  Eigen::Matrix2d cov_h = Eigen::Matrix2d::Zero();  // horizontal: diag(D, d)
  cov_h(0, 0) = geom.sigma_scale * D;
  cov_h(1, 1) = geom.sigma_scale * d;

  std::vector<Eigen::Vector2d> samples;
  samples.reserve(static_cast<size_t>(samples_per_segment) *
                  (recipe.vertical.size() + recipe.horizontal.size()));
  for (int seg : recipe.vertical) {
    GaussianDensity dens(centers[static_cast<size_t>(seg - 1)], cov_v);
    for (int s = 0; s < samples_per_segment; ++s) samples.push_back(dens.sample(rng));
  }
  for (int seg : recipe.horizontal) {
    GaussianDensity dens(centers[static_cast<size_t>(seg - 1)], cov_h);
    for (int s = 0; s < samples_per_segment; ++s) samples.push_back(dens.sample(rng));
  }

  // Square image region spans kBoxFactor times the display's y extent in
  // both axes, and the cell size comes from that same extent.
  const double hi = kBoxFactor * (2.0 * D + 3.0 * d);
  const double lo = -hi;
  const double dx = 2.0 * hi / kImageSize;

  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(kImageSize, kImageSize);
  for (const auto& p : samples) {
    const double x = std::clamp(p.x(), lo, hi);
    const double y = std::clamp(p.y(), lo, hi);
    int ix = static_cast<int>(std::floor((x - lo) / dx));
    ix = std::clamp(ix, 0, kImageSize - 1);
    int jy = static_cast<int>(std::ceil((y - lo) / dx));
    jy = std::clamp(jy, 1, kImageSize);
    // transpose + vertical flip puts row 0 at the top of the glyph
    counts(kImageSize - jy, ix) += 1;
  }
  return counts;
}

DigitImage render_digit(const SegmentGeometry& geom, int digit,
                        int samples_per_segment, RngStream& rng) {
  const Eigen::MatrixXi counts =
      render_digit_counts(geom, digit, samples_per_segment, rng);
  const int max_count = counts.maxCoeff();
  DigitImage img;
  img.digit = digit;
  if (max_count == 0) return img;
  for (int r = 0; r < kImageSize; ++r) {
    for (int c = 0; c < kImageSize; ++c) {
      const long v = std::lround(255.0 * counts(r, c) / max_count);
      img.pixels[static_cast<size_t>(r) * kImageSize + static_cast<size_t>(c)] =
          static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

DigitDataset generate_dataset(const SegmentGeometry& geom, int n_per_digit,
                              int samples_per_segment, RngStream& rng) {
  if (n_per_digit < 1) throw std::invalid_argument("n_per_digit must be >= 1");
  DigitDataset ds;
  ds.n_per_digit = n_per_digit;
  ds.params = {geom.half_length, geom.half_width, geom.sigma_scale,
               samples_per_segment};
  ds.images.reserve(static_cast<size_t>(n_per_digit) * 10);
  for (int cls = 1; cls <= 10; ++cls) {
    const int digit = digit_for_class(cls);
    for (int s = 0; s < n_per_digit; ++s) {
      RngStream image_rng = rng.derive(
          (static_cast<std::uint64_t>(cls - 1) << 32) | static_cast<std::uint64_t>(s));
      ds.images.push_back(render_digit(geom, digit, samples_per_segment, image_rng));
    }
  }
  return ds;
}

}  // namespace skem
