#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "skem/rng.hpp"

namespace skem {

inline constexpr int kImageSize = 28;

// 7-segment display geometry. D and d are the half-length and half-width of
// one segment; sigma_scale multiplies the sampling covariance. With
// w = D + d and h = 2w the segment centers are
//   1:(w,w) 2:(w,-w) 3:(0,-h) 4:(-w,-w) 5:(-w,w) 6:(0,h) 7:(0,0)
struct SegmentGeometry {
  double half_length = 2.0;  // D
  double half_width = 0.5;   // d
  double sigma_scale = 1.0;  // n_sigma
};

std::array<Eigen::Vector2d, 7> segment_centers(const SegmentGeometry& geom);

/// Segment sets for one digit; digit 1 moves segments 1,2 onto the y axis.
struct DigitRecipe {
  int digit;
  std::vector<int> vertical;    // 1-based segment ids
  std::vector<int> horizontal;
  bool recenter;
};

const DigitRecipe& digit_recipe(int digit);

/// 28x28 8-bit greyscale raster, row 0 = top of the glyph.
struct DigitImage {
  std::array<std::uint8_t, kImageSize * kImageSize> pixels{};
  int digit = 0;

  std::uint8_t at(int row, int col) const {
    return pixels[static_cast<size_t>(row) * kImageSize + static_cast<size_t>(col)];
  }
};

struct DigitGenParams {
  double half_length = 2.0;
  double half_width = 0.5;
  double sigma_scale = 1.0;
  int samples_per_segment = 500;
};

// Class-major image store; class c (1..10) holds digit [1..9,0][c-1], so
// digit 0 lives in the 10th class.
struct DigitDataset {
  std::vector<DigitImage> images;  // (class-1)*n_per_digit + sample
  int n_per_digit = 0;
  DigitGenParams params;

  int num_classes() const { return 10; }
  bool empty() const { return images.empty(); }
  const DigitImage& image(int cls, int sample) const {
    return images[static_cast<size_t>(cls - 1) * static_cast<size_t>(n_per_digit) +
                  static_cast<size_t>(sample)];
  }
};

int digit_for_class(int cls);    // class 1..10 -> digit [1..9,0]
int class_for_digit(int digit);  // inverse

/// Raw per-cell hit counts before greyscale scaling, already oriented
/// (row 0 = top). Every sample lands in exactly one cell.
Eigen::MatrixXi render_digit_counts(const SegmentGeometry& geom, int digit,
                                    int samples_per_segment, RngStream& rng);

DigitImage render_digit(const SegmentGeometry& geom, int digit,
                        int samples_per_segment, RngStream& rng);

/// n_per_digit images per digit in class order [1..9,0]; image (cls, s) uses
/// the substream rng.derive((cls-1) << 32 | s), so generation order is free.
DigitDataset generate_dataset(const SegmentGeometry& geom, int n_per_digit,
                              int samples_per_segment, RngStream& rng);

}  // namespace skem
