#include <doctest.h>

#include <cmath>

#include "skem/digits.hpp"
#include "skem/features.hpp"

using namespace skem;

TEST_CASE("segment centers match the figure-8 table") {
  SegmentGeometry geom{2.0, 0.5, 1.0};
  const auto centers = segment_centers(geom);
  const double w = 2.5, h = 5.0;
  CHECK(centers[0] == Eigen::Vector2d(w, w));
  CHECK(centers[1] == Eigen::Vector2d(w, -w));
  CHECK(centers[2] == Eigen::Vector2d(0, -h));
  CHECK(centers[3] == Eigen::Vector2d(-w, -w));
  CHECK(centers[4] == Eigen::Vector2d(-w, w));
  CHECK(centers[5] == Eigen::Vector2d(0, h));
  CHECK(centers[6] == Eigen::Vector2d(0, 0));
}

TEST_CASE("digit recipes match the reference table") {
  using V = std::vector<int>;
  CHECK(digit_recipe(0).vertical == V{1, 2, 4, 5});
  CHECK(digit_recipe(0).horizontal == V{3, 6});
  CHECK(digit_recipe(1).vertical == V{1, 2});
  CHECK(digit_recipe(1).horizontal == V{});
  CHECK(digit_recipe(1).recenter);
  CHECK(digit_recipe(2).vertical == V{1, 4});
  CHECK(digit_recipe(2).horizontal == V{3, 6, 7});
  CHECK(digit_recipe(3).vertical == V{1, 2});
  CHECK(digit_recipe(3).horizontal == V{3, 6, 7});
  CHECK(digit_recipe(4).vertical == V{1, 2, 5});
  CHECK(digit_recipe(4).horizontal == V{7});
  CHECK(digit_recipe(5).vertical == V{2, 5});
  CHECK(digit_recipe(5).horizontal == V{3, 6, 7});
  CHECK(digit_recipe(6).vertical == V{2, 4, 5});
  CHECK(digit_recipe(6).horizontal == V{3, 6, 7});
  CHECK(digit_recipe(7).vertical == V{1, 2});
  CHECK(digit_recipe(7).horizontal == V{6});
  CHECK(digit_recipe(8).vertical == V{1, 2, 4, 5});
  CHECK(digit_recipe(8).horizontal == V{3, 6, 7});
  CHECK(digit_recipe(9).vertical == V{1, 2, 5});
  CHECK(digit_recipe(9).horizontal == V{3, 6, 7});
  for (int d = 2; d <= 9; ++d) CHECK_FALSE(digit_recipe(d).recenter);
  CHECK_THROWS_AS(digit_recipe(10), std::invalid_argument);
  CHECK_THROWS_AS(digit_recipe(-1), std::invalid_argument);
}

TEST_CASE("class order is [1..9,0]") {
  for (int cls = 1; cls <= 9; ++cls) CHECK(digit_for_class(cls) == cls);
  CHECK(digit_for_class(10) == 0);
  CHECK(class_for_digit(0) == 10);
  CHECK(class_for_digit(7) == 7);
}

TEST_CASE("rendering is deterministic under a fixed seed") {
  SegmentGeometry geom;
  RngStream a(11), b(11);
  const DigitImage ia = render_digit(geom, 5, 1, a);
  const DigitImage ib = render_digit(geom, 5, 1, b);
  CHECK(ia.pixels == ib.pixels);
  RngStream c(12);
  const DigitImage ic = render_digit(geom, 5, 1, c);
  CHECK(ia.pixels != ic.pixels);
}

TEST_CASE("every sample is binned: clamped, never dropped") {
  SegmentGeometry geom{2.0, 0.5, 1.0};
  for (int digit = 0; digit <= 9; ++digit) {
    RngStream rng(100 + static_cast<std::uint64_t>(digit));
    const Eigen::MatrixXi counts = render_digit_counts(geom, digit, 500, rng);
    const auto& recipe = digit_recipe(digit);
    const int active =
        static_cast<int>(recipe.vertical.size() + recipe.horizontal.size());
    CHECK(counts.sum() == active * 500);
  }
}

TEST_CASE("max pixel is 255 whenever there is at least one sample") {
  SegmentGeometry geom;
  for (int digit = 0; digit <= 9; ++digit) {
    RngStream rng(7 + static_cast<std::uint64_t>(digit));
    const DigitImage img = render_digit(geom, digit, 1, rng);
    int maxv = 0;
    for (auto p : img.pixels) maxv = std::max(maxv, static_cast<int>(p));
    CHECK(maxv == 255);
  }
}

TEST_CASE("digit 8 is quadrant-symmetric at 500 samples per segment") {
  SegmentGeometry geom{2.0, 0.5, 1.0};
  RngStream rng(21);
  const DigitImage img = render_digit(geom, 8, 500, rng);
  const auto q = quadrant_mass(img);
  for (double v : q) CHECK(std::abs(v - 0.25) < 0.15);
}

TEST_CASE("digit 1 is horizontally centered") {
  SegmentGeometry geom{2.0, 0.5, 1.0};
  RngStream rng(22);
  const DigitImage img = render_digit(geom, 1, 500, rng);
  double col_sum = 0.0;
  int on = 0;
  for (int r = 0; r < kImageSize; ++r) {
    for (int c = 0; c < kImageSize; ++c) {
      if (img.at(r, c) > 0) {
        col_sum += c;
        ++on;
      }
    }
  }
  CHECK(on > 0);
  // 0-based columns: the glyph center sits between columns 13 and 14
  CHECK(std::abs(col_sum / on - 13.5) < 1.0);
}

TEST_CASE("mean on-pixel count per digit is stable across seeds") {
  SegmentGeometry geom{2.0, 0.5, 1.0};
  for (int digit = 0; digit <= 9; ++digit) {
    double counts[3];
    for (int s = 0; s < 3; ++s) {
      RngStream rng(500 + static_cast<std::uint64_t>(10 * digit + s));
      const DigitImage img = render_digit(geom, digit, 500, rng);
      int on = 0;
      for (auto p : img.pixels) on += p > 0;
      counts[s] = on;
    }
    const double mean = (counts[0] + counts[1] + counts[2]) / 3.0;
    for (double c : counts) CHECK(std::abs(c - mean) / mean < 0.10);
  }
}

TEST_CASE("generate_dataset shapes and ordering") {
  SegmentGeometry geom;
  RngStream rng(31);
  const DigitDataset train = generate_dataset(geom, 100, 20, rng);
  CHECK(train.images.size() == 1000);
  CHECK(train.n_per_digit == 100);
  for (int cls = 1; cls <= 10; ++cls) {
    CHECK(train.image(cls, 0).digit == digit_for_class(cls));
    CHECK(train.image(cls, 99).digit == digit_for_class(cls));
  }

  RngStream rng2(31);
  const DigitDataset again = generate_dataset(geom, 100, 20, rng2);
  for (size_t i = 0; i < train.images.size(); ++i) {
    CHECK(train.images[i].pixels == again.images[i].pixels);
  }

  RngStream rng3(32);
  const DigitDataset test = generate_dataset(geom, 250, 20, rng3);
  CHECK(test.images.size() == 2500);
}
