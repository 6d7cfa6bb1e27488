#include "skem/idx_io.hpp"

#include <array>
#include <cstdint>
#include <fstream>
#include <vector>

namespace skem {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

void write_u32_be(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> bytes = {
      static_cast<char>((v >> 24) & 0xff), static_cast<char>((v >> 16) & 0xff),
      static_cast<char>((v >> 8) & 0xff), static_cast<char>(v & 0xff)};
  out.write(bytes.data(), 4);
}

std::uint32_t read_u32_be(std::istream& in, const std::string& path) {
  std::array<unsigned char, 4> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), 4)) {
    throw TruncatedFileError("truncated IDX header: " + path);
  }
  return (static_cast<std::uint32_t>(bytes[0]) << 24) |
         (static_cast<std::uint32_t>(bytes[1]) << 16) |
         (static_cast<std::uint32_t>(bytes[2]) << 8) |
         static_cast<std::uint32_t>(bytes[3]);
}

}  // namespace

void write_idx(const DigitDataset& dataset, const std::string& images_path,
               const std::string& labels_path) {
  if (dataset.empty()) {
    throw std::invalid_argument("refusing to write an empty dataset");
  }
  const std::uint32_t count = static_cast<std::uint32_t>(dataset.images.size());

  std::ofstream img(images_path, std::ios::binary);
  if (!img) throw std::runtime_error("cannot open for writing: " + images_path);
  write_u32_be(img, kImagesMagic);
  write_u32_be(img, count);
  write_u32_be(img, kImageSize);
  write_u32_be(img, kImageSize);
  for (const auto& image : dataset.images) {
    img.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
  }
  if (!img) throw std::runtime_error("write failed: " + images_path);

  std::ofstream lab(labels_path, std::ios::binary);
  if (!lab) throw std::runtime_error("cannot open for writing: " + labels_path);
  write_u32_be(lab, kLabelsMagic);
  write_u32_be(lab, count);
  for (const auto& image : dataset.images) {
    const char digit = static_cast<char>(image.digit);
    lab.write(&digit, 1);
  }
  if (!lab) throw std::runtime_error("write failed: " + labels_path);
}

DigitDataset read_idx(const std::string& images_path, const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw std::runtime_error("cannot open for reading: " + images_path);
  if (read_u32_be(img, images_path) != kImagesMagic) {
    throw BadMagicError("bad IDX3 magic in " + images_path);
  }
  const std::uint32_t count = read_u32_be(img, images_path);
  const std::uint32_t rows = read_u32_be(img, images_path);
  const std::uint32_t cols = read_u32_be(img, images_path);
  if (rows != kImageSize || cols != kImageSize) {
    throw DimensionMismatchError("expected 28x28 images in " + images_path);
  }

  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw std::runtime_error("cannot open for reading: " + labels_path);
  if (read_u32_be(lab, labels_path) != kLabelsMagic) {
    throw BadMagicError("bad IDX1 magic in " + labels_path);
  }
  const std::uint32_t label_count = read_u32_be(lab, labels_path);
  if (label_count != count) {
    throw DimensionMismatchError("image and label counts differ");
  }

  std::vector<DigitImage> in_file_order(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    auto& image = in_file_order[i];
    if (!img.read(reinterpret_cast<char*>(image.pixels.data()),
                  static_cast<std::streamsize>(image.pixels.size()))) {
      throw TruncatedFileError("truncated image data in " + images_path);
    }
    unsigned char digit = 0;
    if (!lab.read(reinterpret_cast<char*>(&digit), 1)) {
      throw TruncatedFileError("truncated label data in " + labels_path);
    }
    if (digit > 9) {
      throw DimensionMismatchError("label out of range 0..9 in " + labels_path);
    }
    image.digit = digit;
  }

  // regroup by digit, preserving file order within each digit
  std::array<std::vector<DigitImage>, 10> by_digit;
  for (const auto& image : in_file_order) {
    by_digit[static_cast<size_t>(image.digit)].push_back(image);
  }
  const size_t per_digit = by_digit[1].size();
  for (int digit = 0; digit <= 9; ++digit) {
    if (by_digit[static_cast<size_t>(digit)].size() != per_digit) {
      throw DimensionMismatchError("unequal image counts per digit");
    }
  }
  if (per_digit == 0) throw DimensionMismatchError("dataset contains no images");

  DigitDataset ds;
  ds.n_per_digit = static_cast<int>(per_digit);
  ds.images.reserve(count);
  for (int cls = 1; cls <= 10; ++cls) {
    auto& bucket = by_digit[static_cast<size_t>(digit_for_class(cls))];
    for (const auto& image : bucket) ds.images.push_back(image);
  }
  return ds;
}

}  // namespace skem
