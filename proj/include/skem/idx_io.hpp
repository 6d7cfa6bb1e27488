#pragma once

#include <stdexcept>
#include <string>

#include "skem/digits.hpp"

namespace skem {

class IdxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BadMagicError : public IdxError {
 public:
  using IdxError::IdxError;
};

class TruncatedFileError : public IdxError {
 public:
  using IdxError::IdxError;
};

class DimensionMismatchError : public IdxError {
 public:
  using IdxError::IdxError;
};

// MNIST-style IDX containers, big-endian: images as IDX3 (magic 0x00000803,
// dims count x 28 x 28), labels as IDX1 (magic 0x00000801) holding raw digit
// values 0..9 in the same order.
void write_idx(const DigitDataset& dataset, const std::string& images_path,
               const std::string& labels_path);

/// Rebuilds the class-major [1..9,0] layout from the stored digit labels.
/// Requires an equal number of images per digit.
DigitDataset read_idx(const std::string& images_path, const std::string& labels_path);

}  // namespace skem
