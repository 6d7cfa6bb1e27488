#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "skem/classifier.hpp"
#include "skem/model.hpp"

namespace skem {

/// Malformed or inconsistent model file.
class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Plain-text model format (see docs/formats.md). Values are written in
// scientific notation with 17 significant digits, so save/load round-trips
// are bit-exact for doubles.
void save_model(const SharedKernelModel& model, std::ostream& out);
void save_model(const SharedKernelModel& model, const std::string& path);
SharedKernelModel load_model(std::istream& in);
SharedKernelModel load_model(const std::string& path);

// Composite wrapper: group column subsets (1-based in the file) followed by
// an embedded plain model block per group.
void save_composite(const CompositeModel& model, std::ostream& out);
void save_composite(const CompositeModel& model, const std::string& path);
CompositeModel load_composite(std::istream& in);
CompositeModel load_composite(const std::string& path);

/// Loads either format; a plain model becomes a single group over columns 0..M-1.
CompositeModel load_composite_or_model(const std::string& path);

}  // namespace skem
