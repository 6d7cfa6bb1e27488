#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace skem {

// Seeded random stream with deterministic, library-independent output:
// uniforms are 53-bit dyadic rationals from mt19937_64 and normals come
// from Box-Muller on those, so the exact draw sequence depends only on
// the seed (std::normal_distribution would tie it to the stdlib).
//
// Substreams for logically independent work units (one per Monte Carlo
// run, one per rendered image, ...) are derived from the parent seed and
// a stream id, never from the parent's current state, so results do not
// depend on evaluation order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// Uniform draw on [0, 1).
  double uniform();

  /// Standard normal draw.
  double normal();

  /// Vector of n independent standard normals.
  Eigen::VectorXd normal_vector(Eigen::Index n);

  /// Independent stream identified by (seed, stream_id).
  RngStream derive(std::uint64_t stream_id) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace skem
