#pragma once

#include <cstdint>
#include <limits>

namespace ginibre {

/// Counter-based splittable generator. A stream is identified by (seed, stream id);
/// output i is a bijective mix of key + i * golden-gamma, so streams can be split
/// and replayed without sharing state.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Independent child stream; the parent is not advanced.
  RngStream split(std::uint64_t id) const;

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double exponential();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace ginibre
