#pragma once

#include <cstdint>
#include <limits>

namespace mltm {

/// SplitMix64 generator.
///
/// The whole toolkit draws randomness from this one algorithm so that sampler
/// trajectories are reproducible bit-for-bit on every platform. Each step is
///
///     state += 0x9e3779b97f4a7c15
///     z = state
///     z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
///     z = (z ^ (z >> 27)) * 0x94d049bb133111eb
///     return z ^ (z >> 31)
///
/// Independent streams are keyed by (seed, stream id): the stream's initial
/// state is mix64(seed ^ mix64(stream_id + 0x632be59bd9b4e019)), where mix64 is
/// the output finalizer above. Training uses one stream per document, so a
/// document's draws do not depend on how many tokens other documents hold.
///
/// Conversions: uniform() = (next() >> 11) * 2^-53; below(n) = high 64 bits of
/// next() * n (multiply-shift, bias < n / 2^64).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t stream_id);
  static std::uint64_t mix64(std::uint64_t z);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  double uniform();
  std::uint64_t below(std::uint64_t n);

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Stream ids used by the samplers: side in the top bits, document index below.
constexpr std::uint64_t document_stream(int side, std::uint64_t doc) {
  return (static_cast<std::uint64_t>(side + 1) << 48) | doc;
}

}  // namespace mltm
