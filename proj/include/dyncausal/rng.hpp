#pragma once

#include <cstdint>
#include <string_view>

namespace dyncausal {

/// Counter-based generator "splitmix64-ctr/v1".
///
/// Draw i of stream s under seed k is mix64(key(k, s) + (i + 1) * 0x9E3779B97F4A7C15),
/// where key(k, s) = mix64(k ^ mix64(s)) and mix64 is the SplitMix64 finalizer.
/// The state is just (key, counter), so it serializes as two integers and any
/// draw can be recomputed without replaying the stream. Normal deviates use
/// Box-Muller on two consecutive draws; no stdlib distribution is involved.
class CounterRng {
 public:
  static constexpr std::string_view kName = "splitmix64-ctr/v1";

  CounterRng() = default;
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  static std::uint64_t mix64(std::uint64_t z) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 bits of resolution.
  double next_uniform() noexcept;
  double next_uniform(double lo, double hi) noexcept;
  double next_normal() noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  friend bool operator==(const CounterRng&, const CounterRng&) = default;

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

namespace rng_stream {
inline constexpr std::uint64_t kPerturbation = 1;
inline constexpr std::uint64_t kObservationNoise = 2;
inline constexpr std::uint64_t kPolicy = 3;
inline constexpr std::uint64_t kScenarioGenerator = 4;
}  // namespace rng_stream

}  // namespace dyncausal
