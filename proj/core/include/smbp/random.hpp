#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace smbp {

/// xoshiro256** seeded through SplitMix64 from (seed XOR stream).
///
/// Output depends only on (seed, stream), so independent replications can run
/// on any thread and still reproduce bit for bit. Normal variates use the
/// Box-Muller transform, uniforms the top 53 bits of each 64-bit draw.
class Rng {
 public:
  static constexpr std::string_view algorithm = "xoshiro256**/splitmix64";

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next() noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;

  /// Standard normal.
  double normal() noexcept;

  /// Gamma(shape, 1) by Marsaglia-Tsang rejection.
  double gamma(double shape) noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> state_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer, also used to hash configuration strings into seeds.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// 64-bit FNV-1a of a byte string.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace smbp
