#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>

namespace orlicz {

/// SplitMix64 finaliser; a stable 64-bit mixing function.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derive an independent substream seed from a master seed and a path of
/// indices, e.g. {stratum, chunk}. Stable across platforms and runs.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) noexcept;

/// Engine plus the few variates the samplers need. Variates are produced
/// from raw 64-bit output so results do not depend on the standard
/// library's distribution implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_open_low() { return 1.0 - uniform(); }
  /// Standard normal (Box-Muller, one variate per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Run body(i) for i in [0, count) on up to `threads` workers. Work items
/// are handed out dynamically; callers must write results into per-index
/// slots and reduce them in index order afterwards.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace orlicz
