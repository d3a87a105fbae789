#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

namespace tscp {

/// Mixes a root seed with a stream identifier into an independent child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Counter-based generator: the i-th output is a bijective mix of
/// (key, i), so any stream can be split into independent children without
/// sharing state. Normals come from Box-Muller on two uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(seed) {}

  /// Child generator for `stream`; does not advance this generator.
  [[nodiscard]] Rng split(std::uint64_t stream) const { return Rng(derive_seed(key_, stream)); }

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Uniform integer in [0, bound), unbiased.
  std::size_t below(std::size_t bound);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_normal_;
};

}  // namespace tscp
