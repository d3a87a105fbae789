#include "tscp/rng.hpp"

#include <cmath>
#include <numbers>

namespace tscp {
namespace {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream * kGolden + 0x632be59bd9b4e019ULL));
}

std::uint64_t Rng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double Rng::uniform() {
  // 53 random bits, shifted by half an ulp so that 0 is never returned.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_normal_) {
    double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  return r * std::cos(theta);
}

std::size_t Rng::below(std::size_t bound) {
  if (bound <= 1) return 0;
  // Lemire's multiply-shift with rejection.
  const auto b = static_cast<std::uint64_t>(bound);
  std::uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * b;
  auto low = static_cast<std::uint64_t>(m);
  if (low < b) {
    const std::uint64_t threshold = (0 - b) % b;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * b;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

}  // namespace tscp
