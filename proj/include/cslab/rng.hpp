#ifndef CSLAB_RNG_HPP
#define CSLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>

namespace cslab {

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for object `index` of kind `tag` under `master`. Independent of the
// order in which objects are generated.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                    std::uint64_t index) noexcept
{
  std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
  h = mix64(h ^ (tag + 0x9e3779b97f4a7c15ULL));
  h = mix64(h ^ (index + 0x3c6ef372fe94f82bULL));
  return h;
}

/// Counter-based 64-bit generator: the i-th output is a pure function of
/// (key, i), so streams can be split by deriving keys and never share state.
/// Satisfies UniformRandomBitGenerator.
class CounterRng
{
public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) noexcept : key_(mix64(seed)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept
  {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t counter() const noexcept { return counter_; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log argument.
  double uniform_positive() noexcept
  {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  // Unbiased integer in [0, n) by Lemire's multiply-and-reject.
  std::uint64_t below(std::uint64_t n) noexcept
  {
    std::uint64_t x = (*this)();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<unsigned __int128>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Two independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair() noexcept
  {
    const double radius = std::sqrt(-2.0 * std::log(uniform_positive()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  double normal() noexcept { return normal_pair().first; }

  double rademacher() noexcept { return ((*this)() >> 63) ? 1.0 : -1.0; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Purpose tags for derive_seed.
enum class SeedTag : std::uint64_t
{
  recovery_trial = 1,
  phase_cell = 2,
  smin_trial = 3,
  sum_tail_trial = 4,
  concentration_trial = 5,
  gram_trial = 6,
  matrix = 16,
  signal = 17,
  test_vector = 18,
};

constexpr std::uint64_t derive_seed(std::uint64_t master, SeedTag tag, std::uint64_t index) noexcept
{
  return derive_seed(master, static_cast<std::uint64_t>(tag), index);
}

} // namespace cslab

#endif
