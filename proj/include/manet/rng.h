#ifndef MANET_RNG_H
#define MANET_RNG_H

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace manet {

/**
 * A labeled random stream derived from a master seed.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard. Distributions are implemented here rather than taken from
 * <random> because those are not required to be identical across libraries.
 */
class RngStream
{
public:
  RngStream (uint64_t masterSeed, std::string_view label, uint64_t index = 0);

  uint64_t NextU64 ();

  /// Uniform in [0, 1) with 53 bits of resolution.
  double Uniform ();

  /// Uniform in [lo, hi).
  double Uniform (double lo, double hi);

  /// Uniform in [0, n). n must be positive.
  uint64_t UniformInt (uint64_t n);

  /// Uniform in [lo, hi] inclusive.
  int64_t UniformInt (int64_t lo, int64_t hi);

  uint64_t
  Seed () const
  {
    return m_seed;
  }

  const std::string &
  Label () const
  {
    return m_label;
  }

  /// The 64-bit seed fed to the engine for (masterSeed, label, index).
  static uint64_t DeriveSeed (uint64_t masterSeed, std::string_view label, uint64_t index);

private:
  std::string m_label;
  uint64_t m_seed;
  std::mt19937_64 m_engine;
};

} // namespace manet

#endif
