#include "manet/rng.h"

#include <cassert>

namespace manet {

namespace {

uint64_t
SplitMix64 (uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t
Fnv1a (std::string_view s)
{
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s)
    {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  return h;
}

} // namespace

uint64_t
RngStream::DeriveSeed (uint64_t masterSeed, std::string_view label, uint64_t index)
{
  uint64_t h = SplitMix64 (masterSeed);
  h = SplitMix64 (h ^ Fnv1a (label));
  h = SplitMix64 (h ^ index);
  return h;
}

RngStream::RngStream (uint64_t masterSeed, std::string_view label, uint64_t index)
  : m_label (label),
    m_seed (DeriveSeed (masterSeed, label, index)),
    m_engine (m_seed)
{
}

uint64_t
RngStream::NextU64 ()
{
  return m_engine ();
}

double
RngStream::Uniform ()
{
  return static_cast<double> (NextU64 () >> 11) * 0x1.0p-53;
}

double
RngStream::Uniform (double lo, double hi)
{
  return lo + (hi - lo) * Uniform ();
}

uint64_t
RngStream::UniformInt (uint64_t n)
{
  assert (n > 0);
  // Rejection keeps the draw unbiased.
  uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do
    {
      x = NextU64 ();
    }
  while (x >= limit);
  return x % n;
}

int64_t
RngStream::UniformInt (int64_t lo, int64_t hi)
{
  assert (hi >= lo);
  uint64_t span = static_cast<uint64_t> (hi - lo) + 1;
  if (span == 0)
    {
      return static_cast<int64_t> (NextU64 ());
    }
  return lo + static_cast<int64_t> (UniformInt (span));
}

} // namespace manet
