#ifndef MANET_SIM_TIME_H
#define MANET_SIM_TIME_H

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace manet {

/**
 * Simulation time as a signed count of microseconds.
 *
 * Used both for instants on the simulation clock and for durations. Integer
 * ticks keep event ordering identical on every platform.
 */
class SimTime
{
public:
  constexpr SimTime () = default;

  static constexpr SimTime
  FromMicros (int64_t us)
  {
    return SimTime (us);
  }

  static constexpr SimTime
  FromMillis (int64_t ms)
  {
    return SimTime (ms * 1000);
  }

  /// Rounds to the nearest microsecond.
  static SimTime FromSeconds (double seconds);

  static constexpr SimTime
  Max ()
  {
    return SimTime (std::numeric_limits<int64_t>::max ());
  }

  constexpr int64_t
  Micros () const
  {
    return m_us;
  }

  double
  Seconds () const
  {
    return static_cast<double> (m_us) / 1e6;
  }

  /// Fixed six-decimal rendering, e.g. "12.000250". Exact for every tick.
  std::string ToString () const;

  /// Parses the format produced by ToString() without going through floating point.
  static SimTime Parse (const std::string &text);

  constexpr auto operator<=> (const SimTime &) const = default;

  constexpr SimTime
  operator+ (SimTime o) const
  {
    return SimTime (m_us + o.m_us);
  }
  constexpr SimTime
  operator- (SimTime o) const
  {
    return SimTime (m_us - o.m_us);
  }
  constexpr SimTime &
  operator+= (SimTime o)
  {
    m_us += o.m_us;
    return *this;
  }
  constexpr SimTime
  operator* (int64_t k) const
  {
    return SimTime (m_us * k);
  }

private:
  constexpr explicit SimTime (int64_t us)
    : m_us (us)
  {
  }

  int64_t m_us = 0;
};

std::ostream &operator<< (std::ostream &os, SimTime t);

constexpr SimTime
Seconds (int64_t s)
{
  return SimTime::FromMicros (s * 1000000);
}

constexpr SimTime
Millis (int64_t ms)
{
  return SimTime::FromMillis (ms);
}

} // namespace manet

#endif
