#include "manet/sim_time.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace manet {

SimTime
SimTime::FromSeconds (double seconds)
{
  return SimTime (static_cast<int64_t> (std::llround (seconds * 1e6)));
}

std::string
SimTime::ToString () const
{
  int64_t us = m_us;
  const char *sign = "";
  if (us < 0)
    {
      sign = "-";
      us = -us;
    }
  char buf[48];
  std::snprintf (buf, sizeof buf, "%s%lld.%06lld", sign, static_cast<long long> (us / 1000000),
                 static_cast<long long> (us % 1000000));
  return buf;
}

SimTime
SimTime::Parse (const std::string &text)
{
  if (text.empty ())
    {
      throw std::invalid_argument ("empty time value");
    }
  size_t pos = 0;
  bool negative = false;
  if (text[0] == '-')
    {
      negative = true;
      pos = 1;
    }
  int64_t whole = 0;
  int64_t frac = 0;
  int fracDigits = 0;
  bool seenDot = false;
  bool seenDigit = false;
  for (; pos < text.size (); ++pos)
    {
      char c = text[pos];
      if (c == '.' && !seenDot)
        {
          seenDot = true;
          continue;
        }
      if (c < '0' || c > '9')
        {
          throw std::invalid_argument ("malformed time value: " + text);
        }
      seenDigit = true;
      if (!seenDot)
        {
          whole = whole * 10 + (c - '0');
        }
      else if (fracDigits < 6)
        {
          frac = frac * 10 + (c - '0');
          ++fracDigits;
        }
    }
  if (!seenDigit)
    {
      throw std::invalid_argument ("malformed time value: " + text);
    }
  for (; fracDigits < 6; ++fracDigits)
    {
      frac *= 10;
    }
  int64_t us = whole * 1000000 + frac;
  return SimTime (negative ? -us : us);
}

std::ostream &
operator<< (std::ostream &os, SimTime t)
{
  return os << t.ToString () << "s";
}

} // namespace manet
