#include "manet/routing.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace manet {

const char *
ToString (Protocol p)
{
  switch (p)
    {
    case Protocol::Dsdv:
      return "DSDV";
    case Protocol::Aodv:
      return "AODV";
    case Protocol::Dsr:
      return "DSR";
    }
  return "?";
}

Protocol
ParseProtocol (const std::string &name)
{
  std::string upper = name;
  std::transform (upper.begin (), upper.end (), upper.begin (),
                  [] (unsigned char c) { return static_cast<char> (std::toupper (c)); });
  if (upper == "DSDV")
    {
      return Protocol::Dsdv;
    }
  if (upper == "AODV")
    {
      return Protocol::Aodv;
    }
  if (upper == "DSR")
    {
      return Protocol::Dsr;
    }
  throw std::invalid_argument ("unknown protocol '" + name + "'");
}

const char *
ToString (DropReason r)
{
  switch (r)
    {
    case DropReason::NoRoute:
      return "no-route";
    case DropReason::NoRouteEver:
      return "discovery-failed";
    case DropReason::LinkBroken:
      return "link-broken";
    case DropReason::BufferOverflow:
      return "buffer-overflow";
    case DropReason::MalformedRoute:
      return "malformed-route";
    }
  return "?";
}

const char *
ToString (ForwardDecision d)
{
  switch (d)
    {
    case ForwardDecision::Discarded:
      return "discarded";
    case ForwardDecision::Replied:
      return "replied";
    case ForwardDecision::Rebroadcast:
      return "rebroadcast";
    case ForwardDecision::Forwarded:
      return "forwarded";
    case ForwardDecision::Completed:
      return "completed";
    case ForwardDecision::Dropped:
      return "dropped";
    }
  return "?";
}

} // namespace manet
