#include "manet/config.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace manet {

namespace {

std::string
Trim (const std::string &s)
{
  size_t b = s.find_first_not_of (" \t\r");
  if (b == std::string::npos)
    {
      return "";
    }
  size_t e = s.find_last_not_of (" \t\r");
  return s.substr (b, e - b + 1);
}

std::string
Lower (std::string s)
{
  std::transform (s.begin (), s.end (), s.begin (),
                  [] (unsigned char c) { return static_cast<char> (std::tolower (c)); });
  return s;
}

[[noreturn]] void
Bad (const std::string &key, const std::string &message)
{
  throw ConfigInvalid ({{key, message}});
}

double
ToDouble (const std::string &key, const std::string &value)
{
  try
    {
      size_t used = 0;
      double v = std::stod (value, &used);
      if (used == value.size ())
        {
          return v;
        }
    }
  catch (const std::exception &)
    {
    }
  Bad (key, "expected a number, got '" + value + "'");
}

uint64_t
ToUnsigned (const std::string &key, const std::string &value)
{
  if (value.empty () || !std::all_of (value.begin (), value.end (), ::isdigit))
    {
      Bad (key, "expected a non-negative integer, got '" + value + "'");
    }
  try
    {
      return std::stoull (value);
    }
  catch (const std::exception &)
    {
      Bad (key, "integer out of range: '" + value + "'");
    }
}

uint32_t
ToU32 (const std::string &key, const std::string &value)
{
  uint64_t v = ToUnsigned (key, value);
  if (v > UINT32_MAX)
    {
      Bad (key, "integer out of range: '" + value + "'");
    }
  return static_cast<uint32_t> (v);
}

SimTime
ToTime (const std::string &key, const std::string &value)
{
  try
    {
      return SimTime::Parse (value);
    }
  catch (const std::exception &)
    {
      Bad (key, "expected seconds, got '" + value + "'");
    }
}

std::vector<std::string>
SplitList (const std::string &value)
{
  std::vector<std::string> out;
  std::stringstream ss (value);
  std::string item;
  while (std::getline (ss, item, ','))
    {
      item = Trim (item);
      if (!item.empty ())
        {
          out.push_back (item);
        }
    }
  return out;
}

} // namespace

void
SetScenarioField (ScenarioConfig &c, const std::string &key, const std::string &value)
{
  if (key == "protocol")
    {
      try
        {
          c.protocol = ParseProtocol (value);
        }
      catch (const std::invalid_argument &)
        {
          Bad (key, "expected DSDV, AODV or DSR, got '" + value + "'");
        }
    }
  else if (key == "nodes")
    {
      c.nodeCount = ToU32 (key, value);
    }
  else if (key == "width")
    {
      c.area.width = ToDouble (key, value);
    }
  else if (key == "height")
    {
      c.area.height = ToDouble (key, value);
    }
  else if (key == "min_speed")
    {
      c.minSpeed = ToDouble (key, value);
    }
  else if (key == "max_speed")
    {
      c.maxSpeed = ToDouble (key, value);
    }
  else if (key == "pause")
    {
      c.pause = Lower (value) == "static" ? std::nullopt : std::optional (ToTime (key, value));
    }
  else if (key == "sim_time")
    {
      c.simTime = ToTime (key, value);
    }
  else if (key == "warmup")
    {
      c.warmup = ToTime (key, value);
    }
  else if (key == "drain")
    {
      c.drain = ToTime (key, value);
    }
  else if (key == "flows")
    {
      c.nFlows = ToU32 (key, value);
    }
  else if (key == "rate")
    {
      c.rate = ToDouble (key, value);
    }
  else if (key == "packet_size")
    {
      c.packetSize = ToU32 (key, value);
    }
  else if (key == "seed")
    {
      c.seed = ToUnsigned (key, value);
    }
  else if (key == "mac")
    {
      std::string v = Lower (value);
      if (v == "ideal")
        {
          c.mac.mode = MacMode::Ideal;
        }
      else if (v == "realistic")
        {
          c.mac.mode = MacMode::Realistic;
        }
      else
        {
          Bad (key, "expected ideal or realistic, got '" + value + "'");
        }
    }
  else if (key == "range")
    {
      c.range = ToDouble (key, value);
    }
  else if (key == "bandwidth")
    {
      c.bandwidth = ToDouble (key, value);
    }
  else if (key == "latency")
    {
      c.perHopLatency = ToTime (key, value);
    }
  else
    {
      Bad (key, "unknown key");
    }
}

void
SetSweepField (SweepSpec &spec, const std::string &key, const std::string &value)
{
  auto items = SplitList (value);
  if (key == "protocols")
    {
      spec.protocols.clear ();
      for (const auto &item : items)
        {
          try
            {
              spec.protocols.push_back (ParseProtocol (item));
            }
          catch (const std::invalid_argument &)
            {
              Bad (key, "unknown protocol '" + item + "'");
            }
        }
    }
  else if (key == "node_counts")
    {
      spec.nodeCounts.clear ();
      for (const auto &item : items)
        {
          spec.nodeCounts.push_back (ToU32 (key, item));
        }
    }
  else if (key == "pause_times")
    {
      spec.pauseTimes.clear ();
      for (const auto &item : items)
        {
          spec.pauseTimes.push_back (Lower (item) == "static" ? std::nullopt
                                                              : std::optional (ToTime (key, item)));
        }
    }
  else if (key == "seeds_per_cell")
    {
      spec.seedsPerCell = ToU32 (key, value);
    }
  else
    {
      Bad (key, "unknown key");
    }
}

ConfigFile
ParseConfig (std::istream &is, const ConfigFile &defaults)
{
  static const std::vector<std::string> sweepKeys{"protocols", "node_counts", "pause_times",
                                                  "seeds_per_cell"};
  ConfigFile out = defaults;
  std::vector<FieldError> errors;
  std::string line;
  size_t lineNo = 0;
  while (std::getline (is, line))
    {
      ++lineNo;
      std::string text = Trim (line);
      if (text.empty () || text[0] == '#')
        {
          continue;
        }
      size_t eq = text.find ('=');
      if (eq == std::string::npos)
        {
          errors.push_back ({"line " + std::to_string (lineNo), "expected key = value"});
          continue;
        }
      std::string key = Lower (Trim (text.substr (0, eq)));
      std::string value = Trim (text.substr (eq + 1));
      try
        {
          if (std::find (sweepKeys.begin (), sweepKeys.end (), key) != sweepKeys.end ())
            {
              SetSweepField (out.sweep, key, value);
            }
          else
            {
              SetScenarioField (out.scenario, key, value);
            }
        }
      catch (const ConfigInvalid &e)
        {
          for (const auto &fe : e.Errors ())
            {
              errors.push_back ({fe.field + " (line " + std::to_string (lineNo) + ")", fe.message});
            }
        }
    }
  if (!errors.empty ())
    {
      throw ConfigInvalid (std::move (errors));
    }
  return out;
}

ConfigFile
LoadConfig (const std::filesystem::path &path, const ConfigFile &defaults)
{
  std::ifstream in (path);
  if (!in)
    {
      throw ConfigInvalid ({{"config", "cannot open '" + path.string () + "'"}});
    }
  return ParseConfig (in, defaults);
}

std::string
FormatScenario (const ScenarioConfig &c)
{
  std::ostringstream os;
  os << "protocol = " << ToString (c.protocol) << "\n";
  os << "nodes = " << c.nodeCount << "\n";
  os << "width = " << FormatValue (c.area.width) << "\n";
  os << "height = " << FormatValue (c.area.height) << "\n";
  os << "min_speed = " << FormatValue (c.minSpeed) << "\n";
  os << "max_speed = " << FormatValue (c.maxSpeed) << "\n";
  os << "pause = " << FormatPause (c.pause) << "\n";
  os << "sim_time = " << c.simTime.ToString () << "\n";
  os << "warmup = " << c.warmup.ToString () << "\n";
  os << "drain = " << c.drain.ToString () << "\n";
  os << "flows = " << c.nFlows << "\n";
  os << "rate = " << FormatValue (c.rate) << "\n";
  os << "packet_size = " << c.packetSize << "\n";
  os << "seed = " << c.seed << "\n";
  os << "mac = " << (c.mac.mode == MacMode::Ideal ? "ideal" : "realistic") << "\n";
  os << "range = " << FormatValue (c.range) << "\n";
  os << "bandwidth = " << FormatValue (c.bandwidth) << "\n";
  os << "latency = " << c.perHopLatency.ToString () << "\n";
  return os.str ();
}

} // namespace manet
