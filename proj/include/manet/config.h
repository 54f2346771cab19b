#ifndef MANET_CONFIG_H
#define MANET_CONFIG_H

#include "manet/scenario.h"
#include "manet/sweep.h"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace manet {

/// Scenario and sweep settings read from one `key = value` file.
///
/// Blank lines and lines starting with '#' are ignored. Scenario keys:
/// protocol, nodes, width, height, min_speed, max_speed, pause (seconds or
/// "static"), sim_time, warmup, drain, flows, rate, packet_size, seed, mac
/// (ideal|realistic), range, bandwidth, latency. Sweep keys take
/// comma-separated lists: protocols, node_counts, pause_times, plus
/// seeds_per_cell.
struct ConfigFile
{
  ScenarioConfig scenario;
  SweepSpec sweep;
};

/// Parses and applies every line; collects all problems into one ConfigInvalid.
ConfigFile ParseConfig (std::istream &is, const ConfigFile &defaults = {});

ConfigFile LoadConfig (const std::filesystem::path &path, const ConfigFile &defaults = {});

/// Sets one scenario field from text. Throws ConfigInvalid naming the key.
void SetScenarioField (ScenarioConfig &config, const std::string &key, const std::string &value);

/// Sets one sweep field from text. Throws ConfigInvalid naming the key.
void SetSweepField (SweepSpec &spec, const std::string &key, const std::string &value);

/// Canonical `key = value` rendering that ParseConfig reads back unchanged.
std::string FormatScenario (const ScenarioConfig &config);

} // namespace manet

#endif
