#ifndef MANET_SCENARIO_H
#define MANET_SCENARIO_H

#include "manet/aodv.h"
#include "manet/dsdv.h"
#include "manet/dsr.h"
#include "manet/engine.h"
#include "manet/metrics.h"
#include "manet/mobility.h"
#include "manet/radio.h"
#include "manet/routing.h"
#include "manet/traffic.h"

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace manet {

struct ScenarioConfig
{
  Protocol protocol = Protocol::Dsdv;
  uint32_t nodeCount = 50;
  Area area;
  double minSpeed = 0.1;
  double maxSpeed = 10;
  /// nullopt means nodes never move.
  std::optional<SimTime> pause = Seconds (20);
  SimTime simTime = Seconds (100);
  SimTime warmup = Seconds (10);
  /// After traffic stops at simTime, the run continues this long so packets
  /// already in flight can arrive. No packets are generated in this window.
  SimTime drain = Seconds (5);
  uint32_t nFlows = 10;
  double rate = 4;
  uint32_t packetSize = 512;
  uint64_t seed = 1;
  double range = 250;
  double bandwidth = 2e6;
  SimTime perHopLatency = Millis (1);
  MacParams mac;
  DsdvParams dsdv;
  AodvParams aodv;
  DsrParams dsr;

  bool operator== (const ScenarioConfig &) const = default;
};

struct FieldError
{
  std::string field;
  std::string message;
};

class ConfigInvalid : public std::invalid_argument
{
public:
  explicit ConfigInvalid (std::vector<FieldError> errors);

  const std::vector<FieldError> &
  Errors () const
  {
    return m_errors;
  }

private:
  std::vector<FieldError> m_errors;
};

/// Every violated constraint, empty when the config is usable.
std::vector<FieldError> CheckConfig (const ScenarioConfig &config);

/// Throws ConfigInvalid listing every violated constraint.
void ValidateConfig (const ScenarioConfig &config);

/// Test and tooling overrides for the pieces a config would otherwise draw.
struct SimulationHooks
{
  /// Fixed start positions; nodes still follow random waypoint unless static.
  std::optional<std::vector<Position>> positions;
  /// Replaces random waypoint entirely.
  std::shared_ptr<MobilityModel> mobility;
  /// Replaces the seeded flow selection.
  std::optional<std::vector<Flow>> flows;
};

struct DropCounters
{
  std::map<DropReason, uint64_t> data;
  std::map<std::string, uint64_t> control;
};

/**
 * One wired-up run: engine, mobility, radio, a routing instance per node and
 * the CBR applications.
 *
 * Random streams are derived from the config seed by label: "mobility",
 * "traffic", "mac" and one "protocol" stream per node.
 */
class Simulation
{
public:
  explicit Simulation (const ScenarioConfig &config, SimulationHooks hooks = {});
  ~Simulation ();

  Simulation (const Simulation &) = delete;
  Simulation &operator= (const Simulation &) = delete;

  /// Runs to simTime + drain. Calling it twice is a no-op.
  void Run ();

  /// Runs to an intermediate time; useful for inspecting protocol state.
  void RunUntil (SimTime t);

  /// Metrics over packets generated in [warmup, simTime).
  MetricsRecord Metrics () const;

  /// Trace restricted to packets generated at or after warmup.
  PacketTrace MeasuredTrace () const;

  const PacketTrace &
  FullTrace () const
  {
    return m_trace;
  }

  const ScenarioConfig &
  Config () const
  {
    return m_config;
  }

  Engine &
  GetEngine ()
  {
    return m_engine;
  }

  MobilityModel &
  Mobility ()
  {
    return *m_mobility;
  }

  Radio &
  GetRadio ()
  {
    return *m_radio;
  }

  const std::vector<Flow> &
  Flows () const
  {
    return m_flows;
  }

  RoutingProtocol &Routing (NodeId node);

  template <typename P>
  P &
  RoutingAs (NodeId node)
  {
    return dynamic_cast<P &> (Routing (node));
  }

  const DropCounters &
  Drops () const
  {
    return m_drops;
  }

private:
  class Node;
  friend class Node;

  ScenarioConfig m_config;
  Engine m_engine;
  std::shared_ptr<MobilityModel> m_mobility;
  std::unique_ptr<Radio> m_radio;
  std::vector<std::unique_ptr<Node>> m_nodes;
  std::vector<Flow> m_flows;
  std::vector<std::unique_ptr<CbrApplication>> m_apps;
  PacketTrace m_trace;
  DropCounters m_drops;
  bool m_finished = false;
};

/// Builds and runs a scenario. When traceOut is given, the measured trace is
/// written to it as CSV.
MetricsRecord RunScenario (const ScenarioConfig &config, std::ostream *traceOut = nullptr);

} // namespace manet

#endif
