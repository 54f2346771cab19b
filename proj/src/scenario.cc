#include "manet/scenario.h"

#include <algorithm>
#include <ostream>

namespace manet {

namespace {

std::string
JoinErrors (const std::vector<FieldError> &errors)
{
  std::string text = "invalid scenario config:";
  for (const auto &e : errors)
    {
      text += " " + e.field + ": " + e.message + ";";
    }
  return text;
}

} // namespace

ConfigInvalid::ConfigInvalid (std::vector<FieldError> errors)
  : std::invalid_argument (JoinErrors (errors)),
    m_errors (std::move (errors))
{
}

std::vector<FieldError>
CheckConfig (const ScenarioConfig &c)
{
  std::vector<FieldError> errors;
  auto fail = [&errors] (const char *field, std::string message) {
    errors.push_back ({field, std::move (message)});
  };
  if (c.nodeCount < 2)
    {
      fail ("nodes", "need at least 2 nodes");
    }
  if (!(c.area.width > 0) || !(c.area.height > 0))
    {
      fail ("area", "width and height must be positive");
    }
  if (!(c.minSpeed > 0))
    {
      fail ("min_speed", "must be positive");
    }
  if (!(c.maxSpeed >= c.minSpeed))
    {
      fail ("max_speed", "must be at least min_speed");
    }
  if (c.pause && *c.pause < SimTime ())
    {
      fail ("pause", "must be non-negative or static");
    }
  if (c.warmup < SimTime ())
    {
      fail ("warmup", "must be non-negative");
    }
  if (!(c.simTime > c.warmup))
    {
      fail ("sim_time", "must exceed warmup");
    }
  if (c.drain < SimTime ())
    {
      fail ("drain", "must be non-negative");
    }
  if (c.nFlows == 0)
    {
      fail ("flows", "must be positive");
    }
  else if (2 * static_cast<uint64_t> (c.nFlows) > c.nodeCount)
    {
      fail ("flows", "needs 2 distinct endpoints per flow, at most nodes/2 flows");
    }
  if (!(c.rate > 0))
    {
      fail ("rate", "must be positive");
    }
  if (c.packetSize < kFrameHeaderBytes)
    {
      fail ("packet_size", "must be at least " + std::to_string (kFrameHeaderBytes) + " bytes");
    }
  if (!(c.range > 0))
    {
      fail ("range", "must be positive");
    }
  if (!(c.bandwidth > 0))
    {
      fail ("bandwidth", "must be positive");
    }
  if (c.perHopLatency < SimTime ())
    {
      fail ("latency", "must be non-negative");
    }
  return errors;
}

void
ValidateConfig (const ScenarioConfig &config)
{
  auto errors = CheckConfig (config);
  if (!errors.empty ())
    {
      throw ConfigInvalid (std::move (errors));
    }
}

class Simulation::Node : public NodeServices
{
public:
  Node (Simulation &sim, NodeId id)
    : m_sim (sim),
      m_id (id),
      m_rng (sim.m_config.seed, "protocol", id)
  {
    switch (sim.m_config.protocol)
      {
      case Protocol::Dsdv:
        m_routing = std::make_unique<Dsdv> (*this, sim.m_config.dsdv);
        break;
      case Protocol::Aodv:
        m_routing = std::make_unique<Aodv> (*this, sim.m_config.aodv);
        break;
      case Protocol::Dsr:
        m_routing = std::make_unique<Dsr> (*this, sim.m_config.dsr);
        break;
      }
  }

  RoutingProtocol &
  Routing ()
  {
    return *m_routing;
  }

  NodeId
  Self () const override
  {
    return m_id;
  }

  SimTime
  Now () const override
  {
    return m_sim.m_engine.Now ();
  }

  EventHandle
  ScheduleTimer (SimTime delay, std::function<void ()> fn) override
  {
    return m_sim.m_engine.ScheduleIn (delay, EventKind::TimerExpiry, m_id, std::move (fn));
  }

  bool
  CancelTimer (const EventHandle &handle) override
  {
    return m_sim.m_engine.Cancel (handle);
  }

  void
  SendBroadcast (MessagePtr msg, uint32_t size) override
  {
    Account (*msg, size);
    m_sim.m_radio->Broadcast (m_id, std::move (msg), size);
  }

  void
  SendUnicast (NodeId nextHop, MessagePtr msg, uint32_t size) override
  {
    Account (*msg, size);
    m_sim.m_radio->Unicast (m_id, nextHop, std::move (msg), size);
  }

  void
  DeliverToApplication (const DataPacket &packet) override
  {
    m_sim.m_trace.RecordReceived (packet.app, Now (), packet.hops);
  }

  void
  DropData (const DataPacket &, DropReason reason) override
  {
    ++m_sim.m_drops.data[reason];
  }

  void
  DropControl (const char *what) override
  {
    ++m_sim.m_drops.control[what];
  }

  RngStream &
  Rng () override
  {
    return m_rng;
  }

private:
  void
  Account (const Message &msg, uint32_t size)
  {
    if (!IsData (msg) && Now () >= m_sim.m_config.warmup)
      {
        m_sim.m_trace.CountControl (MessageKind (msg), size);
      }
  }

  Simulation &m_sim;
  NodeId m_id;
  RngStream m_rng;
  std::unique_ptr<RoutingProtocol> m_routing;
};

Simulation::Simulation (const ScenarioConfig &config, SimulationHooks hooks)
  : m_config (config)
{
  ValidateConfig (config);

  if (hooks.mobility)
    {
      m_mobility = std::move (hooks.mobility);
    }
  else
    {
      RandomWaypointParams params;
      params.area = config.area;
      params.minSpeed = config.minSpeed;
      params.maxSpeed = config.maxSpeed;
      params.pause = config.pause;
      if (hooks.positions)
        {
          m_mobility = std::make_shared<RandomWaypoint> (params, config.seed, *hooks.positions);
        }
      else
        {
          m_mobility = std::make_shared<RandomWaypoint> (params, config.seed, config.nodeCount);
        }
    }
  if (m_mobility->NodeCount () != config.nodeCount)
    {
      throw ConfigInvalid ({{"nodes", "mobility model has " + std::to_string (m_mobility->NodeCount ())
                                          + " nodes"}});
    }

  LinkModel link{config.range, config.bandwidth, config.perHopLatency};
  m_radio = std::make_unique<Radio> (m_engine, *m_mobility, link, config.mac, config.seed);

  for (NodeId id = 0; id < config.nodeCount; ++id)
    {
      m_nodes.push_back (std::make_unique<Node> (*this, id));
      Node *node = m_nodes.back ().get ();
      m_radio->SetReceiveCallback (id, [node] (const Frame &f) { node->Routing ().Receive (f); });
      m_radio->SetLinkFailureCallback (
          id, [node] (NodeId next, const Frame &f) { node->Routing ().OnLinkFailure (next, f); });
    }

  if (hooks.flows)
    {
      m_flows = std::move (*hooks.flows);
      // Supplied flows obey the same cutoff as drawn ones.
      for (Flow &f : m_flows)
        {
          f.stopAt = std::min (f.stopAt, config.simTime);
        }
    }
  else
    {
      RngStream rng (config.seed, "traffic");
      FlowTemplate tmpl;
      tmpl.rate = config.rate;
      tmpl.packetSize = config.packetSize;
      tmpl.stopAt = config.simTime;
      m_flows = SetupFlows (config.nFlows, config.nodeCount, rng, tmpl);
    }

  for (const Flow &flow : m_flows)
    {
      m_apps.push_back (std::make_unique<CbrApplication> (
          m_engine, flow, [this] (const Flow &f, const AppPacket &p) {
            m_trace.RecordGenerated (p);
            DataPacket packet{p, f.src, f.dst, 0};
            m_nodes.at (f.src)->Routing ().SendData (packet);
          }));
    }

  for (auto &node : m_nodes)
    {
      node->Routing ().Start ();
    }
  for (auto &app : m_apps)
    {
      app->Start ();
    }
}

Simulation::~Simulation () = default;

RoutingProtocol &
Simulation::Routing (NodeId node)
{
  return m_nodes.at (node)->Routing ();
}

void
Simulation::RunUntil (SimTime t)
{
  m_engine.RunUntil (t);
}

void
Simulation::Run ()
{
  if (m_finished)
    {
      return;
    }
  m_engine.RunUntil (m_config.simTime + m_config.drain);
  m_finished = true;
}

PacketTrace
Simulation::MeasuredTrace () const
{
  return m_trace.Since (m_config.warmup);
}

MetricsRecord
Simulation::Metrics () const
{
  return ComputeMetrics (MeasuredTrace ());
}

MetricsRecord
RunScenario (const ScenarioConfig &config, std::ostream *traceOut)
{
  Simulation sim (config);
  sim.Run ();
  PacketTrace trace = sim.MeasuredTrace ();
  if (traceOut)
    {
      trace.WriteCsv (*traceOut);
    }
  return ComputeMetrics (trace);
}

} // namespace manet
