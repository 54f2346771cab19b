#include "manet/traffic.h"

#include <cmath>
#include <numeric>
#include <string>

namespace manet {

SimTime
Flow::Interval () const
{
  return SimTime::FromMicros (std::llround (1e6 / rate));
}

uint64_t
Flow::OfferedPackets () const
{
  if (stopAt <= startAt)
    {
      return 0;
    }
  int64_t span = (stopAt - startAt).Micros ();
  int64_t step = Interval ().Micros ();
  return static_cast<uint64_t> ((span + step - 1) / step);
}

TooManyFlows::TooManyFlows (size_t flows, size_t nodes)
  : std::invalid_argument (std::to_string (flows) + " flows need " + std::to_string (2 * flows)
                           + " distinct endpoints but only " + std::to_string (nodes)
                           + " nodes exist")
{
}

std::vector<Flow>
SetupFlows (size_t nFlows, size_t nodeCount, RngStream &rng, const FlowTemplate &tmpl)
{
  if (nFlows == 0)
    {
      throw std::invalid_argument ("flow count must be positive");
    }
  if (2 * nFlows > nodeCount)
    {
      throw TooManyFlows (nFlows, nodeCount);
    }
  if (!(tmpl.rate > 0))
    {
      throw std::invalid_argument ("flow rate must be positive");
    }

  std::vector<NodeId> ids (nodeCount);
  std::iota (ids.begin (), ids.end (), NodeId{0});
  for (size_t i = 0; i < 2 * nFlows; ++i)
    {
      size_t j = i + rng.UniformInt (nodeCount - i);
      std::swap (ids[i], ids[j]);
    }

  std::vector<Flow> flows;
  flows.reserve (nFlows);
  for (size_t f = 0; f < nFlows; ++f)
    {
      Flow flow;
      flow.id = static_cast<uint32_t> (f);
      flow.src = ids[2 * f];
      flow.dst = ids[2 * f + 1];
      flow.rate = tmpl.rate;
      flow.packetSize = tmpl.packetSize;
      flow.startAt = SimTime::FromMicros (rng.UniformInt (int64_t{0}, tmpl.startWindow.Micros ()));
      flow.stopAt = tmpl.stopAt;
      flows.push_back (flow);
    }
  return flows;
}

CbrApplication::CbrApplication (Engine &engine, const Flow &flow, Sink sink)
  : m_engine (engine),
    m_flow (flow),
    m_sink (std::move (sink))
{
}

void
CbrApplication::Start ()
{
  ScheduleNext ();
}

void
CbrApplication::ScheduleNext ()
{
  SimTime at = m_flow.GenerationTime (m_next);
  if (at >= m_flow.stopAt)
    {
      return;
    }
  m_engine.Schedule (at, EventKind::TrafficTick, m_flow.src, [this] () { Tick (); });
}

AppPacket
CbrApplication::Tick ()
{
  AppPacket packet{m_flow.id, m_next, m_engine.Now (), m_flow.packetSize};
  ++m_next;
  ScheduleNext ();
  if (m_sink)
    {
      m_sink (m_flow, packet);
    }
  return packet;
}

} // namespace manet
