#ifndef MANET_TRAFFIC_H
#define MANET_TRAFFIC_H

#include "manet/engine.h"
#include "manet/packet.h"
#include "manet/rng.h"

#include <functional>
#include <stdexcept>
#include <vector>

namespace manet {

/// A constant-bit-rate source feeding one sink.
struct Flow
{
  uint32_t id = 0;
  NodeId src = kNoNode;
  NodeId dst = kNoNode;
  double rate = 4;            // packets/second
  uint32_t packetSize = 512;  // bytes
  SimTime startAt;
  SimTime stopAt = SimTime::Max ();

  /// Gap between packets, rounded to the nearest microsecond.
  SimTime Interval () const;

  /// Generation time of packet k; k * Interval() past the start, no drift.
  SimTime
  GenerationTime (uint32_t k) const
  {
    return startAt + Interval () * k;
  }

  /// Packets with generation time in [startAt, stopAt).
  uint64_t OfferedPackets () const;
};

class TooManyFlows : public std::invalid_argument
{
public:
  TooManyFlows (size_t flows, size_t nodes);
};

struct FlowTemplate
{
  double rate = 4;
  uint32_t packetSize = 512;
  /// Each flow starts at U[0, startWindow].
  SimTime startWindow = Seconds (5);
  SimTime stopAt = SimTime::Max ();
};

/**
 * Draws nFlows source/sink pairs with no node used twice.
 *
 * Endpoints come from a partial Fisher-Yates shuffle of the node ids, so the
 * pairing depends only on the stream state. Throws TooManyFlows when
 * 2 * nFlows exceeds nodeCount, and std::invalid_argument for nFlows == 0.
 */
std::vector<Flow> SetupFlows (size_t nFlows, size_t nodeCount, RngStream &rng,
                              const FlowTemplate &tmpl = {});

/// Engine-driven packet generator for one flow.
class CbrApplication
{
public:
  using Sink = std::function<void (const Flow &, const AppPacket &)>;

  CbrApplication (Engine &engine, const Flow &flow, Sink sink);

  /// Schedules the first tick at flow.startAt (nothing if startAt >= stopAt).
  void Start ();

  /// Emits the next packet at the current engine time and schedules the one after.
  AppPacket Tick ();

  uint32_t
  Generated () const
  {
    return m_next;
  }

  const Flow &
  GetFlow () const
  {
    return m_flow;
  }

private:
  void ScheduleNext ();

  Engine &m_engine;
  Flow m_flow;
  Sink m_sink;
  uint32_t m_next = 0;
};

} // namespace manet

#endif
