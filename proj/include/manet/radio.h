#ifndef MANET_RADIO_H
#define MANET_RADIO_H

#include "manet/engine.h"
#include "manet/mobility.h"
#include "manet/packet.h"
#include "manet/rng.h"

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace manet {

/// Fixed-radius link abstraction standing in for two-ray ground propagation.
struct LinkModel
{
  double range = 250;          // meters
  double bandwidth = 2e6;      // bits/second
  SimTime perHopLatency = Millis (1);
};

enum class MacMode
{
  Realistic,
  Ideal,
};

struct MacParams
{
  MacMode mode = MacMode::Realistic;
  uint32_t retryLimit = 3;
  /// Realistic mode: a broadcast waits U[0, broadcastJitter] before joining the queue.
  SimTime broadcastJitter = Millis (10);
  /// Realistic mode: each unicast attempt waits U[0, unicastBackoff].
  SimTime unicastBackoff = Millis (1);
  /// Realistic mode: frames waiting behind the one on air.
  size_t queueLimit = 50;

  bool operator== (const MacParams &) const = default;
};

/// Smallest legal frame.
inline constexpr uint32_t kFrameHeaderBytes = 12;

struct Frame
{
  NodeId src = kNoNode;
  NodeId dst = kBroadcast;
  uint32_t size = 0;
  MessagePtr payload;
  SimTime txStart;
};

enum class DeliveryOutcome
{
  Delivered,
  LinkBroken,
  QueueOverflow,
};

struct TxResult
{
  DeliveryOutcome outcome = DeliveryOutcome::Delivered;
  /// Nodes the frame was delivered to.
  std::vector<NodeId> recipients;
  /// In-range nodes that lost the frame to a collision (last attempt only).
  std::vector<NodeId> collided;
  uint32_t attempts = 0;
};

struct MacStats
{
  uint64_t transmissions = 0;
  uint64_t collisions = 0;
  uint64_t queueDrops = 0;
  uint64_t linkBreaks = 0;
  uint64_t deliveries = 0;
};

/**
 * Shared wireless medium plus a per-node transmitter.
 *
 * Realistic mode: every node owns a FIFO transmit queue and sends one frame at
 * a time. A broadcast waits out its random jitter before joining the queue; a
 * unicast draws a short defer at the head of the queue and before each retry.
 * There is no carrier sense. A receiver in
 * range of two transmitters whose airtimes overlap loses both frames. Unicast
 * frames are retried up to retryLimit times, then the link is reported broken.
 *
 * Ideal mode: frames go on air the moment they are sent, never collide and are
 * never queued; delivery to an in-range node is certain.
 */
class Radio
{
public:
  using ReceiveCallback = std::function<void (const Frame &)>;
  using LinkFailureCallback = std::function<void (NodeId nextHop, const Frame &)>;
  using TxCompletion = std::function<void (const Frame &, const TxResult &)>;

  Radio (Engine &engine, MobilityModel &mobility, const LinkModel &link, const MacParams &mac,
         uint64_t seed);

  void SetReceiveCallback (NodeId node, ReceiveCallback cb);
  void SetLinkFailureCallback (NodeId node, LinkFailureCallback cb);

  /// Nodes within range (inclusive) of node at time `at`, ascending.
  std::vector<NodeId> Neighbors (NodeId node, SimTime at);

  bool InRange (NodeId a, NodeId b, SimTime at);

  SimTime Airtime (uint32_t size) const;

  /// Airtime plus per-hop latency.
  SimTime
  TransmissionDelay (uint32_t size) const
  {
    return Airtime (size) + m_link.perHopLatency;
  }

  void Broadcast (NodeId src, MessagePtr payload, uint32_t size, TxCompletion done = {});

  void Unicast (NodeId src, NodeId nextHop, MessagePtr payload, uint32_t size,
                TxCompletion done = {});

  const MacStats &
  Stats () const
  {
    return m_stats;
  }

  const LinkModel &
  Link () const
  {
    return m_link;
  }

  const MacParams &
  Mac () const
  {
    return m_mac;
  }

  size_t NodeCount () const
  {
    return m_nodes.size ();
  }

private:
  struct Outgoing
  {
    Frame frame;
    TxCompletion done;
    uint32_t attempts = 0;
    bool jittered = false;
  };

  struct Transmission
  {
    NodeId src;
    SimTime start;
    SimTime end;
  };

  using OutgoingPtr = std::shared_ptr<Outgoing>;

  struct NodeMac
  {
    ReceiveCallback onReceive;
    LinkFailureCallback onLinkFailure;
    std::deque<OutgoingPtr> queue;
    bool busy = false;
  };

  void Enqueue (OutgoingPtr out);
  void StartNext (NodeId node);
  void ScheduleAttempt (OutgoingPtr out, SimTime defer);
  void BeginAttempt (OutgoingPtr out);
  void EndAttempt (OutgoingPtr out, Transmission tx);
  bool Collided (const Transmission &tx, NodeId receiver);
  void PruneLog ();
  void Finish (OutgoingPtr out, const TxResult &result);
  SimTime DrawDefer (const Frame &frame);

  Engine &m_engine;
  MobilityModel &m_mobility;
  LinkModel m_link;
  MacParams m_mac;
  RngStream m_rng;
  std::vector<NodeMac> m_nodes;
  std::vector<Transmission> m_log;
  SimTime m_longestAirtime;
  MacStats m_stats;
};

} // namespace manet

#endif
