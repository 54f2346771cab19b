#ifndef MANET_AODV_H
#define MANET_AODV_H

#include "manet/routing.h"

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace manet {

inline constexpr uint32_t kAodvRreqBytes = 24;
inline constexpr uint32_t kAodvRrepBytes = 20;

inline uint32_t
AodvRerrSize (size_t destinations)
{
  return 12 + 8 * static_cast<uint32_t> (destinations);
}

inline constexpr uint32_t kAodvInfinity = 0xFFFF;

struct AodvParams
{
  SimTime activeRouteTimeout = Seconds (10);
  uint32_t rreqRetries = 2;
  SimTime discoveryTimeout = Seconds (1);
  size_t bufferPerDest = 64;

  bool operator== (const AodvParams &) const = default;
};

struct AodvEntry
{
  NodeId dest = kNoNode;
  NodeId nextHop = kNoNode;
  uint32_t hopCount = kAodvInfinity;
  uint32_t destSeq = 0;
  SimTime expiresAt;
  bool valid = false;

  /// Valid and not past its lifetime.
  bool
  IsUsable (SimTime now) const
  {
    return valid && expiresAt >= now;
  }
};

struct AodvStats
{
  uint64_t rreqOriginated = 0;
  uint64_t rreqForwarded = 0;
  uint64_t rrepFromDestination = 0;
  uint64_t rrepFromCache = 0;
  uint64_t rerrSent = 0;
  uint64_t discoveriesFailed = 0;
  uint64_t discoveriesStarted = 0;
};

/**
 * On-demand distance vector routing.
 *
 * Routes are found by flooding RREQs. The destination, or any node holding a
 * live route whose sequence number is at least the one the RREQ asks for,
 * answers with an RREP that retraces the reverse path. Link failures reported
 * by the MAC invalidate routes and are announced one hop with an RERR; nodes
 * that routed through the announcer invalidate in turn.
 */
class Aodv : public RoutingProtocol
{
public:
  Aodv (NodeServices &node, const AodvParams &params = {});

  Protocol
  Kind () const override
  {
    return Protocol::Aodv;
  }

  void SendData (const DataPacket &packet) override;
  void Receive (const Frame &frame) override;
  void OnLinkFailure (NodeId nextHop, const Frame &frame) override;

  AodvRreq OriginateRreq (NodeId dest);
  ForwardDecision HandleRreq (const AodvRreq &rreq, NodeId prevHop);
  ForwardDecision HandleRrep (const AodvRrep &rrep, NodeId prevHop);
  void HandleRerr (const AodvRerr &rerr, NodeId from);

  /// Invalidates routes through the dead neighbor and announces them. Returns the
  /// invalidated destinations.
  std::vector<NodeId> HandleLinkBreak (NodeId deadNeighbor);

  /// Next hop of a usable route; using it pushes its expiry to now + activeRouteTimeout.
  std::optional<NodeId> RouteLookup (NodeId dest);

  std::optional<AodvEntry> Find (NodeId dest) const;
  void Install (const AodvEntry &entry);

  uint32_t
  OwnSeq () const
  {
    return m_ownSeq;
  }

  void
  SetOwnSeq (uint32_t seq)
  {
    m_ownSeq = seq;
  }

  uint32_t
  LastRreqId () const
  {
    return m_rreqId;
  }

  size_t BufferedFor (NodeId dest) const;

  bool
  IsDiscovering (NodeId dest) const
  {
    return m_discoveries.count (dest) > 0;
  }

  const AodvStats &
  Stats () const
  {
    return m_stats;
  }

private:
  struct Discovery
  {
    uint32_t attempts = 0;
    EventHandle timer;
  };

  void Buffer (const DataPacket &packet);
  void StartDiscovery (NodeId dest);
  void OnDiscoveryTimeout (NodeId dest);
  void FlushBuffer (NodeId dest);
  void SendVia (NodeId nextHop, DataPacket packet);
  void Forward (DataPacket packet);
  void BroadcastRerr (std::vector<std::pair<NodeId, uint32_t>> unreachable);
  void Invalidate (AodvEntry &entry, uint32_t seq);

  AodvParams m_params;
  uint32_t m_ownSeq = 0;
  uint32_t m_rreqId = 0;
  std::map<NodeId, AodvEntry> m_table;
  std::set<std::pair<NodeId, uint32_t>> m_seen;
  std::map<NodeId, std::deque<DataPacket>> m_buffers;
  std::map<NodeId, Discovery> m_discoveries;
  AodvStats m_stats;
};

} // namespace manet

#endif
