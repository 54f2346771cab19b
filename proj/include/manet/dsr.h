#ifndef MANET_DSR_H
#define MANET_DSR_H

#include "manet/routing.h"
#include "manet/source_route.h"

#include <deque>
#include <map>
#include <set>

namespace manet {

inline uint32_t
DsrRreqSize (size_t recordLength)
{
  return DsrHeaderSize (recordLength);
}

inline uint32_t
DsrRrepSize (size_t pathLength)
{
  return DsrHeaderSize (pathLength);
}

inline constexpr uint32_t kDsrRouteErrorBytes = 16;

struct DsrParams
{
  size_t cacheCapacity = 64;
  uint32_t rreqRetries = 2;
  SimTime discoveryTimeout = Seconds (1);
  size_t bufferPerDest = 64;

  bool operator== (const DsrParams &) const = default;
};

enum class SendOutcome
{
  Sent,
  Buffered,
  DeliveredLocally,
};

struct DsrStats
{
  uint64_t rreqOriginated = 0;
  uint64_t rreqForwarded = 0;
  uint64_t rrepFromDestination = 0;
  uint64_t rrepFromCache = 0;
  uint64_t routeErrorsSent = 0;
  uint64_t discoveriesStarted = 0;
  uint64_t discoveriesFailed = 0;
};

/**
 * Dynamic source routing with a path cache.
 *
 * Data packets carry their whole route. A source with no cached path floods a
 * request that accumulates a route record; the target, or a node whose cache
 * can finish the path without repeating a node, replies along the reversed
 * record. A broken link produces a route error sent back along the traversed
 * prefix, and every node it passes drops cached paths using that link.
 *
 * Intermediate nodes handle only the first copy of a request. The target also
 * answers later copies whose record is no longer than the first one's, so a
 * source can learn several equal-length paths from one discovery but never a
 * detour.
 */
class Dsr : public RoutingProtocol
{
public:
  Dsr (NodeServices &node, const DsrParams &params = {});

  Protocol
  Kind () const override
  {
    return Protocol::Dsr;
  }

  void
  SendData (const DataPacket &packet) override
  {
    Send (packet);
  }

  void Receive (const Frame &frame) override;
  void OnLinkFailure (NodeId nextHop, const Frame &frame) override;

  SendOutcome Send (const DataPacket &packet);
  DsrRreq OriginateRreq (NodeId target);
  ForwardDecision HandleRreq (const DsrRreq &rreq, NodeId prevHop);
  ForwardDecision HandleRrep (const DsrRrep &rrep);
  void ForwardSourceRouted (const DsrData &data);
  void HandleRouteError (const DsrRouteError &err);

  RouteCache &
  Cache ()
  {
    return m_cache;
  }

  const RouteCache &
  Cache () const
  {
    return m_cache;
  }

  size_t BufferedFor (NodeId dest) const;

  bool
  IsDiscovering (NodeId dest) const
  {
    return m_discoveries.count (dest) > 0;
  }

  const DsrStats &
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
  void FlushBuffers ();
  void Emit (DataPacket packet, const SourceRoute &route);
  void SendRrep (SourceRoute path, std::vector<NodeId> returnRoute);
  void CacheFrom (const SourceRoute &path);

  DsrParams m_params;
  RouteCache m_cache;
  uint32_t m_requestId = 0;
  std::set<std::pair<NodeId, uint32_t>> m_seen;
  /// Record length of the first copy of each request this node was the target of.
  std::map<std::pair<NodeId, uint32_t>, size_t> m_answered;
  std::map<NodeId, std::deque<DataPacket>> m_buffers;
  std::map<NodeId, Discovery> m_discoveries;
  DsrStats m_stats;
};

} // namespace manet

#endif
