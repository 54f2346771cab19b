#include "manet/dsr.h"

#include <algorithm>

namespace manet {

Dsr::Dsr (NodeServices &node, const DsrParams &params)
  : RoutingProtocol (node),
    m_params (params),
    m_cache (params.cacheCapacity)
{
}

size_t
Dsr::BufferedFor (NodeId dest) const
{
  auto it = m_buffers.find (dest);
  return it == m_buffers.end () ? 0 : it->second.size ();
}

SendOutcome
Dsr::Send (const DataPacket &packet)
{
  if (packet.destination == m_node.Self ())
    {
      m_node.DeliverToApplication (packet);
      return SendOutcome::DeliveredLocally;
    }
  if (auto route = m_cache.Find (packet.destination))
    {
      Emit (packet, *route);
      return SendOutcome::Sent;
    }
  Buffer (packet);
  if (!IsDiscovering (packet.destination))
    {
      StartDiscovery (packet.destination);
    }
  return SendOutcome::Buffered;
}

void
Dsr::Emit (DataPacket packet, const SourceRoute &route)
{
  uint32_t size = packet.app.size + DsrHeaderSize (route.Size ());
  NodeId next = route[1];
  m_node.SendUnicast (next, MakeMessage (DsrData{std::move (packet), route, 0}), size);
}

void
Dsr::Buffer (const DataPacket &packet)
{
  auto &queue = m_buffers[packet.destination];
  if (queue.size () >= m_params.bufferPerDest)
    {
      m_node.DropData (queue.front (), DropReason::BufferOverflow);
      queue.pop_front ();
    }
  queue.push_back (packet);
}

void
Dsr::StartDiscovery (NodeId dest)
{
  ++m_stats.discoveriesStarted;
  m_discoveries[dest] = Discovery{};
  OriginateRreq (dest);
}

DsrRreq
Dsr::OriginateRreq (NodeId target)
{
  DsrRreq rreq{m_node.Self (), ++m_requestId, target, {m_node.Self ()}};
  m_seen.insert ({rreq.origin, rreq.requestId});
  ++m_stats.rreqOriginated;
  m_node.SendBroadcast (MakeMessage (rreq), DsrRreqSize (rreq.record.size ()));

  Discovery &d = m_discoveries[target];
  ++d.attempts;
  m_node.CancelTimer (d.timer);
  d.timer = m_node.ScheduleTimer (m_params.discoveryTimeout,
                                  [this, target] () { OnDiscoveryTimeout (target); });
  return rreq;
}

void
Dsr::OnDiscoveryTimeout (NodeId dest)
{
  auto it = m_discoveries.find (dest);
  if (it == m_discoveries.end ())
    {
      return;
    }
  if (m_cache.Find (dest))
    {
      m_discoveries.erase (it);
      FlushBuffers ();
      return;
    }
  if (it->second.attempts < 1 + m_params.rreqRetries)
    {
      OriginateRreq (dest);
      return;
    }
  m_discoveries.erase (it);
  ++m_stats.discoveriesFailed;
  auto buf = m_buffers.find (dest);
  if (buf != m_buffers.end ())
    {
      for (const auto &p : buf->second)
        {
          m_node.DropData (p, DropReason::NoRouteEver);
        }
      m_buffers.erase (buf);
    }
}

void
Dsr::FlushBuffers ()
{
  for (auto it = m_buffers.begin (); it != m_buffers.end ();)
    {
      auto route = m_cache.Find (it->first);
      if (!route)
        {
          ++it;
          continue;
        }
      if (auto d = m_discoveries.find (it->first); d != m_discoveries.end ())
        {
          m_node.CancelTimer (d->second.timer);
          m_discoveries.erase (d);
        }
      std::deque<DataPacket> queue = std::move (it->second);
      it = m_buffers.erase (it);
      for (auto &p : queue)
        {
          Emit (std::move (p), *route);
        }
    }
}

void
Dsr::SendRrep (SourceRoute path, std::vector<NodeId> returnRoute)
{
  uint32_t size = DsrRrepSize (path.Size ());
  NodeId next = returnRoute[1];
  m_node.SendUnicast (next, MakeMessage (DsrRrep{std::move (path), std::move (returnRoute), 1}),
                      size);
}

ForwardDecision
Dsr::HandleRreq (const DsrRreq &rreq, NodeId prevHop)
{
  (void) prevHop;
  NodeId self = m_node.Self ();
  if (rreq.origin == self
      || std::find (rreq.record.begin (), rreq.record.end (), self) != rreq.record.end ())
    {
      return ForwardDecision::Discarded;
    }

  std::pair<NodeId, uint32_t> key{rreq.origin, rreq.requestId};
  if (rreq.target == self)
    {
      // Later copies are answered only while they are as short as the first,
      // so the source learns equal-length alternatives but never a detour.
      auto [first, fresh] = m_answered.emplace (key, rreq.record.size ());
      if (!fresh && rreq.record.size () > first->second)
        {
          return ForwardDecision::Discarded;
        }
      auto path = SourceRoute::Concat (rreq.record, std::span<const NodeId> (&self, 1));
      if (!path)
        {
          return ForwardDecision::Discarded;
        }
      std::vector<NodeId> back (path->Hops ().rbegin (), path->Hops ().rend ());
      ++m_stats.rrepFromDestination;
      SendRrep (std::move (*path), std::move (back));
      return ForwardDecision::Replied;
    }

  if (!m_seen.insert (key).second)
    {
      return ForwardDecision::Discarded;
    }

  // Cached paths all start at this node; the shortest one that keeps the
  // concatenation loop-free answers the request.
  auto cached = m_cache.FindAll (rreq.target);
  std::stable_sort (cached.begin (), cached.end (),
                    [] (const SourceRoute &a, const SourceRoute &b) { return a.Size () < b.Size (); });
  for (const auto &suffix : cached)
    {
      if (suffix.Front () != self)
        {
          continue;
        }
      auto path = SourceRoute::Concat (rreq.record, suffix.Hops ());
      if (!path)
        {
          continue;
        }
      std::vector<NodeId> back{self};
      back.insert (back.end (), rreq.record.rbegin (), rreq.record.rend ());
      ++m_stats.rrepFromCache;
      SendRrep (std::move (*path), std::move (back));
      return ForwardDecision::Replied;
    }

  DsrRreq next = rreq;
  next.record.push_back (self);
  ++m_stats.rreqForwarded;
  m_node.SendBroadcast (MakeMessage (next), DsrRreqSize (next.record.size ()));
  return ForwardDecision::Rebroadcast;
}

void
Dsr::CacheFrom (const SourceRoute &path)
{
  auto pos = path.IndexOf (m_node.Self ());
  if (!pos)
    {
      return;
    }
  for (size_t k = *pos + 1; k < path.Size (); ++k)
    {
      m_cache.Insert (path.Slice (*pos, k));
    }
}

ForwardDecision
Dsr::HandleRrep (const DsrRrep &rrep)
{
  NodeId self = m_node.Self ();
  if (rrep.index >= rrep.returnRoute.size () || rrep.returnRoute[rrep.index] != self)
    {
      m_node.DropControl ("DSR_RREP misrouted");
      return ForwardDecision::Dropped;
    }
  CacheFrom (rrep.path);
  if (rrep.path.Front () == self)
    {
      FlushBuffers ();
      return ForwardDecision::Completed;
    }
  if (rrep.index + 1 >= rrep.returnRoute.size ())
    {
      m_node.DropControl ("DSR_RREP misrouted");
      return ForwardDecision::Dropped;
    }
  DsrRrep next = rrep;
  next.index = rrep.index + 1;
  NodeId hop = next.returnRoute[next.index];
  uint32_t size = DsrRrepSize (next.path.Size ());
  m_node.SendUnicast (hop, MakeMessage (std::move (next)), size);
  return ForwardDecision::Forwarded;
}

void
Dsr::ForwardSourceRouted (const DsrData &data)
{
  NodeId self = m_node.Self ();
  DsrData next = data;
  next.index = data.index + 1;
  ++next.packet.hops;
  if (next.index >= next.route.Size () || next.route[next.index] != self)
    {
      m_node.DropData (next.packet, DropReason::MalformedRoute);
      return;
    }
  if (next.index + 1 == next.route.Size ())
    {
      m_node.DeliverToApplication (next.packet);
      return;
    }
  NodeId hop = next.route[next.index + 1];
  uint32_t size = next.packet.app.size + DsrHeaderSize (next.route.Size ());
  m_node.SendUnicast (hop, MakeMessage (std::move (next)), size);
}

void
Dsr::HandleRouteError (const DsrRouteError &err)
{
  m_cache.PurgeLink (err.brokenFrom, err.brokenTo);
  NodeId self = m_node.Self ();
  if (self == err.originalSource)
    {
      std::vector<NodeId> pending;
      for (const auto &[dest, queue] : m_buffers)
        {
          if (!queue.empty ())
            {
              pending.push_back (dest);
            }
        }
      FlushBuffers ();
      for (NodeId dest : pending)
        {
          if (BufferedFor (dest) > 0 && !IsDiscovering (dest))
            {
              StartDiscovery (dest);
            }
        }
      return;
    }
  if (err.index + 1 >= err.returnRoute.size ())
    {
      return;
    }
  DsrRouteError next = err;
  next.index = err.index + 1;
  NodeId hop = next.returnRoute[next.index];
  m_node.SendUnicast (hop, MakeMessage (std::move (next)), kDsrRouteErrorBytes);
}

void
Dsr::Receive (const Frame &frame)
{
  const Message &msg = *frame.payload;
  if (const auto *rreq = std::get_if<DsrRreq> (&msg))
    {
      HandleRreq (*rreq, frame.src);
    }
  else if (const auto *rrep = std::get_if<DsrRrep> (&msg))
    {
      HandleRrep (*rrep);
    }
  else if (const auto *err = std::get_if<DsrRouteError> (&msg))
    {
      if (err->index < err->returnRoute.size () && err->returnRoute[err->index] == m_node.Self ())
        {
          HandleRouteError (*err);
        }
    }
  else if (const auto *data = std::get_if<DsrData> (&msg))
    {
      ForwardSourceRouted (*data);
    }
}

void
Dsr::OnLinkFailure (NodeId nextHop, const Frame &frame)
{
  NodeId self = m_node.Self ();
  m_cache.PurgeLink (self, nextHop);
  const Message &msg = *frame.payload;
  if (const auto *data = std::get_if<DsrData> (&msg))
    {
      m_node.DropData (data->packet, DropReason::LinkBroken);
      DsrRouteError err;
      err.reporter = self;
      err.brokenFrom = self;
      err.brokenTo = nextHop;
      err.originalSource = data->route.Front ();
      for (size_t i = data->index + 1; i-- > 0;)
        {
          err.returnRoute.push_back (data->route[i]);
        }
      err.index = 0;
      if (err.originalSource == self)
        {
          HandleRouteError (err);
          return;
        }
      ++m_stats.routeErrorsSent;
      err.index = 1;
      NodeId hop = err.returnRoute[1];
      m_node.SendUnicast (hop, MakeMessage (std::move (err)), kDsrRouteErrorBytes);
      return;
    }
  if (std::holds_alternative<DsrRrep> (msg))
    {
      m_node.DropControl ("DSR_RREP return path broken");
      return;
    }
  m_node.DropControl ("DSR control link broken");
}

} // namespace manet
