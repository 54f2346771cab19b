#include "manet/aodv.h"

#include <algorithm>

namespace manet {

Aodv::Aodv (NodeServices &node, const AodvParams &params)
  : RoutingProtocol (node),
    m_params (params)
{
}

std::optional<AodvEntry>
Aodv::Find (NodeId dest) const
{
  auto it = m_table.find (dest);
  if (it == m_table.end ())
    {
      return std::nullopt;
    }
  return it->second;
}

void
Aodv::Install (const AodvEntry &entry)
{
  m_table[entry.dest] = entry;
}

size_t
Aodv::BufferedFor (NodeId dest) const
{
  auto it = m_buffers.find (dest);
  return it == m_buffers.end () ? 0 : it->second.size ();
}

std::optional<NodeId>
Aodv::RouteLookup (NodeId dest)
{
  if (dest == m_node.Self ())
    {
      return dest;
    }
  auto it = m_table.find (dest);
  SimTime now = m_node.Now ();
  if (it == m_table.end () || !it->second.IsUsable (now))
    {
      return std::nullopt;
    }
  it->second.expiresAt = now + m_params.activeRouteTimeout;
  return it->second.nextHop;
}

void
Aodv::SendData (const DataPacket &packet)
{
  if (packet.destination == m_node.Self ())
    {
      m_node.DeliverToApplication (packet);
      return;
    }
  if (auto next = RouteLookup (packet.destination))
    {
      SendVia (*next, packet);
      return;
    }
  Buffer (packet);
  if (!IsDiscovering (packet.destination))
    {
      StartDiscovery (packet.destination);
    }
}

void
Aodv::Buffer (const DataPacket &packet)
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
Aodv::SendVia (NodeId nextHop, DataPacket packet)
{
  uint32_t size = packet.app.size;
  m_node.SendUnicast (nextHop, MakeMessage (DataMsg{std::move (packet)}), size);
}

void
Aodv::StartDiscovery (NodeId dest)
{
  ++m_stats.discoveriesStarted;
  m_discoveries[dest] = Discovery{};
  OriginateRreq (dest);
}

AodvRreq
Aodv::OriginateRreq (NodeId dest)
{
  ++m_rreqId;
  ++m_ownSeq;
  AodvRreq rreq;
  rreq.origin = m_node.Self ();
  rreq.rreqId = m_rreqId;
  rreq.dest = dest;
  if (auto it = m_table.find (dest); it != m_table.end ())
    {
      rreq.destSeqKnown = it->second.destSeq;
    }
  rreq.originSeq = m_ownSeq;
  rreq.hopCount = 0;
  m_seen.insert ({rreq.origin, rreq.rreqId});
  ++m_stats.rreqOriginated;
  m_node.SendBroadcast (MakeMessage (rreq), kAodvRreqBytes);

  Discovery &d = m_discoveries[dest];
  ++d.attempts;
  m_node.CancelTimer (d.timer);
  d.timer = m_node.ScheduleTimer (m_params.discoveryTimeout,
                                  [this, dest] () { OnDiscoveryTimeout (dest); });
  return rreq;
}

void
Aodv::OnDiscoveryTimeout (NodeId dest)
{
  auto it = m_discoveries.find (dest);
  if (it == m_discoveries.end ())
    {
      return;
    }
  if (RouteLookup (dest))
    {
      m_discoveries.erase (it);
      FlushBuffer (dest);
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
Aodv::FlushBuffer (NodeId dest)
{
  auto buf = m_buffers.find (dest);
  if (buf == m_buffers.end ())
    {
      return;
    }
  std::deque<DataPacket> queue = std::move (buf->second);
  m_buffers.erase (buf);
  for (auto &p : queue)
    {
      auto next = RouteLookup (dest);
      if (!next)
        {
          Buffer (p);
          continue;
        }
      SendVia (*next, std::move (p));
    }
}

ForwardDecision
Aodv::HandleRreq (const AodvRreq &rreq, NodeId prevHop)
{
  NodeId self = m_node.Self ();
  if (rreq.origin == self || !m_seen.insert ({rreq.origin, rreq.rreqId}).second)
    {
      return ForwardDecision::Discarded;
    }
  SimTime now = m_node.Now ();

  // Reverse route toward the originator.
  uint32_t reverseHops = rreq.hopCount + 1;
  AodvEntry &rev = m_table[rreq.origin];
  bool fresher = !rev.IsUsable (now) || rreq.originSeq > rev.destSeq
                 || (rreq.originSeq == rev.destSeq && reverseHops < rev.hopCount);
  if (rev.dest == kNoNode || fresher)
    {
      rev = AodvEntry{rreq.origin, prevHop, reverseHops, rreq.originSeq,
                      std::max (rev.expiresAt, now + m_params.activeRouteTimeout), true};
    }

  if (rreq.dest == self)
    {
      uint32_t seq = std::max (m_ownSeq, rreq.destSeqKnown.value_or (0));
      m_ownSeq = seq;
      ++m_stats.rrepFromDestination;
      m_node.SendUnicast (prevHop, MakeMessage (AodvRrep{self, seq, 0, rreq.origin}),
                          kAodvRrepBytes);
      return ForwardDecision::Replied;
    }

  auto it = m_table.find (rreq.dest);
  if (it != m_table.end () && it->second.IsUsable (now)
      && (!rreq.destSeqKnown || it->second.destSeq >= *rreq.destSeqKnown))
    {
      const AodvEntry &fwd = it->second;
      ++m_stats.rrepFromCache;
      m_node.SendUnicast (prevHop,
                          MakeMessage (AodvRrep{rreq.dest, fwd.destSeq, fwd.hopCount, rreq.origin}),
                          kAodvRrepBytes);
      return ForwardDecision::Replied;
    }

  AodvRreq next = rreq;
  next.hopCount = rreq.hopCount + 1;
  ++m_stats.rreqForwarded;
  m_node.SendBroadcast (MakeMessage (next), kAodvRreqBytes);
  return ForwardDecision::Rebroadcast;
}

ForwardDecision
Aodv::HandleRrep (const AodvRrep &rrep, NodeId prevHop)
{
  SimTime now = m_node.Now ();
  NodeId self = m_node.Self ();
  uint32_t hops = rrep.hopCount + 1;

  auto it = m_table.find (rrep.dest);
  bool accept;
  if (it == m_table.end ())
    {
      accept = true;
    }
  else if (!it->second.IsUsable (now))
    {
      accept = rrep.destSeq >= it->second.destSeq;
    }
  else
    {
      accept = rrep.destSeq > it->second.destSeq
               || (rrep.destSeq == it->second.destSeq && hops < it->second.hopCount);
    }
  if (!accept)
    {
      m_node.DropControl ("AODV_RREP redundant");
      return ForwardDecision::Dropped;
    }
  m_table[rrep.dest]
      = AodvEntry{rrep.dest, prevHop, hops, rrep.destSeq, now + m_params.activeRouteTimeout, true};

  if (rrep.origin == self)
    {
      auto d = m_discoveries.find (rrep.dest);
      if (d != m_discoveries.end ())
        {
          m_node.CancelTimer (d->second.timer);
          m_discoveries.erase (d);
        }
      FlushBuffer (rrep.dest);
      return ForwardDecision::Completed;
    }

  auto back = RouteLookup (rrep.origin);
  if (!back)
    {
      m_node.DropControl ("AODV_RREP reverse path missing");
      return ForwardDecision::Dropped;
    }
  AodvRrep next = rrep;
  next.hopCount = hops;
  m_node.SendUnicast (*back, MakeMessage (next), kAodvRrepBytes);
  return ForwardDecision::Forwarded;
}

void
Aodv::Invalidate (AodvEntry &entry, uint32_t seq)
{
  entry.valid = false;
  entry.destSeq = seq;
  entry.hopCount = kAodvInfinity;
}

void
Aodv::BroadcastRerr (std::vector<std::pair<NodeId, uint32_t>> unreachable)
{
  if (unreachable.empty ())
    {
      return;
    }
  ++m_stats.rerrSent;
  uint32_t size = AodvRerrSize (unreachable.size ());
  m_node.SendBroadcast (MakeMessage (AodvRerr{std::move (unreachable)}), size);
}

std::vector<NodeId>
Aodv::HandleLinkBreak (NodeId deadNeighbor)
{
  std::vector<NodeId> dests;
  std::vector<std::pair<NodeId, uint32_t>> unreachable;
  for (auto &[dest, e] : m_table)
    {
      if (e.valid && e.nextHop == deadNeighbor)
        {
          Invalidate (e, e.destSeq + 1);
          dests.push_back (dest);
          unreachable.emplace_back (dest, e.destSeq);
        }
    }
  BroadcastRerr (std::move (unreachable));
  return dests;
}

void
Aodv::HandleRerr (const AodvRerr &rerr, NodeId from)
{
  std::vector<std::pair<NodeId, uint32_t>> unreachable;
  for (const auto &[dest, seq] : rerr.unreachable)
    {
      auto it = m_table.find (dest);
      if (it == m_table.end () || !it->second.valid || it->second.nextHop != from)
        {
          continue;
        }
      Invalidate (it->second, std::max (it->second.destSeq, seq));
      unreachable.emplace_back (dest, it->second.destSeq);
    }
  BroadcastRerr (std::move (unreachable));
}

void
Aodv::Forward (DataPacket packet)
{
  if (packet.destination == m_node.Self ())
    {
      m_node.DeliverToApplication (packet);
      return;
    }
  if (auto next = RouteLookup (packet.destination))
    {
      SendVia (*next, std::move (packet));
      return;
    }
  // No route at an intermediate node: drop and tell upstream.
  std::vector<std::pair<NodeId, uint32_t>> unreachable;
  auto it = m_table.find (packet.destination);
  uint32_t seq = it == m_table.end () ? 0 : it->second.destSeq;
  if (it != m_table.end () && it->second.valid)
    {
      Invalidate (it->second, seq + 1);
      seq = it->second.destSeq;
    }
  unreachable.emplace_back (packet.destination, seq);
  m_node.DropData (packet, DropReason::NoRoute);
  BroadcastRerr (std::move (unreachable));
}

void
Aodv::Receive (const Frame &frame)
{
  const Message &msg = *frame.payload;
  if (const auto *rreq = std::get_if<AodvRreq> (&msg))
    {
      HandleRreq (*rreq, frame.src);
    }
  else if (const auto *rrep = std::get_if<AodvRrep> (&msg))
    {
      HandleRrep (*rrep, frame.src);
    }
  else if (const auto *rerr = std::get_if<AodvRerr> (&msg))
    {
      HandleRerr (*rerr, frame.src);
    }
  else if (const auto *data = std::get_if<DataMsg> (&msg))
    {
      DataPacket packet = data->packet;
      ++packet.hops;
      Forward (std::move (packet));
    }
}

void
Aodv::OnLinkFailure (NodeId nextHop, const Frame &frame)
{
  HandleLinkBreak (nextHop);
  if (const DataPacket *packet = DataOf (*frame.payload))
    {
      m_node.DropData (*packet, DropReason::LinkBroken);
    }
  else
    {
      m_node.DropControl ("AODV control link broken");
    }
}

} // namespace manet
