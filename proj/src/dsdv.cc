#include "manet/dsdv.h"

namespace manet {

bool
DsdvTableChange::IsSignificant () const
{
  if (!before)
    {
      return after.IsValid ();
    }
  return before->IsValid () != after.IsValid () || before->hops != after.hops
         || before->nextHop != after.nextHop;
}

uint32_t
DsdvTable::AdvanceOwnSeq ()
{
  m_ownSeq += 2;
  return m_ownSeq;
}

std::optional<DsdvEntry>
DsdvTable::Find (NodeId dest) const
{
  if (dest == m_self)
    {
      return DsdvEntry{m_self, m_self, 0, m_ownSeq, SimTime ()};
    }
  auto it = m_entries.find (dest);
  if (it == m_entries.end ())
    {
      return std::nullopt;
    }
  return it->second;
}

void
DsdvTable::Install (const DsdvEntry &entry)
{
  if (entry.dest == m_self)
    {
      return;
    }
  m_entries[entry.dest] = entry;
}

std::vector<DsdvTableChange>
DsdvTable::ApplyUpdate (const DsdvUpdate &update, SimTime now)
{
  std::vector<DsdvTableChange> changes;
  for (const DsdvAdvert &adv : update.entries)
    {
      if (adv.dest == m_self)
        {
          if (adv.seq > m_ownSeq)
            {
              m_ownSeq = adv.seq + adv.seq % 2;
            }
          continue;
        }
      uint32_t hops = adv.hops >= kDsdvInfinity ? kDsdvInfinity : adv.hops + 1;
      if (adv.seq % 2 == 1)
        {
          hops = kDsdvInfinity;
        }
      DsdvEntry candidate{adv.dest, update.origin, hops, adv.seq, now};

      auto it = m_entries.find (adv.dest);
      if (it == m_entries.end ())
        {
          m_entries.emplace (adv.dest, candidate);
          changes.push_back ({std::nullopt, candidate});
          continue;
        }
      DsdvEntry &stored = it->second;
      bool accept = adv.seq > stored.seq || (adv.seq == stored.seq && hops < stored.hops);
      if (!accept)
        {
          continue;
        }
      DsdvEntry before = stored;
      stored = candidate;
      changes.push_back ({before, candidate});
    }
  return changes;
}

std::vector<NodeId>
DsdvTable::InvalidateVia (NodeId dead, SimTime now)
{
  std::vector<NodeId> out;
  for (auto &[dest, e] : m_entries)
    {
      if (e.nextHop == dead && e.IsValid ())
        {
          e.seq += 1;
          e.hops = kDsdvInfinity;
          e.installTime = now;
          out.push_back (dest);
        }
    }
  return out;
}

std::optional<NodeId>
DsdvTable::Lookup (NodeId dest) const
{
  if (dest == m_self)
    {
      return m_self;
    }
  auto it = m_entries.find (dest);
  if (it == m_entries.end () || !it->second.IsValid ())
    {
      return std::nullopt;
    }
  return it->second.nextHop;
}

DsdvUpdate
DsdvTable::Dump () const
{
  DsdvUpdate u;
  u.origin = m_self;
  u.entries.reserve (m_entries.size () + 1);
  u.entries.push_back ({m_self, m_ownSeq, 0});
  for (const auto &[dest, e] : m_entries)
    {
      u.entries.push_back ({dest, e.seq, e.hops});
    }
  return u;
}

Dsdv::Dsdv (NodeServices &node, const DsdvParams &params)
  : RoutingProtocol (node),
    m_params (params),
    m_table (node.Self ())
{
}

void
Dsdv::Start ()
{
  int64_t window = m_params.startWindow.Micros ();
  SchedulePeriodic (SimTime::FromMicros (window > 0 ? m_node.Rng ().UniformInt (int64_t{0}, window)
                                                    : 0));
}

void
Dsdv::SchedulePeriodic (SimTime delay)
{
  m_periodicTimer = m_node.ScheduleTimer (delay, [this] () { PeriodicAdvertise (); });
}

DsdvUpdate
Dsdv::PeriodicAdvertise ()
{
  m_node.CancelTimer (m_periodicTimer);
  m_table.AdvanceOwnSeq ();
  DsdvUpdate dump = m_table.Dump ();
  ++m_stats.periodicUpdates;
  // A full dump supersedes any triggered update still waiting on the rate limit.
  m_node.CancelTimer (m_triggerTimer);
  m_triggerTimer = {};
  m_node.SendBroadcast (MakeMessage (dump), DsdvUpdateSize (dump.entries.size ()));

  double factor = m_node.Rng ().Uniform (1.0 - m_params.advertiseJitter,
                                         1.0 + m_params.advertiseJitter);
  SchedulePeriodic (SimTime::FromSeconds (m_params.advertiseInterval.Seconds () * factor));
  return dump;
}

std::vector<DsdvTableChange>
Dsdv::HandleUpdate (const DsdvUpdate &update)
{
  uint32_t ownSeq = m_table.OwnSeq ();
  auto changes = m_table.ApplyUpdate (update, m_node.Now ());
  if (m_table.OwnSeq () != ownSeq)
    {
      // Someone believes this node is unreachable; answer with the fresher seq.
      RequestTriggeredUpdate ();
    }
  for (const auto &c : changes)
    {
      if (c.IsSignificant () || m_params.triggerOnSequenceChange)
        {
          RequestTriggeredUpdate ();
          break;
        }
    }
  return changes;
}

std::vector<NodeId>
Dsdv::HandleLinkBreak (NodeId deadNeighbor)
{
  auto dests = m_table.InvalidateVia (deadNeighbor, m_node.Now ());
  if (!dests.empty ())
    {
      m_stats.invalidations += dests.size ();
      RequestTriggeredUpdate ();
    }
  return dests;
}

void
Dsdv::RequestTriggeredUpdate ()
{
  if (m_triggerTimer.IsValid ())
    {
      return;
    }
  SimTime now = m_node.Now ();
  if (!m_lastTriggered || now - *m_lastTriggered >= m_params.triggeredMinGap)
    {
      SendTriggeredUpdate ();
      return;
    }
  SimTime wait = *m_lastTriggered + m_params.triggeredMinGap - now;
  m_triggerTimer = m_node.ScheduleTimer (wait, [this] () { SendTriggeredUpdate (); });
}

void
Dsdv::SendTriggeredUpdate ()
{
  m_triggerTimer = {};
  m_lastTriggered = m_node.Now ();
  ++m_stats.triggeredUpdates;
  DsdvUpdate dump = m_table.Dump ();
  m_node.SendBroadcast (MakeMessage (dump), DsdvUpdateSize (dump.entries.size ()));
}

void
Dsdv::SendData (const DataPacket &packet)
{
  Forward (packet);
}

void
Dsdv::Forward (DataPacket packet)
{
  if (packet.destination == m_node.Self ())
    {
      m_node.DeliverToApplication (packet);
      return;
    }
  auto next = m_table.Lookup (packet.destination);
  if (!next)
    {
      m_node.DropData (packet, DropReason::NoRoute);
      return;
    }
  uint32_t size = packet.app.size;
  m_node.SendUnicast (*next, MakeMessage (DataMsg{std::move (packet)}), size);
}

void
Dsdv::Receive (const Frame &frame)
{
  if (const auto *update = std::get_if<DsdvUpdate> (frame.payload.get ()))
    {
      HandleUpdate (*update);
    }
  else if (const auto *data = std::get_if<DataMsg> (frame.payload.get ()))
    {
      DataPacket packet = data->packet;
      ++packet.hops;
      Forward (std::move (packet));
    }
}

void
Dsdv::OnLinkFailure (NodeId nextHop, const Frame &frame)
{
  HandleLinkBreak (nextHop);
  if (const DataPacket *packet = DataOf (*frame.payload))
    {
      m_node.DropData (*packet, DropReason::LinkBroken);
    }
}

} // namespace manet
