#include "manet/radio.h"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace manet {

Radio::Radio (Engine &engine, MobilityModel &mobility, const LinkModel &link,
              const MacParams &mac, uint64_t seed)
  : m_engine (engine),
    m_mobility (mobility),
    m_link (link),
    m_mac (mac),
    m_rng (seed, "mac"),
    m_nodes (mobility.NodeCount ())
{
}

void
Radio::SetReceiveCallback (NodeId node, ReceiveCallback cb)
{
  m_nodes.at (node).onReceive = std::move (cb);
}

void
Radio::SetLinkFailureCallback (NodeId node, LinkFailureCallback cb)
{
  m_nodes.at (node).onLinkFailure = std::move (cb);
}

bool
Radio::InRange (NodeId a, NodeId b, SimTime at)
{
  return Distance (m_mobility.PositionAt (a, at), m_mobility.PositionAt (b, at)) <= m_link.range;
}

std::vector<NodeId>
Radio::Neighbors (NodeId node, SimTime at)
{
  std::vector<NodeId> out;
  Position self = m_mobility.PositionAt (node, at);
  for (NodeId other = 0; other < m_nodes.size (); ++other)
    {
      if (other != node && Distance (self, m_mobility.PositionAt (other, at)) <= m_link.range)
        {
          out.push_back (other);
        }
    }
  return out;
}

SimTime
Radio::Airtime (uint32_t size) const
{
  double us = static_cast<double> (size) * 8.0 * 1e6 / m_link.bandwidth;
  return SimTime::FromMicros (static_cast<int64_t> (std::ceil (us - 1e-9)));
}

void
Radio::Broadcast (NodeId src, MessagePtr payload, uint32_t size, TxCompletion done)
{
  assert (size >= kFrameHeaderBytes);
  auto out = std::make_shared<Outgoing> ();
  out->frame = Frame{src, kBroadcast, size, std::move (payload), SimTime ()};
  out->done = std::move (done);
  Enqueue (std::move (out));
}

void
Radio::Unicast (NodeId src, NodeId nextHop, MessagePtr payload, uint32_t size, TxCompletion done)
{
  assert (size >= kFrameHeaderBytes);
  auto out = std::make_shared<Outgoing> ();
  out->frame = Frame{src, nextHop, size, std::move (payload), SimTime ()};
  out->done = std::move (done);
  Enqueue (std::move (out));
}

void
Radio::Enqueue (OutgoingPtr out)
{
  NodeId src = out->frame.src;
  if (m_mac.mode == MacMode::Ideal)
    {
      BeginAttempt (std::move (out));
      return;
    }
  if (out->frame.dst == kBroadcast && !out->jittered)
    {
      // Broadcast jitter is spent before queueing so it never holds up the frames behind it.
      out->jittered = true;
      SimTime delay = DrawDefer (out->frame);
      m_engine.ScheduleIn (delay, EventKind::TimerExpiry, src,
                           [this, out = std::move (out)] () mutable { Enqueue (std::move (out)); });
      return;
    }
  NodeMac &mac = m_nodes.at (src);
  if (mac.queue.size () >= m_mac.queueLimit)
    {
      ++m_stats.queueDrops;
      TxResult result;
      result.outcome = DeliveryOutcome::QueueOverflow;
      if (out->done)
        {
          out->done (out->frame, result);
        }
      return;
    }
  mac.queue.push_back (std::move (out));
  if (!mac.busy)
    {
      StartNext (src);
    }
}

SimTime
Radio::DrawDefer (const Frame &frame)
{
  SimTime window = frame.dst == kBroadcast ? m_mac.broadcastJitter : m_mac.unicastBackoff;
  if (window.Micros () <= 0)
    {
      return SimTime ();
    }
  return SimTime::FromMicros (m_rng.UniformInt (int64_t{0}, window.Micros ()));
}

void
Radio::StartNext (NodeId node)
{
  NodeMac &mac = m_nodes[node];
  if (mac.queue.empty ())
    {
      mac.busy = false;
      return;
    }
  mac.busy = true;
  OutgoingPtr out = std::move (mac.queue.front ());
  mac.queue.pop_front ();
  SimTime defer = out->frame.dst == kBroadcast ? SimTime () : DrawDefer (out->frame);
  ScheduleAttempt (std::move (out), defer);
}

void
Radio::ScheduleAttempt (OutgoingPtr out, SimTime defer)
{
  NodeId src = out->frame.src;
  m_engine.ScheduleIn (defer, EventKind::TimerExpiry, src,
                       [this, out = std::move (out)] () mutable { BeginAttempt (std::move (out)); });
}

void
Radio::BeginAttempt (OutgoingPtr out)
{
  ++out->attempts;
  ++m_stats.transmissions;
  SimTime now = m_engine.Now ();
  out->frame.txStart = now;
  SimTime airtime = Airtime (out->frame.size);
  Transmission tx{out->frame.src, now, now + airtime};
  if (m_mac.mode == MacMode::Realistic)
    {
      m_longestAirtime = std::max (m_longestAirtime, airtime);
      m_log.push_back (tx);
    }
  m_engine.Schedule (tx.end, EventKind::TimerExpiry, tx.src,
                     [this, out = std::move (out), tx] () mutable {
                       EndAttempt (std::move (out), tx);
                     });
}

bool
Radio::Collided (const Transmission &tx, NodeId receiver)
{
  if (m_mac.mode == MacMode::Ideal)
    {
      return false;
    }
  for (const Transmission &other : m_log)
    {
      if (other.src == tx.src || other.src == receiver)
        {
          continue;
        }
      if (other.start < tx.end && other.end > tx.start
          && InRange (other.src, receiver, std::max (tx.start, other.start)))
        {
          return true;
        }
    }
  return false;
}

void
Radio::PruneLog ()
{
  SimTime horizon = m_engine.Now () - m_longestAirtime;
  std::erase_if (m_log, [horizon] (const Transmission &t) { return t.end < horizon; });
}

void
Radio::EndAttempt (OutgoingPtr out, Transmission tx)
{
  const Frame &frame = out->frame;
  SimTime deliverAt = tx.end + m_link.perHopLatency;
  TxResult result;
  result.attempts = out->attempts;

  auto reachable = [&] (NodeId r) {
    return InRange (tx.src, r, tx.start) && InRange (tx.src, r, tx.end)
           && InRange (tx.src, r, deliverAt);
  };
  auto deliver = [&] (NodeId r) {
    ++m_stats.deliveries;
    result.recipients.push_back (r);
    m_engine.Schedule (deliverAt, EventKind::FrameArrival, r, [this, r, frame] () {
      if (m_nodes[r].onReceive)
        {
          m_nodes[r].onReceive (frame);
        }
    });
  };

  if (frame.dst == kBroadcast)
    {
      for (NodeId r = 0; r < m_nodes.size (); ++r)
        {
          if (r == tx.src || !reachable (r))
            {
              continue;
            }
          if (Collided (tx, r))
            {
              ++m_stats.collisions;
              result.collided.push_back (r);
            }
          else
            {
              deliver (r);
            }
        }
      result.outcome = DeliveryOutcome::Delivered;
    }
  else
    {
      NodeId r = frame.dst;
      bool ok = false;
      if (reachable (r))
        {
          if (Collided (tx, r))
            {
              ++m_stats.collisions;
              result.collided.push_back (r);
            }
          else
            {
              ok = true;
            }
        }
      if (ok)
        {
          deliver (r);
          result.outcome = DeliveryOutcome::Delivered;
        }
      else if (out->attempts <= m_mac.retryLimit)
        {
          SimTime wait = m_link.perHopLatency;
          if (m_mac.mode == MacMode::Realistic)
            {
              wait += DrawDefer (frame);
            }
          ScheduleAttempt (std::move (out), wait);
          if (m_mac.mode == MacMode::Realistic)
            {
              PruneLog ();
            }
          return;
        }
      else
        {
          ++m_stats.linkBreaks;
          result.outcome = DeliveryOutcome::LinkBroken;
        }
    }
  if (m_mac.mode == MacMode::Realistic)
    {
      PruneLog ();
    }
  Finish (std::move (out), result);
}

void
Radio::Finish (OutgoingPtr out, const TxResult &result)
{
  NodeId src = out->frame.src;
  if (out->done)
    {
      out->done (out->frame, result);
    }
  if (result.outcome == DeliveryOutcome::LinkBroken && m_nodes[src].onLinkFailure)
    {
      m_nodes[src].onLinkFailure (out->frame.dst, out->frame);
    }
  if (m_mac.mode == MacMode::Realistic)
    {
      StartNext (src);
    }
}

} // namespace manet
