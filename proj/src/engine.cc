#include "manet/engine.h"

namespace manet {

const char *
ToString (EventKind kind)
{
  switch (kind)
    {
    case EventKind::FrameArrival:
      return "FrameArrival";
    case EventKind::TimerExpiry:
      return "TimerExpiry";
    case EventKind::MobilityUpdate:
      return "MobilityUpdate";
    case EventKind::TrafficTick:
      return "TrafficTick";
    case EventKind::SimulationEnd:
      return "SimulationEnd";
    }
  return "?";
}

SchedulingInPast::SchedulingInPast (SimTime fireAt, SimTime now)
  : std::logic_error ("event scheduled at " + fireAt.ToString () + " but clock is "
                      + now.ToString ())
{
}

EventHandle
Engine::Schedule (SimTime fireAt, EventKind kind, NodeId target, Action action)
{
  if (fireAt < m_now)
    {
      throw SchedulingInPast (fireAt, m_now);
    }
  uint64_t seq = m_nextSeq++;
  m_queue.emplace (Key{fireAt.Micros (), seq}, Pending{kind, target, std::move (action)});
  return EventHandle{fireAt, seq};
}

bool
Engine::Cancel (const EventHandle &handle)
{
  if (!handle.IsValid ())
    {
      return false;
    }
  return m_queue.erase (Key{handle.fireAt.Micros (), handle.seq}) > 0;
}

bool
Engine::IsPending (const EventHandle &handle) const
{
  return handle.IsValid () && m_queue.count (Key{handle.fireAt.Micros (), handle.seq}) > 0;
}

uint64_t
Engine::RunUntil (SimTime end)
{
  uint64_t count = 0;
  while (!m_queue.empty ())
    {
      auto it = m_queue.begin ();
      if (it->first.first > end.Micros ())
        {
          break;
        }
      SimTime at = SimTime::FromMicros (it->first.first);
      uint64_t seq = it->first.second;
      Pending ev = std::move (it->second);
      m_queue.erase (it);
      m_now = at;
      if (m_logEnabled)
        {
          m_log.push_back (DispatchRecord{at, seq, ev.kind, ev.target});
        }
      ++count;
      ++m_dispatched;
      if (ev.action)
        {
          ev.action ();
        }
    }
  if (end > m_now)
    {
      m_now = end;
    }
  return count;
}

} // namespace manet
