#ifndef MANET_ENGINE_H
#define MANET_ENGINE_H

#include "manet/sim_time.h"
#include "manet/types.h"

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace manet {

enum class EventKind : uint8_t
{
  FrameArrival,
  TimerExpiry,
  MobilityUpdate,
  TrafficTick,
  SimulationEnd,
};

const char *ToString (EventKind kind);

class SchedulingInPast : public std::logic_error
{
public:
  SchedulingInPast (SimTime fireAt, SimTime now);
};

/// Identifies one scheduled event. A default-constructed handle refers to nothing.
struct EventHandle
{
  SimTime fireAt;
  uint64_t seq = 0;

  bool
  IsValid () const
  {
    return seq != 0;
  }
};

/// One line of the dispatch log.
struct DispatchRecord
{
  SimTime at;
  uint64_t seq;
  EventKind kind;
  NodeId target;

  bool operator== (const DispatchRecord &) const = default;
};

/**
 * Single-threaded discrete-event core.
 *
 * Events are ordered by (fire time, insertion sequence). The sequence counter
 * starts at 1 and is never reused, so equal-time events fire in the order they
 * were scheduled.
 */
class Engine
{
public:
  using Action = std::function<void ()>;

  SimTime
  Now () const
  {
    return m_now;
  }

  /// Throws SchedulingInPast if fireAt < Now().
  EventHandle Schedule (SimTime fireAt, EventKind kind, NodeId target, Action action);

  EventHandle
  ScheduleIn (SimTime delay, EventKind kind, NodeId target, Action action)
  {
    return Schedule (m_now + delay, kind, target, std::move (action));
  }

  /// True if the event was still pending; it will never fire.
  bool Cancel (const EventHandle &handle);

  bool IsPending (const EventHandle &handle) const;

  /// Dispatches every event with fire time <= end, then sets the clock to end.
  uint64_t RunUntil (SimTime end);

  size_t
  PendingCount () const
  {
    return m_queue.size ();
  }

  uint64_t
  DispatchedCount () const
  {
    return m_dispatched;
  }

  void
  EnableDispatchLog (bool enable)
  {
    m_logEnabled = enable;
  }

  const std::vector<DispatchRecord> &
  DispatchLog () const
  {
    return m_log;
  }

private:
  struct Pending
  {
    EventKind kind;
    NodeId target;
    Action action;
  };
  using Key = std::pair<int64_t, uint64_t>;

  SimTime m_now;
  uint64_t m_nextSeq = 1;
  uint64_t m_dispatched = 0;
  std::map<Key, Pending> m_queue;
  bool m_logEnabled = false;
  std::vector<DispatchRecord> m_log;
};

} // namespace manet

#endif
