#ifndef MANET_DSDV_H
#define MANET_DSDV_H

#include "manet/routing.h"

#include <map>
#include <optional>
#include <vector>

namespace manet {

inline constexpr uint32_t kDsdvHeaderBytes = 20;
inline constexpr uint32_t kDsdvBytesPerEntry = 12;

inline uint32_t
DsdvUpdateSize (size_t entries)
{
  return kDsdvHeaderBytes + kDsdvBytesPerEntry * static_cast<uint32_t> (entries);
}

struct DsdvParams
{
  SimTime advertiseInterval = Seconds (15);
  /// Each period is advertiseInterval * U[1 - jitter, 1 + jitter].
  double advertiseJitter = 0.2;
  /// The first periodic dump goes out at U[0, startWindow].
  SimTime startWindow = Seconds (1);
  /// Triggered updates are sent at most this often. Zero sends each one at once,
  /// which keeps a fresh sequence number spreading in shortest-path order.
  SimTime triggeredMinGap = SimTime ();
  /// Also trigger when only a destination's sequence number changed.
  bool triggerOnSequenceChange = true;

  bool operator== (const DsdvParams &) const = default;
};

/// seq even: valid route. seq odd: invalidated, hops = kDsdvInfinity.
struct DsdvEntry
{
  NodeId dest = kNoNode;
  NodeId nextHop = kNoNode;
  uint32_t hops = kDsdvInfinity;
  uint32_t seq = 0;
  SimTime installTime;

  bool
  IsValid () const
  {
    return seq % 2 == 0 && hops != kDsdvInfinity;
  }

  bool operator== (const DsdvEntry &) const = default;
};

struct DsdvTableChange
{
  std::optional<DsdvEntry> before;
  DsdvEntry after;

  /// Anything beyond a bare sequence-number refresh: new route, new next
  /// hop, new hop count, or a change in validity.
  bool IsSignificant () const;
};

/**
 * The per-node DSDV routing table.
 *
 * An advertised (dest, S_n, h) replaces the stored (dest, S_p, h_p) when
 * S_n > S_p, or when S_n == S_p and h + 1 < h_p. Anything else is ignored.
 */
class DsdvTable
{
public:
  explicit DsdvTable (NodeId self)
    : m_self (self)
  {
  }

  NodeId
  Self () const
  {
    return m_self;
  }

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

  /// Own sequence number += 2. Returns the new value.
  uint32_t AdvanceOwnSeq ();

  /// Entry for dest; for dest == Self() a synthetic (self, 0 hops, own seq) entry.
  std::optional<DsdvEntry> Find (NodeId dest) const;

  /// Overwrites whatever is stored for entry.dest. Used to seed tables in fixtures.
  void Install (const DsdvEntry &entry);

  /// Applies the acceptance rule to every advertised destination. Entries
  /// about this node are never installed, but an advertised invalidation of
  /// this node (odd seq above its own) lifts the own seq to the next even
  /// number so the refutation outranks it.
  std::vector<DsdvTableChange> ApplyUpdate (const DsdvUpdate &update, SimTime now);

  /// Entries whose next hop is dead become (seq + 1, infinite hops). Returns their dests.
  std::vector<NodeId> InvalidateVia (NodeId dead, SimTime now);

  std::optional<NodeId> Lookup (NodeId dest) const;

  /// Full dump: self entry first, then learned entries by ascending dest.
  DsdvUpdate Dump () const;

  const std::map<NodeId, DsdvEntry> &
  Entries () const
  {
    return m_entries;
  }

private:
  NodeId m_self;
  uint32_t m_ownSeq = 0;
  std::map<NodeId, DsdvEntry> m_entries;
};

struct DsdvStats
{
  uint64_t periodicUpdates = 0;
  uint64_t triggeredUpdates = 0;
  uint64_t invalidations = 0;
};

class Dsdv : public RoutingProtocol
{
public:
  Dsdv (NodeServices &node, const DsdvParams &params = {});

  Protocol
  Kind () const override
  {
    return Protocol::Dsdv;
  }

  void Start () override;
  void SendData (const DataPacket &packet) override;
  void Receive (const Frame &frame) override;
  void OnLinkFailure (NodeId nextHop, const Frame &frame) override;

  /// Bumps own seq by two, broadcasts a full dump and re-arms the timer.
  DsdvUpdate PeriodicAdvertise ();

  /// Applies an update from a neighbor and triggers an update if the table changed
  /// (only on significant change when triggerOnSequenceChange is off).
  std::vector<DsdvTableChange> HandleUpdate (const DsdvUpdate &update);

  /// Invalidates routes via the dead neighbor and triggers an update if any changed.
  std::vector<NodeId> HandleLinkBreak (NodeId deadNeighbor);

  std::optional<NodeId>
  RouteLookup (NodeId dest) const
  {
    return m_table.Lookup (dest);
  }

  const DsdvTable &
  Table () const
  {
    return m_table;
  }

  DsdvTable &
  MutableTable ()
  {
    return m_table;
  }

  const DsdvStats &
  Stats () const
  {
    return m_stats;
  }

private:
  void SchedulePeriodic (SimTime delay);
  void RequestTriggeredUpdate ();
  void SendTriggeredUpdate ();
  void Forward (DataPacket packet);

  DsdvParams m_params;
  DsdvTable m_table;
  EventHandle m_periodicTimer;
  EventHandle m_triggerTimer;
  std::optional<SimTime> m_lastTriggered;
  DsdvStats m_stats;
};

} // namespace manet

#endif
