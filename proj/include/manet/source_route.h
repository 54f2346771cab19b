#ifndef MANET_SOURCE_ROUTE_H
#define MANET_SOURCE_ROUTE_H

#include "manet/types.h"

#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace manet {

class DuplicateHop : public std::invalid_argument
{
public:
  DuplicateHop ()
    : std::invalid_argument ("source route repeats a node")
  {
  }
};

/**
 * An explicit node path from source to destination, inclusive.
 *
 * Loop-free by construction: every way of building one rejects a repeated
 * node.
 */
class SourceRoute
{
public:
  SourceRoute () = default;

  /// Throws DuplicateHop.
  explicit SourceRoute (std::vector<NodeId> hops);

  /// nullopt instead of throwing.
  static std::optional<SourceRoute> TryMake (std::vector<NodeId> hops);

  /// prefix followed by suffix; nullopt if the result would repeat a node.
  static std::optional<SourceRoute> Concat (std::span<const NodeId> prefix,
                                            std::span<const NodeId> suffix);

  const std::vector<NodeId> &
  Hops () const
  {
    return m_hops;
  }

  size_t
  Size () const
  {
    return m_hops.size ();
  }

  bool
  Empty () const
  {
    return m_hops.empty ();
  }

  NodeId
  Front () const
  {
    return m_hops.front ();
  }

  NodeId
  Back () const
  {
    return m_hops.back ();
  }

  NodeId
  operator[] (size_t i) const
  {
    return m_hops[i];
  }

  bool Contains (NodeId n) const;

  /// Position of n, or nullopt.
  std::optional<size_t> IndexOf (NodeId n) const;

  /// True if a and b are adjacent on the route, in either direction.
  bool ContainsLink (NodeId a, NodeId b) const;

  /// hops[first .. last] inclusive.
  SourceRoute Slice (size_t first, size_t last) const;

  SourceRoute Reversed () const;

  bool operator== (const SourceRoute &) const = default;

private:
  std::vector<NodeId> m_hops;
};

/// Header bytes a source route adds to a DSR packet.
inline constexpr uint32_t kDsrBaseHeader = 16;
inline constexpr uint32_t kDsrBytesPerHop = 4;

inline uint32_t
DsrHeaderSize (size_t routeLength)
{
  return kDsrBaseHeader + kDsrBytesPerHop * static_cast<uint32_t> (routeLength);
}

/**
 * Bounded path cache with FIFO eviction.
 */
class RouteCache
{
public:
  explicit RouteCache (size_t capacity = 64)
    : m_capacity (capacity)
  {
  }

  /// Adds a path unless an identical one is cached. Evicts the oldest when full.
  /// Returns true if the path was added.
  bool Insert (const SourceRoute &route);

  /// Shortest cached path ending at dest; the oldest wins ties.
  std::optional<SourceRoute> Find (NodeId dest) const;

  /// Every cached path ending at dest, oldest first.
  std::vector<SourceRoute> FindAll (NodeId dest) const;

  /// Removes every path containing the link a-b (either direction). Returns how many.
  size_t PurgeLink (NodeId a, NodeId b);

  bool ContainsLink (NodeId a, NodeId b) const;

  size_t
  Size () const
  {
    return m_paths.size ();
  }

  size_t
  Capacity () const
  {
    return m_capacity;
  }

  const std::deque<SourceRoute> &
  Paths () const
  {
    return m_paths;
  }

private:
  size_t m_capacity;
  std::deque<SourceRoute> m_paths;
};

} // namespace manet

#endif
