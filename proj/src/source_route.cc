#include "manet/source_route.h"

#include <algorithm>
#include <unordered_set>

namespace manet {

namespace {

bool
HasDuplicate (const std::vector<NodeId> &hops)
{
  if (hops.size () < 16)
    {
      for (size_t i = 0; i < hops.size (); ++i)
        {
          for (size_t j = i + 1; j < hops.size (); ++j)
            {
              if (hops[i] == hops[j])
                {
                  return true;
                }
            }
        }
      return false;
    }
  std::unordered_set<NodeId> seen;
  for (NodeId n : hops)
    {
      if (!seen.insert (n).second)
        {
          return true;
        }
    }
  return false;
}

} // namespace

SourceRoute::SourceRoute (std::vector<NodeId> hops)
  : m_hops (std::move (hops))
{
  if (HasDuplicate (m_hops))
    {
      throw DuplicateHop ();
    }
}

std::optional<SourceRoute>
SourceRoute::TryMake (std::vector<NodeId> hops)
{
  if (HasDuplicate (hops))
    {
      return std::nullopt;
    }
  SourceRoute r;
  r.m_hops = std::move (hops);
  return r;
}

std::optional<SourceRoute>
SourceRoute::Concat (std::span<const NodeId> prefix, std::span<const NodeId> suffix)
{
  std::vector<NodeId> hops (prefix.begin (), prefix.end ());
  hops.insert (hops.end (), suffix.begin (), suffix.end ());
  return TryMake (std::move (hops));
}

bool
SourceRoute::Contains (NodeId n) const
{
  return std::find (m_hops.begin (), m_hops.end (), n) != m_hops.end ();
}

std::optional<size_t>
SourceRoute::IndexOf (NodeId n) const
{
  auto it = std::find (m_hops.begin (), m_hops.end (), n);
  if (it == m_hops.end ())
    {
      return std::nullopt;
    }
  return static_cast<size_t> (it - m_hops.begin ());
}

bool
SourceRoute::ContainsLink (NodeId a, NodeId b) const
{
  for (size_t i = 0; i + 1 < m_hops.size (); ++i)
    {
      if ((m_hops[i] == a && m_hops[i + 1] == b) || (m_hops[i] == b && m_hops[i + 1] == a))
        {
          return true;
        }
    }
  return false;
}

SourceRoute
SourceRoute::Slice (size_t first, size_t last) const
{
  SourceRoute r;
  r.m_hops.assign (m_hops.begin () + first, m_hops.begin () + last + 1);
  return r;
}

SourceRoute
SourceRoute::Reversed () const
{
  SourceRoute r;
  r.m_hops.assign (m_hops.rbegin (), m_hops.rend ());
  return r;
}

bool
RouteCache::Insert (const SourceRoute &route)
{
  if (route.Size () < 2 || m_capacity == 0)
    {
      return false;
    }
  if (std::find (m_paths.begin (), m_paths.end (), route) != m_paths.end ())
    {
      return false;
    }
  while (m_paths.size () >= m_capacity)
    {
      m_paths.pop_front ();
    }
  m_paths.push_back (route);
  return true;
}

std::optional<SourceRoute>
RouteCache::Find (NodeId dest) const
{
  const SourceRoute *best = nullptr;
  for (const auto &p : m_paths)
    {
      if (p.Back () == dest && (best == nullptr || p.Size () < best->Size ()))
        {
          best = &p;
        }
    }
  if (best == nullptr)
    {
      return std::nullopt;
    }
  return *best;
}

std::vector<SourceRoute>
RouteCache::FindAll (NodeId dest) const
{
  std::vector<SourceRoute> out;
  for (const auto &p : m_paths)
    {
      if (p.Back () == dest)
        {
          out.push_back (p);
        }
    }
  return out;
}

size_t
RouteCache::PurgeLink (NodeId a, NodeId b)
{
  size_t before = m_paths.size ();
  std::erase_if (m_paths, [&] (const SourceRoute &p) { return p.ContainsLink (a, b); });
  return before - m_paths.size ();
}

bool
RouteCache::ContainsLink (NodeId a, NodeId b) const
{
  return std::any_of (m_paths.begin (), m_paths.end (),
                      [&] (const SourceRoute &p) { return p.ContainsLink (a, b); });
}

} // namespace manet
