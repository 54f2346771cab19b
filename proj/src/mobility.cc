#include "manet/mobility.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace manet {

double
Distance (const Position &a, const Position &b)
{
  return std::hypot (a.x - b.x, a.y - b.y);
}

std::vector<Position>
InitPositions (size_t nodeCount, const Area &area, RngStream &rng)
{
  if (nodeCount == 0)
    {
      throw InvalidNodeCount ();
    }
  std::vector<Position> out;
  out.reserve (nodeCount);
  for (size_t i = 0; i < nodeCount; ++i)
    {
      double x = rng.Uniform (0, area.width);
      double y = rng.Uniform (0, area.height);
      out.push_back ({x, y});
    }
  return out;
}

Position
WaypointLeg::At (SimTime t) const
{
  if (t <= start)
    {
      return from;
    }
  if (t >= arrive)
    {
      return to;
    }
  double length = Distance (from, to);
  double travelled = (t - start).Seconds () * speed;
  double frac = std::min (1.0, travelled / length);
  return {from.x + (to.x - from.x) * frac, from.y + (to.y - from.y) * frac};
}

RandomWaypoint::RandomWaypoint (const RandomWaypointParams &params, uint64_t seed,
                                size_t nodeCount)
  : m_params (params)
{
  RngStream init (seed, "mobility", 0);
  auto positions = InitPositions (nodeCount, params.area, init);
  for (size_t i = 0; i < positions.size (); ++i)
    {
      m_nodes.push_back (NodeTrack{positions[i], RngStream (seed, "mobility", i + 1), {}});
    }
}

RandomWaypoint::RandomWaypoint (const RandomWaypointParams &params, uint64_t seed,
                                std::vector<Position> initial)
  : m_params (params)
{
  if (initial.empty ())
    {
      throw InvalidNodeCount ();
    }
  for (size_t i = 0; i < initial.size (); ++i)
    {
      m_nodes.push_back (NodeTrack{initial[i], RngStream (seed, "mobility", i + 1), {}});
    }
}

WaypointLeg
RandomWaypoint::DrawLeg (NodeTrack &track, SimTime start, Position from)
{
  WaypointLeg leg;
  leg.start = start;
  leg.from = from;
  leg.to = {track.rng.Uniform (0, m_params.area.width),
            track.rng.Uniform (0, m_params.area.height)};
  // Uniform in (min, max].
  leg.speed = m_params.maxSpeed - (m_params.maxSpeed - m_params.minSpeed) * track.rng.Uniform ();
  double travel = Distance (from, leg.to) / leg.speed;
  leg.arrive = start + SimTime::FromMicros (static_cast<int64_t> (std::ceil (travel * 1e6)));
  leg.resume = leg.arrive + *m_params.pause;
  return leg;
}

void
RandomWaypoint::ExtendTo (NodeTrack &track, SimTime t)
{
  if (track.legs.empty ())
    {
      track.legs.push_back (DrawLeg (track, SimTime (), track.initial));
    }
  while (track.legs.back ().resume <= t)
    {
      const WaypointLeg &last = track.legs.back ();
      track.legs.push_back (DrawLeg (track, last.resume, last.to));
    }
}

const WaypointLeg &
RandomWaypoint::LegAt (NodeId node, SimTime t)
{
  NodeTrack &track = m_nodes.at (node);
  ExtendTo (track, t);
  auto it = std::upper_bound (track.legs.begin (), track.legs.end (), t,
                              [] (SimTime v, const WaypointLeg &l) { return v < l.start; });
  if (it == track.legs.begin ())
    {
      return track.legs.front ();
    }
  return *(it - 1);
}

Position
RandomWaypoint::PositionAt (NodeId node, SimTime t)
{
  if (IsStatic ())
    {
      return m_nodes.at (node).initial;
    }
  return LegAt (node, t).At (t);
}

WaypointState
RandomWaypoint::State (NodeId node, SimTime t)
{
  WaypointState s;
  if (IsStatic ())
    {
      s.current = s.destination = m_nodes.at (node).initial;
      s.pausingUntil = SimTime::Max ();
      return s;
    }
  const WaypointLeg &leg = LegAt (node, t);
  s.current = leg.At (t);
  s.destination = leg.to;
  s.speed = leg.speed;
  if (t >= leg.arrive)
    {
      s.pausingUntil = leg.resume;
    }
  return s;
}

ScriptedMobility::ScriptedMobility (std::vector<Position> initial)
{
  for (const auto &p : initial)
    {
      m_tracks.push_back ({{SimTime (), p}});
    }
}

void
ScriptedMobility::MoveAt (NodeId node, SimTime at, Position pos)
{
  m_tracks.at (node).emplace_back (at, pos);
}

Position
ScriptedMobility::PositionAt (NodeId node, SimTime t)
{
  const auto &track = m_tracks.at (node);
  Position p = track.front ().second;
  for (const auto &[at, pos] : track)
    {
      if (at > t)
        {
          break;
        }
      p = pos;
    }
  return p;
}

void
WriteMovementTrace (std::ostream &os, MobilityModel &mobility, SimTime interval, SimTime end)
{
  os << "time,node,x,y\n";
  char buf[96];
  for (SimTime t; t <= end; t += interval)
    {
      for (NodeId n = 0; n < mobility.NodeCount (); ++n)
        {
          Position p = mobility.PositionAt (n, t);
          std::snprintf (buf, sizeof buf, "%s,%u,%.3f,%.3f\n", t.ToString ().c_str (), n, p.x, p.y);
          os << buf;
        }
    }
}

} // namespace manet
